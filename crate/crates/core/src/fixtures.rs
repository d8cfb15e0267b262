//! Bundled model and identity files.

pub const ANYONIC_MODEL: &str = include_str!("../fixtures/anyonic.model");
pub const NLINE_MODEL: &str = include_str!("../fixtures/nline.model");
pub const HOPF_TGL: &str = include_str!("../fixtures/hopf.tgl");
pub const COMODULE_TGL: &str = include_str!("../fixtures/comodule.tgl");
pub const YANGBAXTER_TGL: &str = include_str!("../fixtures/yangbaxter.tgl");

/// Resolve a builtin fixture by name.
pub fn builtin(name: &str) -> Option<&'static str> {
    match name {
        "anyonic.model" | "anyonic" => Some(ANYONIC_MODEL),
        "nline.model" | "nline" => Some(NLINE_MODEL),
        "hopf.tgl" => Some(HOPF_TGL),
        "comodule.tgl" => Some(COMODULE_TGL),
        "yangbaxter.tgl" => Some(YANGBAXTER_TGL),
        _ => None,
    }
}
