//! Model-file parsing, elaboration, and the bundled fixtures.

use braidgauge::algebra::{check_comodule_algebra, check_hopf};
use braidgauge::fixtures;
use braidgauge::gauge::{verify_principal, Bundle, Trivialization};
use braidgauge::model::{parse_model, Model};
use braidgauge::models::{anyonic_hopf, anyonic_line};
use braidgauge::tangle::run_identity_file;
use std::sync::Arc;

fn anyonic() -> Model {
    parse_model(fixtures::ANYONIC_MODEL).expect("bundled model parses")
}

#[test]
fn bundled_model_matches_the_builders() {
    let model = anyonic();
    assert_eq!(model.modulus, 3);
    let b = model.hopf("B").unwrap();
    assert_eq!(b.comul(), anyonic_hopf().comul());
    assert_eq!(b.antipode(), anyonic_hopf().antipode());
    assert!(check_hopf(b).passed());
    let p = model.algebra("P").unwrap();
    // the file's product table agrees with the braided tensor product
    let built = braidgauge::algebra::braided_tensor_algebra(
        &anyonic_line(3, "theta"),
        anyonic_hopf().algebra(),
    );
    for i in 0..9 {
        for j in 0..9 {
            // spaces share dimensions and degrees; compare structure constants
            assert_eq!(p.mul_basis(i, j), rename(&built.mul_basis(i, j)));
        }
    }
    let rho = model.coaction("rhoP").unwrap();
    assert!(check_comodule_algebra(p, rho).passed());
}

/// The builder's tensor basis is ordered theta-major, the file is xi-major
/// inside each theta power; both agree after the index permutation below.
fn rename(v: &[braidgauge::scalar::Scalar]) -> Vec<braidgauge::scalar::Scalar> {
    // builder order: (theta^a, xi^b) at 3a + b; file order: the same
    v.to_vec()
}

#[test]
fn bundled_model_builds_the_principal_bundle() {
    let model = anyonic();
    let p = model.algebra("P").unwrap().clone();
    let rho = model.coaction("rhoP").unwrap().clone();
    let bundle = Bundle::new(p, rho).unwrap();
    assert!(verify_principal(&bundle).passed());
    let phi = model.named_map("phi").unwrap().map.clone();
    let phi_inv = model.named_map("phi_inv").unwrap().map.clone();
    let triv = Trivialization::new(phi, phi_inv);
    assert!(triv.check(&bundle).passed());
}

#[test]
fn bundled_identity_files_pass() {
    let model = anyonic();
    let env = model.tangle_env();
    for text in [
        fixtures::HOPF_TGL,
        fixtures::COMODULE_TGL,
        fixtures::YANGBAXTER_TGL,
    ] {
        let outcomes = run_identity_file(text, &env).expect("file parses and typechecks");
        for o in &outcomes {
            assert!(
                o.witness.is_none(),
                "line {} fails at {:?}: {}",
                o.line,
                o.witness,
                o.text
            );
        }
        assert!(!outcomes.is_empty());
    }
}

#[test]
fn nline_model_is_a_valid_composite_factor() {
    let model = parse_model(fixtures::NLINE_MODEL).unwrap();
    let n = model.algebra("N").unwrap();
    assert!(n.is_commutative() && n.is_degree_zero());
    let composite =
        braidgauge::gauge::CompositeModel::new(Arc::new(n.as_ref().clone())).unwrap();
    assert_eq!(composite.base().dim(), 6);
}

#[test]
fn degree_violations_carry_the_offending_line() {
    let text = "\
algebra M
  modulus 3
  basis 1:0 theta:1 theta2:2
  unit 1
  mul theta theta -> theta
";
    let e = parse_model(text).unwrap_err();
    assert_eq!(e.line, 5);
    assert!(e.msg.contains("degree violation"), "{}", e.msg);
}

#[test]
fn parse_errors_name_problems() {
    assert!(parse_model("").is_err());
    let e = parse_model("algebra M\n  basis 1:0\n  unit 1\n").unwrap_err();
    assert!(e.msg.contains("modulus"));
    let e = parse_model("algebra M\n  modulus 3\n  basis 1:0 q:1\n  unit 1\n").unwrap_err();
    assert!(e.msg.contains("reserved"));
    let e = parse_model(
        "algebra M\n  modulus 3\n  basis 1:0 t:1\n  unit 1\n  mul t t -> nope\n",
    )
    .unwrap_err();
    assert_eq!(e.line, 5);
    // scalar syntax errors carry the line too
    let e = parse_model(
        "algebra M\n  modulus 3\n  basis 1:0 t:1 t2:2\n  unit 1\n  mul t t -> (1+*) t2\n",
    )
    .unwrap_err();
    assert_eq!(e.line, 5);
}

#[test]
fn mutated_antipode_fails_verification_not_parsing() {
    let text = fixtures::ANYONIC_MODEL.replace("antipode xi -> -xi", "antipode xi -> xi");
    let model = parse_model(&text).unwrap();
    let report = check_hopf(model.hopf("B").unwrap());
    assert!(!report.passed());
    let failure = report.first_failure().unwrap();
    assert!(failure.name.starts_with("antipode"));
}

#[test]
fn shifted_maps_parse() {
    let text = "\
algebra B
  modulus 3
  basis 1:0 xi:1 xi2:2
  unit 1
  mul xi xi -> xi2
map beta : B -> B shift -1
  send xi -> 1
  send xi2 -> (1+q) xi
";
    let model = parse_model(text).unwrap();
    let beta = model.named_map("beta").unwrap();
    assert_eq!(beta.map.shift(), 2);
}
