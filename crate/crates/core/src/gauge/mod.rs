//! Principal bundles with braided structure groups: invariant subalgebras,
//! the Galois map and its inverse, trivializations, connections and their
//! projections, gauge transformations (local and global), cocycle cross
//! products, curvature, and the closed-form families of the reference model.

mod bundle;
mod cocycle;
mod composite;
mod connection;
mod curvature;
mod reference;
mod transform;
mod trivial;

pub use bundle::{verify_principal, Bundle};
pub use cocycle::{
    cocycle_cross_product, extract_cocycle, rebuild_matches, transport_product, CocycleData,
};
pub use composite::{CompositeField, CompositeModel, CompositeParams};
pub use connection::{
    check_connection, check_projection, connection_from_field, connection_from_projection,
    field_from_connection, projection_from_connection, trivial_connection, Connection, GaugeField,
};
pub use curvature::{bianchi_residual, bianchi_residual_is_zero, curvature};
pub use reference::{AnyonicModel, FieldParams, GaugeParams, SectionParams};
pub use transform::{
    apply_tensor_square, check_global, global_gauge, local_gauge_compose, local_gauge_inverse,
    transform_field, transform_section, transformed_bundle, transport_connection, GlobalGauge,
    LocalGauge,
};
pub use trivial::{bundle_from_trivialization, translation_lift, trivial_bundle, Trivialization};

use crate::algebra::AlgebraError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaugeError {
    #[error("coaction is not a comodule algebra structure: {0}")]
    NotComoduleAlgebra(String),
    #[error("not a principal bundle: {0}")]
    NotPrincipal(String),
    #[error("image not in Omega^1M: {0}")]
    NotStrong(String),
    #[error("validation failed for identity {0}")]
    Validation(String),
    #[error(transparent)]
    Convolution(#[from] AlgebraError),
}
