//! Exact computer algebra for gauge theory with braided structure groups.
//!
//! The engine works in the category of Z_n-graded vector spaces over the
//! cyclotomic field Q(q), with the anyonic braiding
//! `psi(v (x) w) = q^(|v||w|) w (x) v`. On top of an exact linear-algebra
//! core it builds braided Hopf algebras, universal differential calculi,
//! principal bundles with connections, gauge transformations, associated
//! fiber bundles with covariant derivatives, and a small textual DSL for
//! checking diagrammatic identities.

pub mod algebra;
pub mod associated;
pub mod fixtures;
pub mod forms;
pub mod gauge;
pub mod graded;
pub mod model;
pub mod models;
pub mod report;
pub mod scalar;
pub mod suites;
pub mod tangle;

pub use graded::{GradedMap, GradedSpace, Subspace};
pub use scalar::{Scalar, ScalarError};
