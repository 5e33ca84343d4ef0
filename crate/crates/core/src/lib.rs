//! Numerical model of scaled numbers, fiber-level scaling fields and the
//! covariant derivatives built on them, with an SU(2) × U(1) gauge layer.

pub mod bundle_fields;
pub mod covariant_derivatives;
pub mod error;
pub mod gauge;
pub mod scaled_scalars;
pub mod scaled_vectors;
pub mod studies;
pub mod tol;

pub use error::{Error, Result};
