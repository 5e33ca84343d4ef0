use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by scaled structures, fields and derivative operators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("level 0 denotes the empty structure")]
    EmptyStructure,

    #[error("level mismatch: expected {expected}, found {found}")]
    LevelMismatch { expected: Complex64, found: Complex64 },

    #[error("structures with subscripts {left} and {right} cannot be combined")]
    SubscriptMismatch { left: Complex64, right: Complex64 },

    #[error("real and complex structures cannot be mixed")]
    KindMismatch,

    #[error("real-kind {what} must be real and nonnegative, got {value}")]
    NotReal { what: &'static str, value: Complex64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("site {site} is not an interior site")]
    NotInterior { site: usize },

    #[error("fields live on different lattices")]
    LatticeMismatch,

    #[error("the two sections do not share a scaling field")]
    ScalingFieldMismatch,

    #[error("group element must be nonzero")]
    ZeroGroupElement,

    #[error("gauge map is not unitary: deviation {0:e}")]
    NotUnitary(f64),

    #[error("transformed gauge field is not hermitian and traceless: deviation {0:e}")]
    GaugeInconsistency(f64),

    #[error("invalid field: {0}")]
    InvalidField(String),
}

pub type Result<T> = std::result::Result<T, Error>;
