use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("base set mixes moduli {0} and {1}")]
    MixedModuli(i64, i64),

    #[error("capacity exceeded: {0}")]
    CapacityExceeded(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("inconsistent Hilbert values: trailing coefficient {residual} is nonzero")]
    InconsistentHilbert { residual: i64 },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
