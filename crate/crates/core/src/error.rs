use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, got {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("valuation of the zero function is undefined")]
    ZeroFunction,

    #[error("division by an identically zero function")]
    DivisionByZero,

    #[error("the subspace is zero")]
    ZeroSubspace,

    #[error("dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("enumeration of {points} points exceeds the configured cap {cap}")]
    PointCap { points: u128, cap: u128 },

    #[error("unsupported arity {arity}: {reason}")]
    UnsupportedArity { arity: usize, reason: &'static str },

    #[error("polytope is not full-dimensional (affine dimension {dim} in R^{arity})")]
    NotFullDimensional { dim: usize, arity: usize },

    #[error("invalid term order: {0}")]
    InvalidOrder(String),

    #[error("degree {degree} is out of range 1..={max}")]
    DegreeOutOfRange { degree: usize, max: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate sample: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Errors caused by configured resource caps rather than bad input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::DimensionCap { .. } | Error::PointCap { .. })
    }
}
