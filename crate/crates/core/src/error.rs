use thiserror::Error;

/// Errors raised by the group model, the decision procedures and the file format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid datum: {0}")]
    InvalidDatum(String),

    #[error("group is not Camina of class 2")]
    NotCamina,

    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u32, u32),

    #[error("parameter mismatch: (p, r, n) = {0:?} vs {1:?}")]
    ParameterMismatch((u32, usize, usize), (u32, usize, usize)),

    #[error("size guard exceeded: {what} needs {needed}, limit {limit}")]
    SizeGuard {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error(
        "random datum search gave up after {attempts} attempts ({rejected} rejected as non-Camina)"
    )]
    RetriesExhausted { attempts: u32, rejected: u32 },

    #[error("coboundary system is inconsistent")]
    InconsistentCoboundary,

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
