use thiserror::Error;

/// Errors raised by the library. The CLI maps each variant to an exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |H_ij - conj(H_ji)| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state invariant violated: {invariant} (measured {residual:.6e})")]
    InvalidState { invariant: String, residual: f64 },

    #[error("invalid Schmidt coefficients: {0}")]
    InvalidCoefficients(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("decomposition rank mismatch: state has rank {state_rank}, spec declares {spec_rank}")]
    RankMismatch { state_rank: usize, spec_rank: usize },

    #[error("partition identity violated: residual {residual:.3e}")]
    PartitionViolation { residual: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
