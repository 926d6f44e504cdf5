use thiserror::Error;

/// Errors produced by the dualmon library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported band {0}: closed-form renormalisation exists only for bands 0 and 1")]
    UnsupportedBand(u32),

    #[error("matrix is not Hermitian (max |M - M^dagger| = {deviation:e})")]
    NonHermitian { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("convergence failure: {0}")]
    Convergence(String),

    #[error("steady state is not unique (second-smallest singular value {second:e} vs scale {scale:e})")]
    NonUniqueSteadyState { second: f64, scale: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
