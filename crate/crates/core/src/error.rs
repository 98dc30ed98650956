use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("support of rho is not contained in the support of sigma")]
    SupportViolation,
    #[error("matrix is rank deficient (min eigenvalue {0:e})")]
    RankDeficient(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("size guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("negative probability {value:e} at atom {atom}")]
    NegativeProbability { value: f64, atom: usize },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
