use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("delta center {0:?} lies outside the sampling box")]
    OutsideBox(Vec<f64>),
    #[error("aliasing: {0}")]
    Nyquist(String),
    #[error("matrix is not antisymmetric")]
    NotAntisymmetric,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("wavefront estimation: {0}")]
    Estimator(String),
    #[error("cone representation error in component {index}: {reason}")]
    Representation { index: usize, reason: String },
    #[error("exact operation not supported on sampled caps")]
    NotExact,
    #[error("feasibility system too large ({0} inequalities)")]
    TooLarge(usize),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
