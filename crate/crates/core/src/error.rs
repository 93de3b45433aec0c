use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature rule of order {order} is too small for {needed} basis functions per axis")]
    RuleTooSmall { order: usize, needed: usize },

    #[error("operation requires a non-zero coefficient tensor")]
    ZeroTensor,

    #[error("window inadequate: boundary magnitude {boundary:e} exceeds {threshold:e}")]
    WindowInadequate { boundary: f64, threshold: f64 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("no weight for multi-index {0}")]
    MissingWeight(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Numerical failures (as opposed to invalid input) map to exit code 2.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::WindowInadequate { .. } | Error::DegenerateFit(_)
        )
    }
}
