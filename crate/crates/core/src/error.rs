use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degree vectors must be sorted non-increasing")]
    NotNormalized,

    #[error("edge-type class is empty")]
    EmptyClass,

    #[error("size limit exceeded: {what} is {size}, limit {limit}")]
    LimitExceeded { what: String, size: usize, limit: usize },

    #[error("solver did not converge after {iterations} iterations (gradient norm {grad_norm:.3e})")]
    NonConvergence { iterations: usize, grad_norm: f64 },

    #[error("absolute continuity violated at cell ({row}, {col})")]
    ContinuityViolated { row: usize, col: usize },

    #[error("total edge mass {0} exceeds 1")]
    MassExceedsOne(f64),

    #[error("graph uses an edge forbidden by the restriction graph")]
    RestrictionViolated,

    #[error("reduction produced a negative degree at {0}")]
    NegativeDegree(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::EmptyClass => 1,
            Error::NonConvergence { .. } => 3,
            Error::LimitExceeded { .. } => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
