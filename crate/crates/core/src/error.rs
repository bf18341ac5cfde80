use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid transform: {0}")]
    InvalidTransform(String),

    #[error("unsupported transform: {0}")]
    UnsupportedTransform(String),

    #[error("invalid set: {0}")]
    InvalidSet(String),

    /// No degree up to the limit met the tolerance.
    #[error("no degree <= {max_degree} reached tolerance {tol:e}; best error {best_error:e} at degree {best_degree}")]
    MaxDegreeExceeded {
        max_degree: usize,
        tol: f64,
        best_error: f64,
        best_degree: usize,
    },

    /// The orthonormal basis became too large to convert back to monomials.
    #[error("basis growth factor {growth:e} exceeds limit at degree {degree}; last safe degree {last_safe_degree:?}, best error {best_error:e}")]
    IllConditioned {
        degree: usize,
        last_safe_degree: Option<usize>,
        growth: f64,
        best_error: f64,
    },

    #[error("approximation failed for task {task_index} ({task}): {reason}")]
    ApproximationFailed {
        task_index: usize,
        task: String,
        reason: String,
        achieved_error: Option<f64>,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("artifact error: {0}")]
    Artifact(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
