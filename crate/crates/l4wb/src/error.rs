use thiserror::Error;

/// Errors shared across the workbench.
#[derive(Debug, Error)]
pub enum Error {
    /// Input failed a precondition (bad weight, non-coprime moduli, ...).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A q-expansion or eigenvalue table is too short for the request.
    #[error("coefficient budget exceeded: {0}")]
    Budget(String),

    /// A quadrature or series evaluation did not meet its error target.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// The on-disk q-expansion cache is unreadable or version-mismatched.
    #[error("cache error in {path}: {msg}")]
    Cache { path: String, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn budget(msg: impl Into<String>) -> Self {
        Error::Budget(msg.into())
    }

    pub fn convergence(msg: impl Into<String>) -> Self {
        Error::Convergence(msg.into())
    }

    /// CLI exit code: 2 for validation problems, 3 for budget/convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invalid(_) => 2,
            Error::Budget(_) | Error::Convergence(_) => 3,
            Error::Cache { .. } | Error::Io(_) => 3,
        }
    }
}
