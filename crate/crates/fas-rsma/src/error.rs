//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a mathematical precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// Vector/matrix shapes do not line up.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A correlation matrix could not be Cholesky-factored even after
    /// diagonal regularization. Carries the largest jitter attempted.
    #[error("correlation matrix is numerically singular (attempted jitter {jitter:.3e})")]
    SingularMatrix { jitter: f64 },

    /// The operation is defined but not for this configuration
    /// (e.g. the NOMA benchmark with K != 2 users).
    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    /// Scenario file failed to parse.
    #[error("scenario parse error: {0}")]
    Parse(String),

    /// Scenario parsed but violates an invariant; names the offending key.
    #[error("scenario validation error: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn dimension(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}
