//! Shared error type for the whole library.

use thiserror::Error;

/// Errors raised by numerical routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument is outside the domain a routine is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative method did not reach the requested tolerance.
    ///
    /// `best` carries the last estimate and `error_bound` the estimated
    /// residual error, when the method can provide them.
    #[error("convergence failure in {what}: best estimate {best:?}, error bound {error_bound:?}")]
    Convergence {
        what: String,
        best: Option<f64>,
        error_bound: Option<f64>,
    },

    /// A curve fit diverged or produced unusable parameters.
    #[error("fit error: {0}")]
    Fit(String),

    /// Filesystem or serialization failure while writing artifacts.
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn convergence(
        what: impl Into<String>,
        best: Option<f64>,
        bound: Option<f64>,
    ) -> Self {
        Error::Convergence {
            what: what.into(),
            best,
            error_bound: bound,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
