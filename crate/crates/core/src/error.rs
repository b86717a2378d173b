use thiserror::Error;

/// Errors shared across the crate.
///
/// The CLI maps [`Error::Parameter`] to exit code 1 and
/// [`Error::Capability`] to exit code 2.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument or instance violates a documented precondition.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// The request is valid but exceeds a configured solver or evaluator cap.
    #[error("capability exceeded: {0}")]
    Capability(String),
    /// A mathematical side condition does not hold (for example the
    /// `f(c) >= f(d)` condition required by the case bounds).
    #[error("contract violated: {0}")]
    Contract(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn capability(msg: impl Into<String>) -> Self {
        Error::Capability(msg.into())
    }
}
