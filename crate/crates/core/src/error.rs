use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors are split by kind so that drivers can map them onto distinct exit codes:
/// precondition violations, failed mathematical checks, and malformed input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("division by non-unit: {0}")]
    NonUnit(String),
    #[error("precision budget exceeded: {0}")]
    Precision(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("mismatched structures: {0}")]
    Mismatch(String),
}

impl Error {
    pub fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn malformed(msg: impl Into<String>) -> Self {
        Error::Malformed(msg.into())
    }

    pub fn mismatch(msg: impl Into<String>) -> Self {
        Error::Mismatch(msg.into())
    }
}
