use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed input: unparsable text, unknown option values and the like.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// Well-formed input that violates an operation's precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A computation exceeded a configured resource cap.
    #[error("limit exceeded: {0}")]
    LimitExceeded(String),
    /// An internal consistency check failed.
    #[error("internal check failed: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
