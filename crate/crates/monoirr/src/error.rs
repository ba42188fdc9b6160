use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on the inputs was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// The request is well-formed but larger than a configured bound.
    #[error("unsupported size: {0}")]
    UnsupportedSize(String),
    /// The estimated work exceeds the caller's budget.
    #[error("work budget exceeded: {0}")]
    BudgetExceeded(String),
    /// A state the finite-group arguments rule out; reaching it is a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
