//! Shared error type for the whole crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input violates a mathematical precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configured size or iteration limit was exceeded.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Matrix rank differs from what the operation requires.
    #[error("rank is {actual}, expected {expected}")]
    Rank { expected: usize, actual: usize },

    /// Two independent computation paths disagreed. This always signals a
    /// bug somewhere (a formula misapplied, or a broken invariant), never
    /// bad user input.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

/// Coarse classification used by the CLI to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Precondition,
    Consistency,
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }

    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Domain(_) | Error::Capacity(_) | Error::Rank { .. } => {
                ErrorCategory::Precondition
            }
            Error::Consistency(_) => ErrorCategory::Consistency,
        }
    }
}
