use std::io;

use thiserror::Error;

/// Errors raised by the library.
///
/// The variants line up with the CLI's exit codes: input and parse problems
/// are data errors, contract and invariant failures are internal.
#[derive(Debug, Error)]
pub enum Error {
    /// Caller supplied values that violate an operation's precondition
    /// (bad parameters, out-of-range indices, mismatched dimensions).
    #[error("invalid input: {0}")]
    Input(String),

    /// A text file could not be parsed.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An operation was called in a state its contract forbids,
    /// e.g. adding a candidate that is already in the pool.
    #[error("contract violation: {0}")]
    Contract(String),

    /// An internal consistency check failed.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
