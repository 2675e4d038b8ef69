use thiserror::Error;

/// Crate-wide error type.
///
/// The variants mirror the CLI exit codes: parse/validation problems map to
/// exit 2, undefined invariants (e.g. torsion of a non-acyclic complex) to
/// exit 3, and internal cross-check failures to exit 4.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("invariant undefined: {0}")]
    Undefined(String),

    #[error("internal cross-check failure: {0}")]
    CrossCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse { position, message: message.into() }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Error::Validation(message.into())
    }

    pub fn undefined(message: impl Into<String>) -> Self {
        Error::Undefined(message.into())
    }

    pub fn cross_check(message: impl Into<String>) -> Self {
        Error::CrossCheck(message.into())
    }
}
