use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A brute-force pass was refused because it exceeds a configured limit.
    #[error("{what} of {requested} exceeds the configured limit of {limit}")]
    CapExceeded { what: &'static str, requested: u128, limit: u128 },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn cap(what: &'static str, requested: impl Into<u128>, limit: impl Into<u128>) -> Self {
        Error::CapExceeded { what, requested: requested.into(), limit: limit.into() }
    }

    pub fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse { position, message: message.into() }
    }

    /// True for refusals caused by caps or ceilings rather than bad input.
    pub fn is_limit(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
