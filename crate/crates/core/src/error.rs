//! Error type shared by the whole library.
//!
//! Variants map one-to-one onto the CLI exit codes, so library code picks the
//! variant by failure class, not by call site.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or degenerate input: bad rationals, zero generators,
    /// dimension mismatches, out-of-range requests. CLI exit code 2.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Structurally valid cone that an operation does not support, e.g. a
    /// non-simplicial cone where faces are required. CLI exit code 3.
    #[error("unsupported cone: {0}")]
    UnsupportedCone(String),

    /// Direction vector unusable for the univariate scheme or for a
    /// restriction (a denominator vanishes on it). CLI exit code 4.
    #[error("invalid direction: {0}")]
    InvalidDirection(String),

    /// An internal consistency assertion failed; indicates a bug, never bad
    /// user input. CLI exit code 5.
    #[error("internal invariant violation: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::UnsupportedCone(msg.into())
    }

    pub fn direction(msg: impl Into<String>) -> Self {
        Error::InvalidDirection(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}
