//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed input on a specific line of an edge list or manifest.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Input that parsed but cannot be analysed (empty graph, expectation
    /// mismatch, undefined statistic selected, too few datasets, ...).
    #[error("{0}")]
    Data(String),

    /// A computation would exceed a resource bound; the message includes the
    /// estimated requirement.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Shorthand for a [`Error::Data`] with a formatted message.
    pub fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }
}
