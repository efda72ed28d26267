use std::path::PathBuf;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} = {value} is out of range (maximum {max})")]
    OutOfRange {
        what: &'static str,
        value: u64,
        max: u64,
    },

    /// The request needs a larger prime table than the one supplied, or a
    /// table larger than the configured cap.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("unavailable: {0}")]
    Unavailable(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A mathematical property the library relies on was observed to fail.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
