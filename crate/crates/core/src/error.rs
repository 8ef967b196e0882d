use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the analysis pipeline.
///
/// The variants line up with the CLI exit codes: configuration problems are
/// usage errors, ingest/slicing problems are data errors, and consistency
/// failures indicate a broken internal invariant.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("ingest error: {0}")]
    Ingest(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("events outside all windows at timestamps {timestamps:?}")]
    OutsideWindows { timestamps: Vec<i64> },

    #[error("internal consistency error: {0}")]
    Consistency(String),

    #[error("failed to write {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn ingest(msg: impl Into<String>) -> Self {
        Error::Ingest(msg.into())
    }

    pub(crate) fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
