use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the pipeline stages.
///
/// Everything except [`Error::Invariant`] is caused by bad input; the CLI maps
/// the former to exit code 1 and the latter to exit code 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{file}:{line}: {message}")]
    Record { file: String, line: usize, message: String },

    #[error("{0}")]
    Input(String),

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("graph has no edges")]
    EdgelessGraph,

    #[error("partition does not cover vertex `{0}`")]
    IncompletePartition(String),

    #[error("unsupported export: {0}")]
    UnsupportedExport(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn record(file: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Record {
            file: file.to_string(),
            line,
            message: message.into(),
        }
    }

    /// True when the error reflects a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
