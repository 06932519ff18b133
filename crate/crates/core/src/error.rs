use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{file}:{line}: {message}")]
    Malformed {
        file: String,
        line: usize,
        message: String,
    },

    #[error("dangling reference {reference} in {record}")]
    DanglingReference { reference: String, record: String },

    #[error("{file}: duplicate key {key}")]
    DuplicateKey { file: String, key: String },

    #[error("unknown developer {0}")]
    UnknownDeveloper(String),

    #[error("invalid activity pair ({gh}, {so})")]
    InvalidPair { gh: String, so: String },

    #[error("no co-participation score is defined for activity kind {0}")]
    UnsupportedKind(String),

    #[error("dataset has {actual} developers, oracle cap is {cap}")]
    CapExceeded { actual: usize, cap: usize },

    #[error("infeasible generator spec: {0}")]
    InfeasibleSpec(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
