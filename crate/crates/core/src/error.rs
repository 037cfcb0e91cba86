use std::path::PathBuf;

use crate::corpus::Polarity;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown label '{label}' at line {line}")]
    UnknownLabel { label: String, line: usize },

    #[error("instance '{id}': span {start}..={end} out of range for {tokens} tokens")]
    SpanOutOfRange {
        id: String,
        start: usize,
        end: usize,
        tokens: usize,
    },

    #[error("cluster id {id} for '{token}' at line {line} outside [0, 999]")]
    ClusterOutOfRange { token: String, id: i64, line: usize },

    #[error("no labeled messages")]
    NoLabeledMessages,

    #[error("class '{0}' absent from training data")]
    MissingClass(Polarity),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("unknown feature group '{name}' (valid groups: {valid})")]
    UnknownGroup { name: String, valid: String },

    #[error("unknown namespace '{0}' (expected tgt or ctx)")]
    UnknownNamespace(String),

    #[error("model/dictionary mismatch: {0}")]
    DictionaryMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
