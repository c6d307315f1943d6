use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {reason}: {content:?}")]
    Parse {
        line: usize,
        content: String,
        reason: &'static str,
    },

    #[error("graph too large for 32-bit ids: {what} = {value} exceeds {limit}")]
    TooLarge {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("permutation of length {len} is not a bijection on 0..{n}")]
    NotAPermutation { len: usize, n: usize },

    #[error("support array has {got} entries but the graph has {expected} edges")]
    SupportMismatch { expected: usize, got: usize },

    #[error("oracle refuses graphs with more than {limit} vertices (got {n})")]
    OracleTooLarge { n: usize, limit: usize },

    #[error("truss level {k} outside 2..={t_max}")]
    LevelOutOfRange { k: u32, t_max: u32 },

    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),

    #[error("unknown {kind} {value:?}")]
    Unknown { kind: &'static str, value: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
