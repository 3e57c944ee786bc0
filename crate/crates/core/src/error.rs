use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("data error: {0}")]
    Data(String),

    #[error("group has more than {cap} elements and is too large to enumerate; supply a character-table file instead")]
    TooLarge { cap: usize },

    #[error("enumeration supports degree at most {max}, got {degree}")]
    DegreeTooLarge { degree: usize, max: usize },

    #[error("weight vector has length {got}, expected {expected}")]
    WeightLength { got: usize, expected: usize },

    #[error("action is not transitive")]
    Intransitive,

    #[error("weights differ on a class and its inverse class; the weighted spectrum is not real")]
    NonRealSpectrum,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
