use std::path::PathBuf;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("input domain error: {0}")]
    InputDomain(String),

    #[error("instance too large for exhaustive enumeration: n = {n} exceeds the limit of {limit} rows")]
    TooLarge { n: usize, limit: usize },

    #[error("{path}: row {row}, column {col}: {message}")]
    Load {
        path: PathBuf,
        row: usize,
        col: usize,
        message: String,
    },

    #[error("preprocessing failed at row {row}, column {col}: {message}")]
    Preprocess {
        row: usize,
        col: usize,
        message: String,
    },

    #[error("generator: {0}")]
    Generator(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
