use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("length mismatch: {0} sites vs {1} sites")]
    LengthMismatch(usize, usize),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid Schläfli symbol {{{n},{k}}}: {reason}")]
    InvalidSchlafli { n: usize, k: usize, reason: String },

    #[error("tensor has {planar} planar legs but the tiling needs {degree}")]
    LegMismatch { planar: usize, degree: usize },

    #[error("network is not an isometry: {0}")]
    NotIsometric(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
