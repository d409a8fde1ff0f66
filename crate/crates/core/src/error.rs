use thiserror::Error;

/// Errors raised by the evaluation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at `{path}` (line {line}, column {column}): {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("validation error in {record}: {message}")]
    Validation { record: String, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate pose: {0}")]
    DegeneratePose(String),

    #[error("degenerate layout: {0}")]
    DegenerateLayout(String),

    #[error("node {node} is not in front of the eye (depth {depth})")]
    BehindEye { node: usize, depth: f64 },

    #[error("no range for graph `{graph}`, measure {measure}")]
    MissingRange { graph: String, measure: String },

    #[error("malformed range table: {0}")]
    RangeTable(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn validation(record: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            record: record.into(),
            message: message.into(),
        }
    }
}
