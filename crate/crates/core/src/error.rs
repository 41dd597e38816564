use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: malformed record: {field}: {message}")]
    Record {
        line: usize,
        field: String,
        message: String,
    },

    #[error("line {line}: embedding dimension mismatch for {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        line: usize,
        context: String,
        expected: usize,
        found: usize,
    },

    #[error("duplicate document id {0:?}")]
    DuplicateDocument(String),

    #[error("merge map contains a cycle: {}", .0.join(" -> "))]
    MergeCycle(Vec<String>),

    #[error("value {0} is outside [-1, 1]")]
    OutOfRange(f64),

    #[error("unknown category {0:?}")]
    UnknownCategory(String),

    #[error("lexicon file {path}: {message}")]
    Lexicon { path: PathBuf, message: String },

    #[error("missing split file {0}")]
    MissingSplit(PathBuf),

    #[error("cannot average an empty set of embeddings for verb {0:?}")]
    EmptyFeature(String),

    #[error("inconsistent feature dimensions: expected {expected}, found {found}")]
    FeatureDimension { expected: usize, found: usize },

    #[error("non-finite feature value for verb {0:?}")]
    NonFinite(String),

    #[error("training data contains a single class ({0})")]
    SingleClass(String),

    #[error("invalid training input: {0}")]
    Training(String),

    #[error("unknown entity {0:?}")]
    UnknownEntity(String),

    #[error("label sequences differ in length: {gold} gold vs {predicted} predicted")]
    LengthMismatch { gold: usize, predicted: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("model file {path}: {message}")]
    Model { path: PathBuf, message: String },

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn record(line: usize, field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Record {
            line,
            field: field.into(),
            message: message.into(),
        }
    }
}
