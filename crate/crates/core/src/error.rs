use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("n-gram order {0} is outside 1..=4")]
    InvalidOrder(usize),

    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("failed to parse {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("unknown image id `{0}`")]
    UnknownImage(String),

    #[error("reference corpus is empty")]
    EmptyCorpus,

    #[error("image `{image_id}` has {available} usable references, {requested} requested")]
    NotEnoughReferences {
        image_id: String,
        available: usize,
        requested: usize,
    },

    #[error("systems do not cover the same images; missing: {0:?}")]
    CoverageMismatch(Vec<String>),

    #[error("unknown metric `{name}`; registered metrics: {}", registered.join(", "))]
    UnknownMetric {
        name: String,
        registered: Vec<&'static str>,
    },

    #[error("idf cache mismatch: {0}")]
    CacheMismatch(String),

    #[error("correlation undefined: {0}")]
    Correlation(&'static str),
}

impl Error {
    /// Stable machine-readable tag used in CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidOrder(_) => "invalid_order",
            Error::Io { .. } => "io",
            Error::Parse { .. } => "parse",
            Error::Validation(_) => "validation",
            Error::UnknownImage(_) => "unknown_image",
            Error::EmptyCorpus => "empty_corpus",
            Error::NotEnoughReferences { .. } => "not_enough_references",
            Error::CoverageMismatch(_) => "coverage_mismatch",
            Error::UnknownMetric { .. } => "unknown_metric",
            Error::CacheMismatch(_) => "cache_mismatch",
            Error::Correlation(_) => "correlation_undefined",
        }
    }
}
