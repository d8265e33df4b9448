use std::path::PathBuf;

use crate::dataset::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("missing required column `{0}`")]
    MissingColumn(String),

    #[error("dataset validation failed:\n{0}")]
    Validation(ValidationReport),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("insufficient input: {0}")]
    InsufficientInput(String),

    #[error("format error at line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("mapping conflict: original label `{0}` is mapped more than once")]
    MappingConflict(String),

    #[error("mapping does not cover {} original label(s): {}", .0.len(), .0.join(", "))]
    MappingCoverage(Vec<String>),

    #[error("invalid mapping path for `{original}`: {message}")]
    MappingPath { original: String, message: String },

    #[error("empty corpus: no category produced any terms")]
    EmptyCorpus,

    #[error("degenerate corpus: {0}")]
    DegenerateCorpus(String),

    #[error("analyses are not comparable: {0}")]
    NotComparable(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("invalid matrix: {0}")]
    Matrix(String),

    #[error("unsupported language `{0}`")]
    UnsupportedLanguage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

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
