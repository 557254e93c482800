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

    #[error("{path}:{line}: malformed record: {message}")]
    MalformedRecord { path: PathBuf, line: usize, message: String },

    #[error("duplicate comment id {id} in project {project:?}")]
    DuplicateId { project: String, id: u64 },

    #[error("{path}:{line}: unknown label string {label:?}")]
    UnknownLabel { path: PathBuf, line: usize, label: String },

    #[error("missing label on record {project:?}/{id}: labels must be present on every record or on none")]
    MissingLabel { project: String, id: u64 },

    #[error("line-count mismatch: {comments} comment lines vs {labels} label lines")]
    LineCountMismatch { comments: usize, labels: usize },

    #[error("invalid label mapping: {0}")]
    InvalidLabelMapping(String),

    #[error("invalid comment: {0}")]
    InvalidComment(String),

    #[error("{path}:{line}: {message}")]
    Config { path: PathBuf, line: usize, message: String },

    #[error("invalid tag {0:?}: tags must be at least two letters a-z")]
    InvalidTag(String),

    #[error("pattern set is empty")]
    EmptyPatternSet,

    #[error(
        "training corpus has a single class ({present} present, other class absent); information gain is undefined"
    )]
    SingleClass { present: &'static str },

    #[error("corpus {0:?} is not labeled")]
    Unlabeled(String),

    #[error("prediction/corpus misalignment: {0}")]
    Misaligned(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("missing published cell: approach {approach:?}, project {project:?}, indicator {indicator:?}")]
    MissingPublishedCell { approach: String, project: String, indicator: String },

    #[error("training failed for target project {project:?}: {source}")]
    Training {
        project: String,
        #[source]
        source: Box<Error>,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
