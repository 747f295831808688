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

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("annotation references unknown utterance id {0:?}")]
    DanglingReference(String),

    #[error("duplicate utterance id {0:?}")]
    DuplicateId(String),

    #[error("invalid record for utterance {id:?}: {message}")]
    InvalidRecord { id: String, message: String },

    #[error("utterance {0:?} has no annotations for the requested task")]
    NoAnnotations(String),

    #[error("split {split} needs {requested} {class} utterances but only {available} remain")]
    InsufficientData {
        split: String,
        class: String,
        requested: usize,
        available: usize,
    },

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("indicator {0:?} has no interannotator agreement value")]
    MissingIa(String),

    #[error("utterance {id:?} has {available} annotators, {required} required")]
    InsufficientAnnotators {
        id: String,
        available: usize,
        required: usize,
    },

    #[error("no configuration reaches the minimum recall of {min_recall}")]
    NoFeasibleConfig { min_recall: f64 },

    #[error("no classified utterances to learn patterns from")]
    EmptyInput,

    #[error("phase-1 pool is empty")]
    EmptyPool,

    #[error("prediction for {0:?} has no gold label")]
    MissingGold(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
