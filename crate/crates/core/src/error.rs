use std::path::PathBuf;

use crate::ipa::IpaError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Ipa(#[from] IpaError),

    #[error("utterance mismatch: reference track `{rm}` paired with helper track `{hm}`")]
    UtteranceMismatch { rm: String, hm: String },

    #[error("no helper track for utterance `{0}`")]
    MissingCounterpart(String),

    #[error("duplicate utt_id `{0}`")]
    DuplicateUtterance(String),

    #[error("invalid mapping table: {0}")]
    InvalidTable(String),

    #[error("invalid track `{utt_id}`: {reason}")]
    InvalidTrack { utt_id: String, reason: String },

    #[error("invalid frame path `{utt_id}`: {reason}")]
    InvalidFramePath { utt_id: String, reason: String },

    #[error("need {need} segments but only {have} are available")]
    InsufficientSegments { have: usize, need: usize },

    #[error("phoneme /{phoneme}/ has {have} eligible instances, need {need}")]
    InsufficientInstances {
        phoneme: String,
        have: usize,
        need: usize,
    },

    #[error("cannot remove vocabulary token `{0}`: it still occurs in the corpus")]
    RemoveInUse(String),

    #[error("invalid vocabulary: {0}")]
    InvalidVocab(String),

    #[error("metric has an empty denominator")]
    EmptyDenominator,

    #[error("relative change from a zero baseline")]
    ZeroBaseline,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// A configuration file that failed to load or validate.
    #[error("{path}: {message}")]
    Config { path: PathBuf, message: String },

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
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
