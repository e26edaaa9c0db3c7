use std::path::PathBuf;

use thiserror::Error;

use crate::data::{AttackFlag, Label};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty dataset")]
    EmptyDataset,

    #[error("empty pool for ({label}, {flag}) with positive probability")]
    EmptyPool { label: Label, flag: AttackFlag },

    #[error("invalid distribution spec: {0}")]
    InvalidSpec(String),

    #[error("too many folds: {folds} requested for {samples} samples")]
    TooManyFolds { folds: usize, samples: usize },

    #[error("invalid resampling: {0}")]
    InvalidResampling(String),

    #[error("degenerate training set: {0}")]
    DegenerateTrainingSet(String),

    #[error("divergence at epoch {epoch}: non-finite loss")]
    Divergence { epoch: usize },

    #[error("nu too small for dataset: nu * n = {product} < 1")]
    NuTooSmall { product: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate score distribution: {0}")]
    DegenerateScores(String),

    #[error("non-binary feature value {value} at index {index}")]
    NonBinary { index: usize, value: f64 },

    #[error("capability violation: {0}")]
    CapabilityViolation(String),

    #[error("inconsistent scenario: {0}")]
    InconsistentScenario(String),

    #[error("single-class input: {0}")]
    SingleClass(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("fold {fold}, strength {strength}: {source}")]
    Sweep {
        fold: usize,
        strength: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("model format: {0}")]
    ModelFormat(String),

    #[error("report merge: {0}")]
    Merge(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// The innermost error, below stage and sweep annotations.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } | Error::Sweep { source, .. } => source.root(),
            other => other,
        }
    }

    /// Whether the error stems from the configuration or its inputs rather
    /// than from a computation.
    pub fn is_configuration(&self) -> bool {
        matches!(
            self.root(),
            Error::Config(_)
                | Error::InconsistentScenario(_)
                | Error::CapabilityViolation(_)
                | Error::Io { .. }
                | Error::Parse { .. }
        )
    }
}
