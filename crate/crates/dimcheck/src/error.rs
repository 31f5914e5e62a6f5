//! Error type shared across the crate.

use std::path::PathBuf;

/// Everything that can go wrong while loading data, estimating dimensions,
/// training learners, or running the benchmark rig.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("label column {0:?} not found in header")]
    MissingLabelColumn(String),

    #[error("cell {value:?} at row {row}, column {column:?} is not a finite number")]
    BadCell {
        row: usize,
        column: String,
        value: String,
    },

    #[error("csv has a header but no data rows")]
    EmptyData,

    #[error("dataset is malformed: {0}")]
    InvalidDataset(String),

    #[error("cannot split {n_rows} rows into {n_bins} bins")]
    TooManyBins { n_bins: usize, n_rows: usize },

    #[error("need at least {needed} rows, got {got}")]
    TooFewRows { needed: usize, got: usize },

    #[error("all pairwise distances are zero (zero-diameter dataset)")]
    ZeroDiameter,

    #[error("curve too sparse: only {usable} radii with C(r) > 0, need at least 3")]
    CurveTooSparse { usable: usize },

    #[error("invalid radius schedule: {0}")]
    InvalidSchedule(String),

    #[error("smoothing window must be an odd positive integer, got {0}")]
    InvalidWindow(usize),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("AUC undefined: input contains a single class")]
    AucUndefined,

    #[error("training data contains a single class")]
    SingleClassTraining,

    #[error("feature count mismatch: model expects {expected}, row has {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite training loss at epoch {epoch}")]
    NonFiniteLoss { epoch: usize },

    #[error("invalid training config: {0}")]
    InvalidConfig(String),

    #[error("need at least {needed} values, got {got}")]
    TooFewValues { needed: usize, got: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("train/test feature schema mismatch for {dataset:?}: {detail}")]
    SchemaMismatch { dataset: String, detail: String },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("unknown {what}: {value:?} (expected one of {options})")]
    UnknownName {
        what: &'static str,
        value: String,
        options: &'static str,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
