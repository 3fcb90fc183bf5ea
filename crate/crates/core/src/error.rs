//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Interval construction with `lower > upper` or a non-finite bound.
    /// `row` carries the zero-based data row when raised during ingestion.
    #[error("invalid interval [{lower}, {upper}]{}", row_suffix(.row))]
    InvalidInterval {
        lower: f64,
        upper: f64,
        row: Option<usize>,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("target column `{0}` not found as a `{0}_lo`/`{0}_hi` pair")]
    MissingTarget(String),

    #[error("degenerate split: fraction {fraction} of {n} rows leaves an empty side")]
    DegenerateSplit { fraction: f64, n: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty batch")]
    EmptyBatch,

    #[error("shape mismatch between parameters, gradients and optimizer state")]
    ShapeMismatch,

    #[error("optimizer update produced a non-finite parameter")]
    NonFiniteUpdate,

    #[error("training diverged: {0}")]
    TrainingDiverged(String),

    #[error("rank-deficient design matrix")]
    RankDeficient,

    #[error("active-set iteration limit reached")]
    IterationLimit,

    #[error("bandwidth must be positive and finite, got {0}")]
    BandwidthInvalid(f64),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("empty input")]
    Empty,

    #[error("coverage rate undefined: every truth interval has zero width")]
    ZeroWidthTruth,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("model `{model}` failed in replication {replication}: {source}")]
    ModelFailed {
        model: String,
        replication: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn row_suffix(row: &Option<usize>) -> String {
    match row {
        Some(r) => format!(" at row {r}"),
        None => String::new(),
    }
}
