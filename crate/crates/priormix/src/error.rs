//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by prior algebra, data loading, and training.
#[derive(Debug, Error)]
pub enum Error {
    /// The class-prior matrix does not have full column rank, so the risk
    /// rewriting premise fails.
    #[error("class-prior matrix is rank deficient: {0}")]
    RankDeficient(String),

    /// Prior entries do not form the required probability simplex.
    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),

    /// Random prior generation kept producing rank-deficient matrices.
    #[error("failed to generate a full-rank class-prior matrix after {attempts} attempts")]
    GenerationFailed { attempts: usize },

    /// A bag recipe asks for more samples of some class than the source holds.
    #[error("bag {bag} needs {need} samples of class {class} but the source has {have}")]
    InsufficientClassSamples {
        bag: usize,
        class: usize,
        need: usize,
        have: usize,
    },

    /// Malformed text or binary input.
    #[error("parse error in {path} at line {line}: {msg}")]
    ParseError {
        path: String,
        line: usize,
        msg: String,
    },

    /// A label that is not a positive 1-based class index was encountered.
    #[error("label {label} at line {line} is not a 1-based class index")]
    LabelRangeError { line: usize, label: i64 },

    /// An IDX file does not start with the expected magic number.
    #[error("IDX magic mismatch in {path}: expected {expected:#010x}, found {found:#010x}")]
    MagicMismatch {
        path: String,
        expected: u32,
        found: u32,
    },

    /// Image and label IDX files disagree on the number of items.
    #[error("IDX count mismatch: {images} images vs {labels} labels")]
    CountMismatch { images: usize, labels: usize },

    /// Shapes that must agree do not.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A dataset violates its structural invariants.
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    /// A training objective produced NaN or infinity; training aborts.
    #[error("non-finite loss at epoch {epoch}")]
    NonFiniteLoss { epoch: usize },

    /// `error_drop` over an empty test-error trajectory.
    #[error("empty trajectory")]
    EmptyTrajectory,

    /// Invalid experiment or training configuration.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
