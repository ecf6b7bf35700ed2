use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("series is constant (max == min); rescaling is undefined")]
    ConstantSeries,

    #[error("series of length {len} is too short; at least {min} points are required")]
    TooShort { len: usize, min: usize },

    #[error("series contains a non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("invalid PAA segment count {segments} for a series of length {len}")]
    InvalidSegments { segments: usize, len: usize },

    #[error("invalid quantile bin count {bins} for a series of length {len}")]
    InvalidBinCount { bins: usize, len: usize },

    #[error("invalid aggregation target size {target} for a {len}x{len} field")]
    InvalidTargetSize { target: usize, len: usize },

    #[error("value {value} at index {index} lies outside [{lo}, {hi}]")]
    OutOfRange { index: usize, value: f64, lo: f64, hi: f64 },

    #[error("operation requires a {expected} field, got {found}")]
    KindMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("GASF inversion requires unit-rescaled input; symmetric-mode fields are not invertible")]
    NotInvertible,

    #[error("{path}:{line}: {reason}")]
    MalformedLine { path: String, line: usize, reason: String },

    #[error("{0}: file contains no series")]
    EmptyFile(String),

    #[error("unknown generator family '{0}'")]
    UnknownGenerator(String),

    #[error("series {index} carries no class label")]
    Unlabeled { index: usize },

    #[error("invalid generator parameters: {0}")]
    InvalidGenerator(String),

    #[error("series length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("corruption rate {0} must lie in (0, 1) and corrupt at least one point")]
    RateOutOfRange(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("training diverged at epoch {epoch} (loss is not finite)")]
    DivergenceDetected { epoch: usize },

    #[error("invalid training configuration: {0}")]
    InvalidConfig(String),

    #[error("mask is empty; imputation MSE is undefined")]
    EmptyMask,

    #[error("mask index {index} is out of bounds for length {len}")]
    MaskOutOfBounds { index: usize, len: usize },

    #[error("training data contains a single class")]
    SingleClass,

    #[error("{samples} samples cannot be split into {folds} folds")]
    TooFewSamples { samples: usize, folds: usize },

    #[error("no grid point is applicable to series of length {0}")]
    EmptyGrid(usize),

    #[error("test set is empty")]
    EmptyTestSet,

    #[error("channel size mismatch: expected {expected}x{expected}, found {found}x{found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("{path}: header mismatch: {reason}")]
    HeaderMismatch { path: String, reason: String },

    #[error("{0}: bad magic line")]
    BadMagic(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: image encoding failed: {reason}")]
    Image { path: PathBuf, reason: String },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures of the filesystem rather than of the inputs.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. } | Error::Image { .. })
    }
}
