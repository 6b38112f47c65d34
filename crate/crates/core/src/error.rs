use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("decode error: {reason}")]
    Decode { reason: String },

    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),

    #[error("encode error: {0}")]
    Encode(String),

    #[error(
        "inverse map produced a non-finite source coordinate at destination pixel ({col}, {row})"
    )]
    NonFiniteCoordinate { col: usize, row: usize },

    #[error("newton iteration did not converge for destination radius {radius} (k1 = {k1})")]
    NoConvergence { radius: f64, k1: f64 },

    #[error("crop region is empty after rounding: {width}x{height} image, columns {x0}..{x1}, rows {y0}..{y1}")]
    DegenerateCrop {
        width: usize,
        height: usize,
        x0: usize,
        x1: usize,
        y0: usize,
        y1: usize,
    },

    #[error("patches {a} and {b} overlap")]
    PatchOverlap { a: usize, b: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: malformed json: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("no usable images found under {0}")]
    EmptyCorpus(PathBuf),

    #[error("dataset at {0} contains no records")]
    EmptyDataset(PathBuf),

    #[error("{failed} of {total} samples failed, exceeding the failure budget")]
    FailureBudget { failed: usize, total: usize },

    #[error("generation interrupted; rerun with --resume to continue")]
    Cancelled,
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn json(path: impl Into<PathBuf>, source: serde_json::Error) -> Self {
        Error::Json {
            path: path.into(),
            source,
        }
    }

    /// Short category tag used for operator-facing messages.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Argument(_) => "argument",
            Error::Decode { .. } | Error::UnsupportedFormat(_) | Error::Encode(_) => "codec",
            Error::NonFiniteCoordinate { .. } | Error::NoConvergence { .. } => "numeric",
            Error::DegenerateCrop { .. } | Error::PatchOverlap { .. } => "geometry",
            Error::Io { .. } => "io",
            Error::Json { .. } => "format",
            Error::EmptyCorpus(_) | Error::EmptyDataset(_) => "input",
            Error::FailureBudget { .. } => "budget",
            Error::Cancelled => "interrupted",
        }
    }
}
