use std::path::PathBuf;

use thiserror::Error;

use crate::image_io::Dims;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: cannot decode image: {message}", path.display())]
    Decode { path: PathBuf, message: String },

    #[error("{}: unsupported sample depth of {bits} bits", path.display())]
    UnsupportedBitDepth { path: PathBuf, bits: u16 },

    #[error("cannot encode PNG: {0}")]
    Encode(String),

    #[error("unsupported channel count {0} (expected 1 or 3)")]
    UnsupportedChannels(usize),

    #[error("invalid dimensions {0}: every extent must be positive")]
    ZeroDimension(Dims),

    #[error("sample buffer holds {found} values but {dims} needs {expected}")]
    BufferLength {
        dims: Dims,
        expected: usize,
        found: usize,
    },

    #[error("malformed JND map: {0}")]
    JndFormat(String),

    #[error("threshold at element {index} is {value}; thresholds must be finite and non-negative")]
    InvalidThreshold { index: usize, value: f32 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: Dims, found: Dims },

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("series lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("series has {0} values; at least 2 are required")]
    SeriesTooShort(usize),

    #[error("series contains a non-finite value at position {0}")]
    NonFiniteScore(usize),

    #[error("series has zero variance")]
    ZeroVariance,

    #[error("manifest {}: {reason}", path.display())]
    Manifest { path: PathBuf, reason: String },

    #[error("manifest {}: line {line}: cannot parse mos {value:?}", path.display())]
    BadMos {
        path: PathBuf,
        line: usize,
        value: String,
    },

    #[error("manifest {}: duplicate path {dup}", path.display())]
    DuplicatePath { path: PathBuf, dup: String },

    #[error("{}: line {line}: cannot parse score {value:?}", path.display())]
    BadScore {
        path: PathBuf,
        line: usize,
        value: String,
    },

    #[error("train fraction {fraction} leaves no training records out of {available}")]
    EmptyTrain { fraction: f64, available: usize },

    #[error("repeat {k}: {source}")]
    Repeat {
        k: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("no JND map for {} (looked for .jndm and .png)", path.display())]
    MissingMap { path: PathBuf },

    #[error("file sets do not match: {0}")]
    FileSetMismatch(String),

    #[error("missing required argument --{0}")]
    MissingArgument(&'static str),

    #[error("cannot start worker pool: {0}")]
    WorkerPool(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status for this error: 2 for I/O failures (including
    /// undecodable files), 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. }
            | Error::Decode { .. }
            | Error::Encode(_)
            | Error::UnsupportedBitDepth { .. } => 2,
            Error::Repeat { source, .. } => source.exit_code(),
            _ => 1,
        }
    }
}
