use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// What went wrong while parsing a PBM stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PbmErrorKind {
    BadMagic,
    BadDimension,
    DimensionTooLarge,
    BadPixel,
    Truncated,
}

impl std::fmt::Display for PbmErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PbmErrorKind::BadMagic => "malformed magic number",
            PbmErrorKind::BadDimension => "invalid dimension",
            PbmErrorKind::DimensionTooLarge => "dimension exceeds 2^31-1",
            PbmErrorKind::BadPixel => "invalid pixel value",
            PbmErrorKind::Truncated => "truncated payload",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("pbm: {kind} at byte offset {offset}")]
    Pbm { kind: PbmErrorKind, offset: usize },

    #[error("ascii art: line {line} has length {len}, expected {expected}")]
    RaggedLine { line: usize, len: usize, expected: usize },

    #[error("ascii art: no lines or empty line")]
    EmptyArt,

    #[error("image: {0}")]
    InvalidImage(String),

    #[error("cannot encode an empty row")]
    EmptyRow,

    #[error("run {index}: {reason}")]
    InvalidRun { index: usize, reason: String },

    #[error("rld line {line}: {reason}")]
    Rld { line: usize, reason: String },

    #[error("transition count {count} exceeds line length {len}")]
    CountOutOfRange { count: usize, len: usize },

    #[error("transition position {pos} outside [1, {len}]")]
    PositionOutOfRange { pos: usize, len: usize },

    #[error("line index {index} outside [1, {count}]")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("density {0} outside [0, 1]")]
    InvalidDensity(f64),

    #[error("duplicate sample label {0:?}")]
    DuplicateLabel(String),

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("compressed and uncompressed paths disagree: {compressed} vs {uncompressed}")]
    PathMismatch { compressed: f64, uncompressed: f64 },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// I/O failures as opposed to invalid data or arguments.
    pub fn is_io(&self) -> bool {
        match self {
            Error::Io(_) => true,
            Error::Csv(e) => e.is_io_error(),
            Error::Json(e) => e.is_io(),
            _ => false,
        }
    }
}
