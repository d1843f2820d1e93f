use thiserror::Error;

/// Errors raised across the simulator and the recovery algorithms.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("support of size {size} exceeds the {rows} available measurements")]
    SupportTooLarge { size: usize, rows: usize },

    #[error("support index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("duplicate index {0} in support")]
    DuplicateIndex(usize),

    #[error("rank-deficient least-squares system (condition estimate {condition:e})")]
    RankDeficient { condition: f64 },

    #[error("favorable set needs {needed} candidates, only {available} available")]
    NotEnoughCandidates { needed: usize, available: usize },

    #[error("favorable support {index} has zero residue")]
    ZeroResidue { index: usize },

    #[error("channel delay of {delay} samples does not fit a channel of length {channel_len}")]
    DelayTooLong { delay: usize, channel_len: usize },

    #[error("frequency offset {alpha} is degenerate: |1 - exp(j2πα)| = {gain:e}")]
    DegenerateOffset { alpha: f64, gain: f64 },

    #[error("exhaustive search over {count} supports exceeds the limit of {limit}")]
    SearchSpaceTooLarge { count: u128, limit: u128 },

    #[error("config parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
