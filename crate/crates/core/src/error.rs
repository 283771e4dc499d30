use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Text that does not parse as a permutation, pattern or file record.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("not a permutation of 1..={n}: {reason}")]
    InvalidPermutation { n: usize, reason: String },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("window start {start} with width {width} does not fit a permutation of length {n}")]
    WindowOutOfRange { start: usize, width: usize, n: usize },

    #[error("invalid window width {k} for n = {n}")]
    InvalidWidth { k: usize, n: usize },

    #[error("pattern {0} is not of the form 1^r 0^s 1^t 0^u")]
    NotReversible(String),

    #[error("{what} limited to n <= {limit}, got n = {n} (raise it with --max-n-override)")]
    GuardExceeded {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),
}

impl Error {
    /// Errors caused by malformed input text rather than by a well-formed
    /// request the domain rejects.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::InvalidPermutation { .. })
    }
}
