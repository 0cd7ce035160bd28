//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A sequence violated a structural requirement (empty, bad alphabet, ...).
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    /// Autocorrelation lag outside the valid range.
    #[error("lag {lag} out of range for sequence of length {len}")]
    LagOutOfRange { lag: i64, len: usize },

    /// Two sequences that must have equal length do not.
    #[error("length mismatch: {a} vs {b}")]
    LengthMismatch { a: usize, b: usize },

    /// A pair failed Golay complementary verification; `lag` is the first
    /// lag whose autocorrelation sum is nonzero.
    #[error("not a Golay complementary pair: autocorrelation sum nonzero at lag {lag}")]
    NotAGcp { lag: usize },

    /// Bad parameter combination or configuration document.
    #[error("configuration error: {0}")]
    Config(String),

    /// A signal-domain precondition failed (zero energy, truncated, ...).
    #[error("signal error: {0}")]
    Signal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
