//! Error type shared by every operation in the crate.

use thiserror::Error;

/// Everything that can go wrong while configuring the unit, combining
/// elements, or running one of the scan algorithms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScanError {
    /// The tensor unit only multiplies s x s tiles for s >= 2.
    #[error("tile dimension s must be at least 2, got {s}")]
    InvalidDimension { s: usize },

    /// The fixed-shape scan needs an input whose length is an exact power
    /// of the tile dimension; arbitrary lengths go through the
    /// general-length driver instead.
    #[error(
        "input length {n} is not a power of s = {s}; use the general-length scan \
         (`--algo general` on the command line)"
    )]
    NotPowerOfS { n: usize, s: usize },

    /// Scans of nothing are rejected rather than silently returning nothing.
    #[error("input must contain at least one element")]
    EmptyInput,

    /// Checked 64-bit addition overflowed; inputs this large are a caller
    /// error, not something to wrap around silently.
    #[error("integer overflow combining {a} and {b}")]
    Overflow { a: i64, b: i64 },

    /// A scatter was handed a replacement vector that does not match the
    /// number of slots selected by (start, step).
    #[error("scatter length mismatch: stride selects {expected} slots, got {got} values")]
    ScatterLengthMismatch { expected: usize, got: usize },

    /// Keys and flags must pair up one-to-one in a split pass.
    #[error("length mismatch: {keys} keys vs {flags} flags")]
    FlagLengthMismatch { keys: usize, flags: usize },

    /// The closed-form cost rows for the classic networks are only defined
    /// at power-of-two input sizes.
    #[error("{algorithm} cost formula requires n to be a power of two, got {n}")]
    NotPowerOfTwo { algorithm: &'static str, n: u64 },

    /// The radix sort peels one bit per pass from 32-bit keys.
    #[error("bits must be between 1 and 32, got {bits}")]
    InvalidBits { bits: u32 },
}
