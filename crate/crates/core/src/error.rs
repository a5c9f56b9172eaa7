use thiserror::Error;

use crate::system::Composition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed value `{token}`: {reason}")]
    Malformed { token: String, reason: String },

    #[error("value `{token}` is outside [0, 1]")]
    OutOfRange { token: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index ({row}, {col}) out of bounds for a {rows}x{cols} matrix")]
    IndexOutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("expected a {expected} system, got {found}")]
    WrongComposition {
        expected: Composition,
        found: Composition,
    },

    #[error("invalid pair sequence: {0}")]
    InvalidPairs(String),

    #[error("enumeration of {m}^{h} column tuples exceeds the candidate budget of {cap}")]
    BudgetExceeded { m: usize, h: usize, cap: u64 },

    #[error("instance too large for exhaustive enumeration: {0}")]
    TooLarge(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
