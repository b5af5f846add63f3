use thiserror::Error;

/// Errors shared across the word operations, the engine, the oracles and
/// the text formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A componentwise sum left the ternary alphabet. For valid engine
    /// inputs this cannot happen; seeing it means a defect, not bad data.
    #[error("addition overflow at index {index}: component sum {sum} leaves {{-1,0,+1}}")]
    AdditionOverflow { index: usize, sum: i8 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("operation requires a non-empty word")]
    EmptyWord,

    #[error("cannot take prefix of length {want} from a word of length {len}")]
    TruncateOutOfRange { len: usize, want: usize },

    #[error("invalid symbol value {0}, expected -1, 0 or 1")]
    InvalidSymbol(i8),

    #[error("invalid pair: {0}")]
    InvalidPair(String),

    #[error("table is for (p={table_p}, r={table_r}) but the pair needs (p={pair_p}, r={pair_r})")]
    TableMismatch {
        table_p: u64,
        table_r: u64,
        pair_p: u64,
        pair_r: u64,
    },

    #[error("division is not exact")]
    InexactDivision,

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("coefficient {value} at exponent {exponent} is outside {{-1,0,+1}}")]
    AlphabetViolation { exponent: u64, value: i64 },

    #[error("output length {len} exceeds the supported maximum {max}")]
    OutputTooLarge { len: u64, max: u64 },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
