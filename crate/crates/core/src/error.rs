use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("k must be at least 3, got {0}")]
    InvalidK(i64),

    #[error("cyclotomic index must be positive, got {0}")]
    InvalidCyclotomicIndex(u64),

    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("polynomial is not monic")]
    NotMonic,

    #[error("polynomial must have degree at least 1")]
    ConstantPolynomial,

    #[error("polynomial is not even: nonzero coefficient at odd exponent {0}")]
    NotEven(usize),

    #[error("divisor must be monic and nonzero")]
    NonMonicDivisor,

    #[error("Fibonacci index must be at least -1, got {0}")]
    InvalidFibonacciIndex(i64),

    #[error("relation id must be 1, 2, 3 or 4, got {0}")]
    InvalidRelation(u8),

    #[error("index {index} is outside 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("indices must be strictly increasing")]
    UnorderedIndices,

    #[error("word length {0} exceeds the supported maximum of {max}", max = crate::combinatorics::MAX_WORD_LEN)]
    WordTooLong(usize),

    #[error("word length must be at least 1 for a symbolic product")]
    EmptySymbolicWord,

    #[error("word has length {actual}, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("entry {entry} reached {terms} terms, above the ceiling of {limit}")]
    TermLimitExceeded {
        entry: char,
        terms: usize,
        limit: usize,
    },

    #[error("lambda power {power} is out of range for degree {degree}")]
    LambdaPowerOutOfRange { power: usize, degree: usize },

    #[error("closed-form index must be in 1..=8, got {0}")]
    InvalidSlot(u8),

    #[error("nonzero coefficient at subset {subset} is not admissible for position {position}")]
    NonAdmissible { subset: String, position: char },

    #[error("denominator evaluates to zero")]
    ZeroDenominator,

    #[error("seed has length {seed}, kernel has length {kernel}")]
    SeedLength { seed: usize, kernel: usize },

    #[error("sequence of length {len} is too short for window {window}")]
    SequenceTooShort { len: usize, window: usize },

    #[error("window must be at least 2")]
    WindowTooSmall,

    #[error("invalid search parameters: {0}")]
    InvalidSearch(String),

    #[error("fixture parse error on line {line}: {message}")]
    FixtureParse { line: usize, message: String },

    #[error("cannot parse position {0:?}; expected a, b, c or d")]
    InvalidPosition(String),
}
