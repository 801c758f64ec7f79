use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is singular over the rationals")]
    SingularMatrix,
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("operands belong to different compatible pairs")]
    PairMismatch,
    #[error("series has no unit corner term to invert from")]
    NotConic,
    #[error("insufficient precision: need {needed}/{den}, have {available}/{den}")]
    InsufficientPrecision {
        needed: i64,
        available: i64,
        den: i64,
    },
    #[error("no unique corner exponent")]
    NoUniqueCorner,
    #[error("exponent {0:?} is not of character shape")]
    NotCharacterShaped(Vec<i64>),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("index {0} is frozen")]
    FrozenIndex(usize),
    #[error("mutation at {0} creates a 2-cycle")]
    TwoCycleCreated(usize),
    #[error("neither exchange direction is effective at index {0}")]
    NoEffectiveDirection(usize),
    #[error("exact division failed: remainder is nonzero")]
    NotDivisible,
    #[error("non-integral ν-exponent in {0}")]
    HalfIntegralExponent(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("brute-force instance too large: {0}")]
    TooLarge(String),
    #[error("no exponent convention in the search box fits all instances")]
    NoFit,
    #[error("{0}")]
    Parse(String),
}
