use thiserror::Error;

/// Errors raised by the library. Falsified invariants are reported through
/// check reports rather than this type; these are contract violations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("q must be a prime power >= 2, got {0}")]
    InvalidOrder(u64),
    #[error("rank d must be >= 1, got {0}")]
    InvalidRank(i64),
    #[error("family {family} requires a square order, got q = {q}")]
    NonSquareOrder { family: &'static str, q: u64 },
    #[error("odd half-power q^({half_steps}/2) requested for non-square q = {q}")]
    OddHalfPower { q: u64, half_steps: i64 },
    #[error("negative exponent {half_steps}/2 where an integer power was required")]
    NegativeExponent { half_steps: i64 },
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("parity violation: {0}")]
    Parity(String),
    #[error("unsupported field order q = {0} (supported: 2, 3, 4, 5, 7, 9)")]
    UnsupportedField(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("enumeration cap exceeded: {expected} generators exceed cap {cap}")]
    CapExceeded { expected: String, cap: usize },
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error("simplex exceeded {0} pivots")]
    IterationCap(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
