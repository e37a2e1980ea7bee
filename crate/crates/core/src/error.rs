use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("rank must be at least 2, got {0}")]
    RankTooSmall(usize),

    #[error("generator index {index} is outside 1..={rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },

    #[error("cannot parse word: {0}")]
    ParseWord(String),

    #[error("length {length} exceeds the enumeration guard {guard} for rank {rank}")]
    GuardExceeded { rank: usize, length: usize, guard: usize },

    #[error("exact count overflowed {repr} at length {length}")]
    Overflow { repr: &'static str, length: usize },

    #[error("numerical breakdown at length {length}: {entries} entries with normalized residual above {tolerance:e} (worst {worst:e})")]
    NumericalBreakdown {
        length: usize,
        entries: usize,
        tolerance: f64,
        worst: f64,
    },

    #[error("invalid lattice set: {0}")]
    InvalidSet(String),

    #[error("invalid quadratic norm: {0}")]
    InvalidNorm(String),

    #[error("lattice scan needs {needed} points, budget is {budget}")]
    PointBudget { needed: u128, budget: u128 },

    #[error("rank mismatch: expected {expected}, got {actual}")]
    RankMismatch { expected: usize, actual: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
