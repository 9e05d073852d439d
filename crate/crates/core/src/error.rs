use thiserror::Error;

use crate::halfint::HalfInt;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("cannot parse `{0}` as a half-integer")]
    ParseHalfInt(String),

    #[error("projection {m} is incompatible with angular momentum {j}")]
    ParityMismatch { j: HalfInt, m: HalfInt },

    #[error("|{m}| exceeds angular momentum {j}")]
    ProjectionOutOfRange { j: HalfInt, m: HalfInt },

    #[error("negative angular momentum {0}")]
    NegativeSpin(HalfInt),

    #[error("rank {rank} not available on spin {j} (need rank <= 2j)")]
    RankOutOfRange { j: HalfInt, rank: i64 },

    #[error("angular momenta ({0}, {1}, {2}) do not couple")]
    Triangle(HalfInt, HalfInt, HalfInt),

    #[error("spin pair requires j1 <= j2, got j1 = {0}, j2 = {1}")]
    UnorderedPair(HalfInt, HalfInt),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("operator is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("beta_0 must equal 1, got {0}")]
    NotNormalizedBeta(f64),

    #[error("parameter {name} = {value} outside {range}")]
    ParameterRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("3xN system needs N >= 3, got {0}")]
    SystemSize(usize),

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
