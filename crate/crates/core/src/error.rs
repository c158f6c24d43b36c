use thiserror::Error;

use crate::exact::{fmt_q, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("rank {0} is not supported (need rank >= 2)")]
    RankTooSmall(usize),
    #[error("rank {0} is not supported by this engine")]
    UnsupportedRank(usize),
    /// Levels are kept as printed rationals so the error stays small.
    #[error("level mismatch: weight has level {found}, expected {expected}")]
    LevelMismatch { expected: String, found: String },
    #[error("weight has {found} coefficients, expected {expected}")]
    WeightLength { expected: usize, found: usize },
    #[error("element is not of weight zero")]
    NotWeightZero,
    #[error("projection of p{index} at n = {n} vanished identically")]
    ZeroProjection { index: u8, n: u32 },
    #[error("truncation degree {degree} is below the required {required}")]
    TruncationTooSmall { degree: u32, required: u32 },
    #[error("adjoint closure did not stabilise within {0} generated elements")]
    ClosureCapExceeded(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub fn level_mismatch(expected: &Rational, found: &Rational) -> Self {
        Error::LevelMismatch {
            expected: fmt_q(expected),
            found: fmt_q(found),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
