// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("computation infeasible: {0}")]
    Infeasible(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid factor operation: {0}")]
    InvalidFactorOp(String),

    #[error("invalid factor: {0}")]
    InvalidFactor(String),

    #[error("generators are linearly dependent")]
    DependentGenerators,

    #[error("odd-weight coset is outside the even-weight classification")]
    OddWeightCoset,

    #[error("no class matched: {0}")]
    NoClassMatched(String),

    #[error("inconsistent input: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
