use thiserror::Error;

use crate::expr::{EvalError, ParseError};

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("strict-interior membership is only defined for halfspace cones")]
    StrictOnGenerators,

    #[error("zero vector where a nonzero direction is required")]
    ZeroVector,

    #[error("point {0} does not belong to the set")]
    NotInSet(String),

    #[error("direction set is not finitely generated")]
    NotFinitelyGenerated,

    #[error("vector e is not in the interior of the ordering cone")]
    NotInterior,

    #[error("LP phase 1 is unbounded (malformed problem)")]
    LpUnbounded,

    #[error("LP found no solution where one must exist: {0}")]
    NumericalFailure(String),

    #[error("non-finite value while evaluating {0}")]
    NonFinite(String),

    #[error("inadmissible direction: {0}")]
    Inadmissible(String),

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Eval(#[from] EvalError),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
