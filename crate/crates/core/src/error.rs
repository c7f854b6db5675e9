//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide error enum. Computational routines return these instead of
/// panicking; panics are reserved for violated internal invariants that
/// indicate a bug (e.g. mixing scalars from different fields).
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("algebra is not associative")]
    NotAssociative,
    #[error("algebra has no unit")]
    NotUnital,
    #[error("the given subspace is not a two-sided ideal")]
    NotIdeal,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {p} is too small for dimension {dim} (need p > dim)")]
    SmallCharacteristic { p: u64, dim: usize },
    #[error("algebra does not split over the base field: {0}")]
    NotSplit(String),
    #[error("missing splitting metadata: {0}")]
    MissingSplitting(String),
    #[error("degenerate instance: {0}")]
    Degenerate(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
