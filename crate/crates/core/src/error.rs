use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix entry ({i},{j}) asymmetric by {delta:e}")]
    NotSymmetric { i: usize, j: usize, delta: f64 },

    #[error("matrix is not positive definite (Cholesky pivot {pivot:e} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("dimension {n} exceeds the limit {limit} for {op}")]
    DimensionTooLarge {
        op: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("series truncation cap hit after {terms} terms (alpha={alpha}, x={x}, y={y})")]
    SeriesCap {
        terms: usize,
        alpha: f64,
        x: f64,
        y: f64,
    },

    #[error("internal consistency violation: {0}")]
    Internal(String),

    #[error("matrix JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
