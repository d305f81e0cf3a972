use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("{what} = {value} lies outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("direction is not a unit vector (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("invalid urn weights: {0}")]
    InvalidWeights(String),

    #[error("invalid vertex set: {0}")]
    InvalidVertexSet(String),

    #[error("vertex set is degenerate: affine rank {rank} < dimension {dim}")]
    Degenerate { rank: usize, dim: usize },

    #[error("ellipse axes must be positive and finite, got a = {a}, b = {b}")]
    InvalidShape { a: f64, b: f64 },

    #[error("profile resolution {0} is below the minimum of 64")]
    Resolution(usize),

    #[error("trial count must be at least 1")]
    ZeroTrials,

    #[error("grid must not be empty")]
    EmptyGrid,

    #[error("thread pool: {0}")]
    ThreadPool(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn finite(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { what, value })
    }
}

pub(crate) fn in_range(what: &'static str, value: f64, lo: f64, hi: f64) -> Result<f64> {
    finite(what, value)?;
    if (lo..=hi).contains(&value) {
        Ok(value)
    } else {
        Err(Error::OutOfRange { what, value, lo, hi })
    }
}
