use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite sample {value} at node {index} (x = {x})")]
    NonFiniteSample { index: usize, x: f64, value: f64 },

    #[error("operator/field mismatch: {0}")]
    DimensionMismatch(String),

    #[error("incompatible operators for extrapolation: {0}")]
    IncompatibleLadder(String),

    #[error("assembly budget exceeded: N * 2^m = {work} > {budget}")]
    BudgetExceeded { work: u64, budget: u64 },

    #[error("no cached operator at {0}")]
    MissingKey(PathBuf),

    #[error("checksum mismatch in {0}")]
    ChecksumMismatch(PathBuf),

    #[error("unsupported cache format version {found} (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("cache entry {path} holds {found}, requested {requested}")]
    KeyMismatch { path: PathBuf, found: String, requested: String },

    #[error("malformed cache file {path}: {reason}")]
    CacheFormat { path: PathBuf, reason: String },

    #[error("series did not converge within {0} terms")]
    SeriesNotConverged(usize),

    #[error("quadrature did not reach tolerance {tol:e} (estimate {estimate:e})")]
    QuadratureNotConverged { tol: f64, estimate: f64 },

    #[error("profile never crosses level {0}")]
    NoCrossing(f64),

    #[error("singular implicit system (pivot {0:e})")]
    SingularSystem(f64),

    #[error("non-finite solution at step {step} (t = {t})")]
    NonFiniteSolution { step: usize, t: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
