//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("field has not decayed at the outer boundary (|h({r:.3})| = {value:.3e})")]
    NonDecayedBoundary { r: f64, value: f64 },

    #[error("multiplier is not finite at λ = {lambda:.6e}")]
    NonFiniteMultiplier { lambda: f64 },

    #[error("matrix is not a valid Lorentz group element: {0}")]
    InvalidGroupElement(String),

    #[error("rescaling requires N ≥ 1, got {0}")]
    ScaleTooSmall(f64),

    #[error("boundary mass {fraction:.3e} exceeded tolerance {tolerance:.3e} at t = {t:.6}")]
    BoundaryMassExceeded { t: f64, fraction: f64, tolerance: f64 },

    #[error("state became non-finite at t = {t:.6}")]
    NonFiniteState { t: f64 },

    #[error("requested time {t:.6e} is outside the sampled trajectory")]
    TimeOutOfRange { t: f64 },

    #[error("sequence length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("no concentration above threshold {threshold:.3e} (δ = {delta:.3e})")]
    NoConcentration { delta: f64, threshold: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed field snapshot: {0}")]
    MalformedSnapshot(String),
}
