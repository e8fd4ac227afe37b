//! Crate-wide error type.
//!
//! Numerical failure modes are explicit variants so callers (and the CLI
//! exit-code mapping) can name the failing rule instead of parsing strings.

use thiserror::Error;

/// Errors surfaced by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A density integral failed to converge at the requested tolerance.
    #[error("density integral failed to converge: {0}")]
    NonIntegrableDensity(String),

    /// Adaptive quadrature refinement stalled before reaching tolerance.
    #[error("quadrature refinement stalled: {0}")]
    QuadratureFailure(String),

    /// A diagnostic ran out of refinement levels without a verdict.
    #[error("diagnostic inconclusive: {0}")]
    Inconclusive(String),

    /// Levinson recursion or a Toeplitz solve hit a numerically singular
    /// system (reflection coefficient at the unit circle, or a failed
    /// Cholesky pivot).
    #[error("Toeplitz system numerically singular at order {order} (pivot/reflection {value})")]
    SingularToeplitz { order: usize, value: f64 },

    /// A window or coefficient slice had the wrong length.
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// A path was shorter than the requested estimator radius.
    #[error("path too short: need {needed} values, have {have}")]
    InsufficientPath { needed: usize, have: usize },

    /// A noise window was shorter than the kernel order.
    #[error("noise window of length {window} shorter than kernel order {order}")]
    WindowTooShort { window: usize, order: usize },

    /// An interval had `lo >= hi`.
    #[error("interval is empty: lo {lo} >= hi {hi}")]
    EmptyInterval { lo: f64, hi: f64 },

    /// Circulant embedding produced eigenvalues below tolerance and no exact
    /// fallback was affordable.
    #[error("circulant embedding failed: {0}")]
    EmbeddingFailure(String),

    /// Exact block-law enumeration was asked for more symbols than the
    /// enumeration budget allows.
    #[error("block length {got} exceeds exact enumeration budget {max}")]
    BlockTooLong { got: usize, max: usize },

    /// Histogram-based total-variation estimation over states of dimension
    /// above the supported limit.
    #[error("state dimension {got} too high for histogram TV estimation (max {max})")]
    DimensionTooHigh { got: usize, max: usize },

    /// A spectral density came out non-positive where positivity is required.
    #[error("density not positive: {0}")]
    NonPositiveDensity(String),

    /// A one-step kernel had (numerically) zero innovation variance.
    #[error("degenerate kernel: innovation variance {0} is not positive")]
    DegenerateKernel(f64),

    /// Model parameters outside their documented domain.
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// Arguments outside an operation's documented domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
