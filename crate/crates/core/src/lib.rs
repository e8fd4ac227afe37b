//! skewgauss — stationary Gaussian driving noises for skew-product systems.
//!
//! Purpose
//! -------
//! Provide the numerical machinery for studying random dynamical systems of
//! the form `x_{n+1} = F(x_n, w_{n+1})` where the driving noise `w` is a
//! stationary Gaussian sequence that is in general *not* white. The crate
//! covers:
//!
//! - spectral description of the noise and its classification
//!   ([`spectral`]): one-sided prediction variance, reciprocal-density
//!   integrability, and the Sobolev regularity of `log f`;
//! - finite-order prediction and two-sided interpolation via Toeplitz
//!   systems ([`prediction`]);
//! - exact conditioning and disintegration of finite-dimensional Gaussian
//!   vectors ([`conditioning`]);
//! - exact stationary sampling, the one-step conditional kernel, and
//!   explicit subcouplings of shifted conditional laws ([`kernel`]);
//! - skew-product simulation, including a binary counterexample with two
//!   disjoint invariant sets, and empirical invariant-measure construction
//!   ([`skew`]);
//! - numerical diagnostics: derivative-matrix rank probes, total-variation
//!   continuity probes, reachability probes, and a closed-form transition
//!   family whose total-variation distance has a jump at the origin
//!   ([`diagnostics`]).
//!
//! Conventions
//! -----------
//! - Spectral densities live on `[-π, π]` and covariances are
//!   `C_n = (1/2π) ∫ e^{inx} f(x) dx` plus any atomic contribution.
//! - Noise windows order the past as `index 1 = most recent` unless a path
//!   type documents otherwise; stored paths keep the most recent value last.
//! - All randomness flows through explicitly seeded counter-based
//!   generators; see [`rng`]. Nothing reads ambient entropy.
//!
//! Numerics are generic over the floating-point scalar via [`scalar::Scalar`]
//! (implemented for `f32` and `f64`). The `f64` instantiations are the
//! recommended defaults and are what the acceptance suite runs; aliases for
//! the common types are exported at the crate root.

pub mod conditioning;
pub mod error;
pub mod fft;
pub mod kernel;
pub mod linalg;
pub mod prediction;
pub mod quadrature;
pub mod rng;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// `f64` spectral model (recommended default precision).
pub type SpectralModel64 = spectral::SpectralModel<f64>;
/// `f32` spectral model.
pub type SpectralModel32 = spectral::SpectralModel<f32>;
/// `f64` noise classification report.
pub type NoiseClassification64 = spectral::NoiseClassification<f64>;
/// `f64` covariance sequence.
pub type CovarianceSequence64 = spectral::CovarianceSequence<f64>;
/// `f64` dense symmetric matrix.
pub type Matrix64 = linalg::Matrix<f64>;
/// `f64` one-sided prediction solution.
pub type PredictionSolution64 = prediction::PredictionSolution<f64>;
/// `f64` two-sided interpolation solution.
pub type InterpolationSolution64 = prediction::InterpolationSolution<f64>;
/// `f64` Gaussian splitting (covariance + index partition).
pub type GaussianSplitting64 = conditioning::GaussianSplitting<f64>;
/// `f64` conditional law.
pub type ConditionalLaw64 = conditioning::ConditionalLaw<f64>;
/// `f64` one-step Gaussian kernel.
pub type GaussianStepKernel64 = kernel::GaussianStepKernel<f64>;
/// `f64` noise path window.
pub type NoisePath64 = kernel::NoisePath<f64>;
/// `f64` subcoupling description.
pub type SubcouplingSpec64 = kernel::SubcouplingSpec<f64>;
