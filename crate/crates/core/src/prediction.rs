//! Finite-order linear prediction and two-sided interpolation.
//!
//! Purpose
//! -------
//! Given covariances `C_0..C_L` of a stationary sequence, compute
//!
//! - the best linear one-step predictor of the next value from the last
//!   `L` values, via the Levinson-Durbin recursion ([`levinson`]);
//! - the best symmetric estimate of a missing middle value from `N`
//!   neighbors on each side ([`interpolate_two_sided`]).
//!
//! The one-step error variance decreases to the geometric mean of the
//! spectral density as `L` grows; the two-sided error variance decreases
//! to the inverse of the mean of `1/f`. When the density has a zero, the
//! latter limit is `0`: a pointwise consequence is demonstrated by
//! [`Ma1TwoSidedPath`], which reconstructs the middle value of a
//! once-differenced white noise from its neighbors with mean squared error
//! exactly `2/N`.
//!
//! Conventions
//! -----------
//! Prediction windows are ordered most recent first: `window[0]` is the
//! latest observation and `coefficients[j]` multiplies the value `j + 1`
//! steps in the past.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{solve_spd, Matrix};
use crate::rng::stream_rng;
use crate::scalar::Scalar;
use crate::spectral::CovarianceSequence;
use rayon::prelude::*;

/// Margin below 1 at which a reflection coefficient is declared singular.
const REFLECTION_MARGIN: f64 = 1e-12;

/// Best linear one-step predictor of fixed order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionSolution<S> {
    /// `coefficients[j]` weights the observation `j + 1` steps back.
    pub coefficients: Vec<S>,
    /// Mean squared prediction error at this order.
    pub error_variance: S,
    /// Reflection coefficients `κ_1..κ_L` produced by the recursion.
    pub reflection: Vec<S>,
}

impl<S: Scalar> PredictionSolution<S> {
    /// Predicted next value from a window ordered most recent first.
    pub fn predict(&self, window: &[S]) -> Result<S> {
        if window.len() < self.coefficients.len() {
            return Err(Error::WindowTooShort { window: window.len(), order: self.coefficients.len() });
        }
        Ok(self.coefficients.iter().zip(window).map(|(&a, &w)| a * w).sum())
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }
}

/// Levinson-Durbin recursion on a covariance sequence.
///
/// Runs in `O(order²)` and solves the Toeplitz normal equations exactly
/// (it is algebraically the Cholesky factorization of the Toeplitz moment
/// matrix). Fails with [`Error::SingularToeplitz`] when a prediction error
/// hits zero, i.e. when a reflection coefficient reaches `±1`.
pub fn levinson<S: Scalar>(cov: &CovarianceSequence<S>, order: usize) -> Result<PredictionSolution<S>> {
    if cov.max_lag() < order {
        return Err(Error::LengthMismatch { expected: order, got: cov.max_lag() });
    }
    if !(cov.c0() > S::zero()) {
        return Err(Error::SingularToeplitz { order: 0, value: cov.c0().to_f64_lossy() });
    }
    let mut coeff: Vec<S> = Vec::with_capacity(order);
    let mut reflection: Vec<S> = Vec::with_capacity(order);
    let mut err = cov.c0();
    let kappa_cap = S::one() - S::from_f64_lossy(REFLECTION_MARGIN);
    for m in 1..=order {
        let acc: S = coeff.iter().enumerate().map(|(j, &a)| a * cov.lag(m - 1 - j)).sum();
        let kappa = (cov.lag(m) - acc) / err;
        if !kappa.is_finite() || kappa.abs() >= kappa_cap {
            return Err(Error::SingularToeplitz { order: m, value: kappa.to_f64_lossy() });
        }
        // a_j <- a_j - κ a_{m-j} simultaneously for j = 1..m-1.
        let prev = coeff.clone();
        for j in 0..coeff.len() {
            coeff[j] = prev[j] - kappa * prev[prev.len() - 1 - j];
        }
        coeff.push(kappa);
        reflection.push(kappa);
        err = err * (S::one() - kappa * kappa);
        if !(err > S::zero()) {
            return Err(Error::SingularToeplitz { order: m, value: kappa.to_f64_lossy() });
        }
    }
    Ok(PredictionSolution { coefficients: coeff, error_variance: err, reflection })
}

/// Best symmetric linear interpolation of a missing middle value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpolationSolution<S> {
    /// `coefficients[n-1]` weights `X_n + X_{-n}` for `n = 1..=N`.
    pub coefficients: Vec<S>,
    /// Mean squared interpolation error at this width.
    pub error_variance: S,
}

impl<S: Scalar> InterpolationSolution<S> {
    /// Estimate of the middle value; `right[n-1]` is `X_n`, `left[n-1]` is
    /// `X_{-n}`.
    pub fn estimate(&self, right: &[S], left: &[S]) -> Result<S> {
        let n = self.coefficients.len();
        if right.len() < n || left.len() < n {
            return Err(Error::WindowTooShort { window: right.len().min(left.len()), order: n });
        }
        Ok(self
            .coefficients
            .iter()
            .enumerate()
            .map(|(i, &b)| b * (right[i] + left[i]))
            .sum())
    }
}

/// Solve for the best estimate of `X_0` from `X_{±1}..X_{±N}`.
///
/// For an even spectrum the optimal weights are symmetric, so the `2N`
/// unknowns collapse to `N`: the Gram matrix of `X_n + X_{-n}` is
/// `2 (C_{|m-n|} + C_{m+n})`. Requires covariances up to lag `2N`.
pub fn interpolate_two_sided<S: Scalar>(
    cov: &CovarianceSequence<S>,
    n: usize,
) -> Result<InterpolationSolution<S>> {
    if n == 0 {
        return Err(Error::InvalidInput("interpolation needs at least one neighbor per side".into()));
    }
    if cov.max_lag() < 2 * n {
        return Err(Error::LengthMismatch { expected: 2 * n, got: cov.max_lag() });
    }
    let gram = Matrix::from_fn(n, n, |i, j| {
        let (m, k) = (i + 1, j + 1);
        cov.lag(m.abs_diff(k)) + cov.lag(m + k)
    });
    let rhs: Vec<S> = (1..=n).map(|m| cov.lag(m)).collect();
    let coefficients = solve_spd(&gram, &rhs)
        .map_err(|b| Error::SingularToeplitz { order: b.pivot + 1, value: b.value })?;
    let explained: S = coefficients
        .iter()
        .zip(&rhs)
        .map(|(&b, &c)| S::from_f64_lossy(2.0) * b * c)
        .sum();
    Ok(InterpolationSolution { coefficients, error_variance: cov.c0() - explained })
}

/// A two-sided sample of once-differenced white noise `W_n = ξ_n + ξ_{n+1}`.
///
/// Holds `W_{-N}..W_N` together with the underlying increments so the exact
/// reconstruction identity can be checked pathwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ma1TwoSidedPath<S> {
    /// `W_0`.
    pub center: S,
    /// `W_1..W_N`.
    pub right: Vec<S>,
    /// `W_{-1}..W_{-N}`.
    pub left: Vec<S>,
    /// Increments `ξ_{-N}..ξ_{N+1}`, stored left to right.
    pub increments: Vec<S>,
}

impl<S: Scalar> Ma1TwoSidedPath<S> {
    /// Draw `ξ_{-N}..ξ_{N+1}` i.i.d. standard normal and difference them.
    pub fn sample<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let increments: Vec<S> = (0..2 * n + 2).map(|_| S::standard_normal(rng)).collect();
        let xi = |i: isize| increments[(i + n as isize) as usize];
        let w = |i: isize| xi(i) + xi(i + 1);
        Self {
            center: w(0),
            right: (1..=n as isize).map(w).collect(),
            left: (1..=n as isize).map(|k| w(-k)).collect(),
            increments,
        }
    }

    fn n(&self) -> usize {
        self.right.len()
    }

    /// Reconstruction of `W_0` from the neighbors alone:
    /// `-(1/N) Σ_{n=1}^{N} (-1)^n (N+1-n) (W_n + W_{-n})`.
    ///
    /// Telescoping the differences leaves `W_0` plus an average of `2N`
    /// independent increments, so the mean squared error is exactly `2/N`.
    pub fn recovery_estimate(&self) -> S {
        let n = self.n();
        let mut acc = S::zero();
        for k in 1..=n {
            let weight = S::from_usize_lossy(n + 1 - k);
            let term = weight * (self.right[k - 1] + self.left[k - 1]);
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc / S::from_usize_lossy(n)
    }

    /// The residual `recovery_estimate() - W_0` written directly in terms
    /// of the increments: `-(1/N) Σ_{n=1}^{N} (-1)^n (ξ_{n+1} + ξ_{-n})`.
    pub fn residual_from_increments(&self) -> S {
        let n = self.n();
        let xi = |i: isize| self.increments[(i + n as isize) as usize];
        let mut acc = S::zero();
        for k in 1..=n {
            let term = xi(k as isize + 1) + xi(-(k as isize));
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc / S::from_usize_lossy(n)
    }
}

/// Monte Carlo mean squared error of the `W_0` reconstruction over
/// independent two-sided paths (expected value: exactly `2/N`).
pub fn w0_recovery_mse<S: Scalar>(n: usize, paths: usize, seed: u64) -> S {
    let total: f64 = (0..paths)
        .into_par_iter()
        .map(|p| {
            let mut rng = stream_rng(seed, p as u64);
            let path = Ma1TwoSidedPath::<S>::sample(n, &mut rng);
            let residual = (path.recovery_estimate() - path.center).to_f64_lossy();
            residual * residual
        })
        .sum();
    S::from_f64_lossy(total / paths as f64)
}
