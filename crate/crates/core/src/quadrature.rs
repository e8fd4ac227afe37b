//! Adaptive Gauss-Legendre quadrature.
//!
//! The integrators here serve the spectral functionals of the crate:
//! covariances `∫ f(x) cos(nx) dx`, log-density integrals with integrable
//! endpoint singularities, and reciprocal-density integrals truncated at a
//! level set. The workhorse is bisection-adaptive 15-point Gauss-Legendre
//! with explicit split points at declared singular locations; refinement
//! toward a singularity is therefore dyadic.
//!
//! Panels are accepted when the two-half refinement changes the panel value
//! by at most `panel_tol`; panels still unsettled at `max_depth` contribute
//! their last refinement delta to the reported error bound instead of
//! recursing further. Callers decide how much unresolved error their
//! tolerance budget admits via [`QuadOutcome::ok_within`].
//!
//! Nodes are interior, so integrands are never evaluated at panel
//! endpoints; endpoint singularities (log, negative powers below 1) are
//! integrated without guards.

use crate::scalar::Scalar;

/// Default per-panel acceptance tolerance.
pub const DEFAULT_PANEL_TOL: f64 = 1e-12;

/// Default maximum bisection depth (panel width shrinks by `2^-depth`).
pub const DEFAULT_MAX_DEPTH: u32 = 24;

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOutcome<S> {
    /// Best estimate of the integral.
    pub value: S,
    /// Accumulated bound on the unresolved refinement error.
    pub error: S,
    /// Number of integrand evaluations.
    pub evals: usize,
    /// True when every panel met `panel_tol` before `max_depth`.
    pub converged: bool,
}

impl<S: Scalar> QuadOutcome<S> {
    /// Whether the estimate is finite with error bound at most `tol`.
    pub fn ok_within(&self, tol: S) -> bool {
        self.value.is_finite() && self.error <= tol
    }
}

/// Nodes and weights of an `n`-point Gauss-Legendre rule on `[-1, 1]`.
///
/// Computed by Newton iteration on the Legendre recurrence; exact for
/// polynomials of degree `2n - 1`.
pub fn gauss_legendre_nodes<S: Scalar>(n: usize) -> (Vec<S>, Vec<S>) {
    assert!(n >= 1);
    let mut nodes = vec![S::zero(); n];
    let mut weights = vec![S::zero(); n];
    let nf = S::from_usize_lossy(n);
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let theta = S::PI() * (S::from_usize_lossy(i) + S::from_f64_lossy(0.75))
            / (nf + S::from_f64_lossy(0.5));
        let mut x = theta.cos();
        let mut dp = S::zero();
        for _ in 0..100 {
            // Evaluate P_n(x) and P_n'(x) by upward recurrence.
            let mut p0 = S::one();
            let mut p1 = x;
            for k in 2..=n {
                let kf = S::from_usize_lossy(k);
                let p2 = ((S::from_f64_lossy(2.0) * kf - S::one()) * x * p1
                    - (kf - S::one()) * p0)
                    / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pn_prev = if n == 1 { S::one() } else { p0 };
            dp = nf * (x * pn - pn_prev) / (x * x - S::one());
            let step = pn / dp;
            x = x - step;
            if step.abs() <= S::epsilon() * S::from_f64_lossy(4.0) {
                break;
            }
        }
        let w = S::from_f64_lossy(2.0) / ((S::one() - x * x) * dp * dp);
        nodes[i] = -x.abs();
        nodes[n - 1 - i] = x.abs();
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = S::zero();
    }
    (nodes, weights)
}

struct GlRule<S> {
    nodes: Vec<S>,
    weights: Vec<S>,
}

impl<S: Scalar> GlRule<S> {
    fn new() -> Self {
        let (nodes, weights) = gauss_legendre_nodes(15);
        Self { nodes, weights }
    }

    fn integrate(&self, f: &mut impl FnMut(S) -> S, a: S, b: S) -> S {
        let half = S::from_f64_lossy(0.5);
        let mid = (a + b) * half;
        let rad = (b - a) * half;
        let mut acc = S::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + rad * x);
        }
        acc * rad
    }
}

/// Integrate `f` over `[a, b]`, pre-splitting at `split_at`.
///
/// `split_at` lists locations where the integrand is singular or
/// non-smooth; points outside `(a, b)` are ignored. Refinement toward each
/// split point proceeds by dyadic bisection up to `max_depth`.
pub fn adaptive<S: Scalar>(
    mut f: impl FnMut(S) -> S,
    a: S,
    b: S,
    split_at: &[S],
    panel_tol: S,
    max_depth: u32,
) -> QuadOutcome<S> {
    assert!(a < b, "integration interval must be nonempty");
    let rule = GlRule::new();
    let mut cuts: Vec<S> = split_at.iter().copied().filter(|&s| s > a && s < b).collect();
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();

    let mut out = QuadOutcome { value: S::zero(), error: S::zero(), evals: 0, converged: true };
    for pair in cuts.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let whole = rule.integrate(&mut f, lo, hi);
        out.evals += 15;
        // Depth-first refinement over an explicit stack.
        let mut stack = vec![(lo, hi, whole, 0u32)];
        while let Some((pa, pb, pwhole, depth)) = stack.pop() {
            let mid = (pa + pb) * S::from_f64_lossy(0.5);
            let left = rule.integrate(&mut f, pa, mid);
            let right = rule.integrate(&mut f, mid, pb);
            out.evals += 30;
            let refined = left + right;
            let delta = (refined - pwhole).abs();
            if delta <= panel_tol || !delta.is_finite() {
                out.value += refined;
                if !refined.is_finite() || !delta.is_finite() {
                    out.converged = false;
                    out.error = S::infinity();
                }
            } else if depth >= max_depth {
                out.value += refined;
                out.error += delta;
                out.converged = false;
            } else {
                stack.push((pa, mid, left, depth + 1));
                stack.push((mid, pb, right, depth + 1));
            }
        }
    }
    out
}

/// Integrate with default tolerance and depth.
pub fn adaptive_default<S: Scalar>(f: impl FnMut(S) -> S, a: S, b: S, split_at: &[S]) -> QuadOutcome<S> {
    adaptive(f, a, b, split_at, S::from_f64_lossy(DEFAULT_PANEL_TOL), DEFAULT_MAX_DEPTH)
}

/// Midpoint rule for `2π`-periodic integrands sampled on the offset grid
/// `x_j = -π + 2π (j + 1/2) / M`: returns `∫_{-π}^{π} g ≈ (2π/M) Σ g(x_j)`.
///
/// Exact for trigonometric polynomials of degree `< M`; for that reason it
/// is the preferred rule for band-limited densities of high degree, where
/// bisection would have to chase every oscillation.
pub fn periodic_midpoint<S: Scalar>(samples: &[S]) -> S {
    let m = S::from_usize_lossy(samples.len());
    let sum: S = samples.iter().copied().sum();
    S::from_f64_lossy(2.0) * S::PI() * sum / m
}
