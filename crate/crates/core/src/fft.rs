//! FFT helpers for periodic grids.
//!
//! All transforms run in `f64` internally (via `rustfft`); generic callers
//! convert at the boundary. Grids are the *offset* uniform grids
//! `x_j = -π + 2π (j + 1/2) / M`, which dodge the lattice points `0` and
//! `±π` where builtin densities may vanish or peak.
//!
//! Forward DFT convention: `F_k = Σ_j v_j e^{-2πi jk / M}` (rustfft
//! `Forward`), unnormalized.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// The offset-grid point `x_j` for a grid of size `m`.
pub fn offset_grid_point(j: usize, m: usize) -> f64 {
    -std::f64::consts::PI + 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / m as f64
}

/// In-place forward DFT.
pub fn dft_forward(values: &mut [Complex<f64>]) {
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(values.len()).process(values);
}

/// In-place inverse-direction DFT (`Σ_j v_j e^{+2πi jk / M}`), unnormalized.
pub fn dft_inverse_unscaled(values: &mut [Complex<f64>]) {
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(values.len()).process(values);
}

/// Magnitudes of the Fourier coefficients `|ĝ_n|`, `n = 0..=M/2`, of a real
/// periodic function sampled on the offset grid.
///
/// `ĝ_n = (1/2π) ∫ g(x) e^{-inx} dx ≈ (1/M) Σ_j g(x_j) e^{-in x_j}`; the
/// offset grid contributes only a phase, so magnitudes come straight from
/// the DFT.
pub fn fourier_magnitudes(samples: &[f64]) -> Vec<f64> {
    let m = samples.len();
    let mut buf: Vec<Complex<f64>> = samples.iter().map(|&v| Complex::new(v, 0.0)).collect();
    dft_forward(&mut buf);
    (0..=m / 2).map(|n| buf[n].norm() / m as f64).collect()
}

/// Values of the analytic trigonometric polynomial `S(x) = Σ_{k=1}^{K} a_k
/// e^{ikx}` on the offset grid of size `m` (requires `m > K`).
pub fn one_sided_poly_on_grid(coeffs: &[f64], m: usize) -> Vec<Complex<f64>> {
    assert!(m > coeffs.len(), "grid must exceed polynomial degree");
    let mut buf = vec![Complex::new(0.0, 0.0); m];
    for (idx, &a) in coeffs.iter().enumerate() {
        let k = idx + 1;
        // e^{ik x_j} = e^{ik(-π + π/m)} e^{2πi kj/m}: fold the constant
        // phase into the coefficient, FFT supplies the rest.
        let phase = k as f64 * (std::f64::consts::PI / m as f64 - std::f64::consts::PI);
        buf[k] = Complex::from_polar(a, phase);
    }
    dft_inverse_unscaled(&mut buf);
    buf
}

/// Lagged autocorrelation `r_n = Σ_k a_k a_{k+n}`, `n = 0..=max_lag`, via
/// zero-padded FFT.
pub fn autocorrelation(coeffs: &[f64], max_lag: usize) -> Vec<f64> {
    let needed = coeffs.len() + max_lag + 1;
    let m = needed.next_power_of_two();
    let mut buf = vec![Complex::new(0.0, 0.0); m];
    for (i, &a) in coeffs.iter().enumerate() {
        buf[i] = Complex::new(a, 0.0);
    }
    dft_forward(&mut buf);
    for v in buf.iter_mut() {
        *v = Complex::new(v.norm_sqr(), 0.0);
    }
    dft_inverse_unscaled(&mut buf);
    (0..=max_lag).map(|n| buf[n].re / m as f64).collect()
}

/// Covariances `C_n = (1/2π) ∫ f(x) cos(nx) dx`, `n = 0..=max_lag`, from
/// density samples on the offset grid, by the periodic midpoint rule.
///
/// Exact when `f` is a trigonometric polynomial of degree `< M - max_lag`.
pub fn grid_covariances(samples: &[f64], max_lag: usize) -> Vec<f64> {
    let m = samples.len();
    let mut buf: Vec<Complex<f64>> = samples.iter().map(|&v| Complex::new(v, 0.0)).collect();
    dft_forward(&mut buf);
    (0..=max_lag)
        .map(|n| {
            // C_n = (1/M) Σ_j f(x_j) e^{in x_j}
            //     = (1/M) Re( e^{in(π/M - π)} conj(F_n) )  for real samples.
            let phase = n as f64 * (std::f64::consts::PI / m as f64 - std::f64::consts::PI);
            let rot = Complex::from_polar(1.0, phase);
            (rot * buf[n % m].conj()).re / m as f64
        })
        .collect()
}
