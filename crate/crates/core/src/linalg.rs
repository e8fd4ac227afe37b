//! Dense matrices and symmetric linear algebra.
//!
//! Everything this crate factorizes is symmetric (covariances, Gram
//! matrices), low-dimensional (conditioning, diagnostics) or
//! Toeplitz-structured with order at most a few thousand (interpolation
//! windows). This module provides exactly that surface: a row-major dense
//! matrix, Cholesky factorization with pivot reporting, triangular and SPD
//! solves, a cyclic Jacobi eigensolver, and eigen-based pseudo-inverse /
//! square-root helpers for positive semidefinite inputs.
//!
//! Conventions
//! -----------
//! - Matrices serialize as `{ rows, cols, data }` with `data` row-major.
//! - `cholesky` returns the lower factor `L` with `A = L Lᵀ`.
//! - `jacobi_eigh` returns eigenvalues ascending, eigenvectors as columns.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    /// Identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    /// Matrix with entries `f(i, j)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Build from row-major data; panics if the length does not match.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data length mismatch");
        Self { rows, cols, data }
    }

    /// Symmetric Toeplitz matrix `T[i][j] = lags[|i-j|]`; panics if `lags`
    /// is shorter than `n`.
    pub fn toeplitz(lags: &[S], n: usize) -> Self {
        assert!(lags.len() >= n, "need {n} lags, got {}", lags.len());
        Self::from_fn(n, n, |i, j| lags[i.abs_diff(j)])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == S::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Entrywise difference `self - other`.
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// Entrywise sum `self + other`.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// Entrywise scaling.
    pub fn scale(&self, c: S) -> Self {
        let data = self.data.iter().map(|&a| a * c).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> S {
        self.data.iter().fold(S::zero(), |m, &a| m.max(a.abs()))
    }

    /// Maximum absolute asymmetry `max |A[i][j] - A[j][i]|`.
    pub fn asymmetry(&self) -> S {
        assert_eq!(self.rows, self.cols);
        let mut worst = S::zero();
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    /// Symmetrized copy `(A + Aᵀ)/2`, removing round-off drift.
    pub fn symmetrized(&self) -> Self {
        assert_eq!(self.rows, self.cols);
        let half = S::from_f64_lossy(0.5);
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)]) * half)
    }

    /// Submatrix with the given row and column index lists (may repeat or
    /// reorder indices).
    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Self {
        Self::from_fn(row_idx.len(), col_idx.len(), |i, j| self[(row_idx[i], col_idx[j])])
    }

    /// Quadratic form `vᵀ A v`.
    pub fn quadratic_form(&self, v: &[S]) -> S {
        dot(&self.mul_vec(v), v)
    }
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

/// Dot product; panics on length mismatch.
pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// Failed Cholesky pivot: index and the offending diagonal value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CholeskyBreakdown {
    pub pivot: usize,
    pub value: f64,
}

/// Lower Cholesky factor of a symmetric positive definite matrix.
///
/// Fails with the first non-positive pivot. Only the lower triangle of the
/// input is read.
pub fn cholesky<S: Scalar>(a: &Matrix<S>) -> Result<Matrix<S>, CholeskyBreakdown> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "cholesky needs a square matrix");
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d <= S::zero() || !d.is_finite() {
            return Err(CholeskyBreakdown { pivot: j, value: d.to_f64_lossy() });
        }
        let dj = d.sqrt();
        l[(j, j)] = dj;
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / dj;
        }
    }
    Ok(l)
}

/// Solve `L x = b` with `L` lower triangular.
pub fn solve_lower<S: Scalar>(l: &Matrix<S>, b: &[S]) -> Vec<S> {
    let n = l.rows();
    assert_eq!(b.len(), n);
    let mut x = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            let lik = l[(i, k)];
            x[i] = x[i] - lik * x[k];
        }
        x[i] = x[i] / l[(i, i)];
    }
    x
}

/// Solve `Lᵀ x = b` with `L` lower triangular.
pub fn solve_lower_transpose<S: Scalar>(l: &Matrix<S>, b: &[S]) -> Vec<S> {
    let n = l.rows();
    assert_eq!(b.len(), n);
    let mut x = b.to_vec();
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            let lki = l[(k, i)];
            x[i] = x[i] - lki * x[k];
        }
        x[i] = x[i] / l[(i, i)];
    }
    x
}

/// Solve `A x = b` given the lower Cholesky factor of `A`.
pub fn cholesky_solve<S: Scalar>(l: &Matrix<S>, b: &[S]) -> Vec<S> {
    solve_lower_transpose(l, &solve_lower(l, b))
}

/// Solve the SPD system `A x = b` by Cholesky.
pub fn solve_spd<S: Scalar>(a: &Matrix<S>, b: &[S]) -> Result<Vec<S>, CholeskyBreakdown> {
    Ok(cholesky_solve(&cholesky(a)?, b))
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi sweeps.
///
/// Returns eigenvalues in ascending order and the matching eigenvectors as
/// columns of an orthogonal matrix. Intended for modest dimensions (the
/// crate uses it up to a few hundred).
pub fn jacobi_eigh<S: Scalar>(a: &Matrix<S>) -> (Vec<S>, Matrix<S>) {
    let n = a.rows();
    assert_eq!(n, a.cols(), "jacobi_eigh needs a square matrix");
    let mut m = a.symmetrized();
    let mut v = Matrix::identity(n);
    if n <= 1 {
        return (m.data.clone(), v);
    }
    let scale = m.max_abs().max(S::one());
    let stop = S::epsilon() * scale * S::from_usize_lossy(n);
    for _sweep in 0..100 {
        let mut off = S::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                off = off.max(m[(i, j)].abs());
            }
        }
        if off <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.abs() <= stop * S::from_f64_lossy(1e-3) {
                    continue;
                }
                let tau = (m[(q, q)] - m[(p, p)]) / (S::from_f64_lossy(2.0) * apq);
                let t = {
                    let root = (S::one() + tau * tau).sqrt();
                    if tau >= S::zero() {
                        S::one() / (tau + root)
                    } else {
                        S::one() / (tau - root)
                    }
                };
                let c = S::one() / (S::one() + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].partial_cmp(&m[(j, j)]).unwrap());
    let evals = order.iter().map(|&i| m[(i, i)]).collect();
    let evecs = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    (evals, evecs)
}

/// Moore-Penrose pseudo-inverse of a symmetric matrix.
///
/// Eigenvalues with `|λ| <= rel_tol * max|λ|` are treated as zero. Returns
/// the pseudo-inverse and the numerical rank.
pub fn pinv_sym<S: Scalar>(a: &Matrix<S>, rel_tol: S) -> (Matrix<S>, usize) {
    let n = a.rows();
    let (evals, v) = jacobi_eigh(a);
    let lam_max = evals.iter().fold(S::zero(), |m, &l| m.max(l.abs()));
    if lam_max == S::zero() {
        return (Matrix::zeros(n, n), 0);
    }
    let cut = rel_tol * lam_max;
    let mut rank = 0;
    let inv: Vec<S> = evals
        .iter()
        .map(|&l| {
            if l.abs() > cut {
                rank += 1;
                S::one() / l
            } else {
                S::zero()
            }
        })
        .collect();
    let mut out = Matrix::zeros(n, n);
    for k in 0..n {
        if inv[k] == S::zero() {
            continue;
        }
        for i in 0..n {
            let w = v[(i, k)] * inv[k];
            for j in 0..n {
                out[(i, j)] += w * v[(j, k)];
            }
        }
    }
    (out.symmetrized(), rank)
}

/// Symmetric square root of a positive semidefinite matrix.
///
/// Eigenvalues in `[-neg_tol * max|λ|, 0)` are clipped to zero; a smaller
/// eigenvalue reports the violation as `Err(λ_min)`.
pub fn sym_sqrt_psd<S: Scalar>(a: &Matrix<S>, neg_tol: S) -> Result<Matrix<S>, f64> {
    let n = a.rows();
    let (evals, v) = jacobi_eigh(a);
    let lam_max = evals.iter().fold(S::zero(), |m, &l| m.max(l.abs()));
    let lam_min = evals.iter().fold(S::infinity(), |m, &l| m.min(l));
    if lam_min < -neg_tol * lam_max.max(S::one()) {
        return Err(lam_min.to_f64_lossy());
    }
    let mut out = Matrix::zeros(n, n);
    for k in 0..n {
        let l = evals[k].max(S::zero()).sqrt();
        if l == S::zero() {
            continue;
        }
        for i in 0..n {
            let w = v[(i, k)] * l;
            for j in 0..n {
                out[(i, j)] += w * v[(j, k)];
            }
        }
    }
    Ok(out.symmetrized())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat3(rows: [[f64; 3]; 3]) -> Matrix<f64> {
        Matrix::from_fn(3, 3, |i, j| rows[i][j])
    }

    #[test]
    fn cholesky_reconstructs_spd_matrix() {
        let a = mat3([[4.0, 2.0, 0.4], [2.0, 5.0, 1.0], [0.4, 1.0, 3.0]]);
        let l = cholesky(&a).unwrap();
        let diff = l.mul(&l.transpose()).sub(&a).max_abs();
        assert!(diff < 1e-14);
    }

    #[test]
    fn cholesky_reports_failing_pivot() {
        // Second pivot is 1 - 4 = -3.
        let a = Matrix::from_vec(2, 2, vec![1.0, 2.0, 2.0, 1.0]);
        let err = cholesky(&a).unwrap_err();
        assert_eq!(err.pivot, 1);
        assert!((err.value + 3.0).abs() < 1e-14);
    }

    #[test]
    fn spd_solve_matches_hand_solution() {
        let a = Matrix::<f64>::from_vec(2, 2, vec![2.0, 1.0, 1.0, 2.0]);
        let x = solve_spd(&a, &[3.0, 3.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_recovers_known_spectrum() {
        // Eigenvalues of [[2,1],[1,2]] are 1 and 3.
        let a = Matrix::<f64>::from_vec(2, 2, vec![2.0, 1.0, 1.0, 2.0]);
        let (evals, v) = jacobi_eigh(&a);
        assert!((evals[0] - 1.0).abs() < 1e-12);
        assert!((evals[1] - 3.0).abs() < 1e-12);
        // V diag(λ) Vᵀ reconstructs A.
        let lam = Matrix::from_fn(2, 2, |i, j| if i == j { evals[i] } else { 0.0 });
        let diff = v.mul(&lam).mul(&v.transpose()).sub(&a).max_abs();
        assert!(diff < 1e-12);
    }

    #[test]
    fn jacobi_handles_larger_random_symmetric() {
        use rand::Rng;
        let mut rng = crate::rng::stream_rng(5, 0);
        let n = 24;
        let g = Matrix::from_fn(n, n, |_, _| rng.random::<f64>() - 0.5);
        let a = g.mul(&g.transpose());
        let (evals, v) = jacobi_eigh(&a);
        for k in 1..n {
            assert!(evals[k] >= evals[k - 1] - 1e-12);
        }
        let lam = Matrix::from_fn(n, n, |i, j| if i == j { evals[i] } else { 0.0 });
        let diff = v.mul(&lam).mul(&v.transpose()).sub(&a).max_abs();
        assert!(diff < 1e-10 * a.max_abs().max(1.0));
    }

    #[test]
    fn pinv_of_rank_deficient_projector() {
        // [[1,1],[1,1]] has eigenvalues {0, 2}; pseudo-inverse is A/4.
        let a = Matrix::from_vec(2, 2, vec![1.0, 1.0, 1.0, 1.0]);
        let (p, rank) = pinv_sym(&a, 1e-10);
        assert_eq!(rank, 1);
        let diff = p.sub(&a.scale(0.25)).max_abs();
        assert!(diff < 1e-13);
    }

    #[test]
    fn sqrt_roundtrip_and_negative_rejection() {
        let a = mat3([[4.0, 2.0, 0.4], [2.0, 5.0, 1.0], [0.4, 1.0, 3.0]]);
        let r = sym_sqrt_psd(&a, 1e-10).unwrap();
        assert!(r.mul(&r).sub(&a).max_abs() < 1e-12);
        let neg = Matrix::from_vec(2, 2, vec![1.0, 0.0, 0.0, -1.0]);
        assert!(sym_sqrt_psd(&neg, 1e-10).is_err());
    }

    #[test]
    fn toeplitz_layout_and_quadratic_form() {
        let t = Matrix::<f64>::toeplitz(&[2.0, 1.0, 0.0], 3);
        assert_eq!(t[(0, 1)], 1.0);
        assert_eq!(t[(0, 2)], 0.0);
        assert_eq!(t[(2, 1)], 1.0);
        // vᵀTv at v = (1,1,1): sum of all entries = 3*2 + 4*1 = 10.
        assert!((t.quadratic_form(&[1.0, 1.0, 1.0]) - 10.0).abs() < 1e-14);
    }

    #[test]
    fn submatrix_respects_index_order() {
        let a = mat3([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 9.0]]);
        let s = a.submatrix(&[2, 0], &[1]);
        assert_eq!(s[(0, 0)], 8.0);
        assert_eq!(s[(1, 0)], 2.0);
    }
}
