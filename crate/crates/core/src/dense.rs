//! Small dense symmetric kernels for clique blocks and m×m systems.
//!
//! Matrices are row-major `n*n` slices. Factors are lower triangular; the strict upper
//! triangle of a factored buffer is zeroed.

use crate::error::{Error, Result};
use crate::sparse::PIVOT_TOL;

/// In-place Cholesky `A = L Lᵀ`, overwriting `a` with `L`.
pub fn cholesky_in_place(a: &mut [f64], n: usize) -> Result<()> {
    debug_assert_eq!(a.len(), n * n);
    let max_diag = (0..n).map(|i| a[i * n + i]).fold(0.0, f64::max);
    let tol = PIVOT_TOL * max_diag;
    for j in 0..n {
        let d = a[j * n + j] - dot(&a[j * n..j * n + j], &a[j * n..j * n + j]);
        if !(d > tol) || !d.is_finite() {
            return Err(Error::NotPositiveDefinite(j + 1));
        }
        let ljj = d.sqrt();
        a[j * n + j] = ljj;
        for i in j + 1..n {
            let s = dot(&a[i * n..i * n + j], &a[j * n..j * n + j]);
            a[i * n + j] = (a[i * n + j] - s) / ljj;
        }
        for k in j + 1..n {
            a[j * n + k] = 0.0;
        }
    }
    Ok(())
}

#[inline]
pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// `ln det(L Lᵀ)` from a factor.
pub fn logdet_from_factor(l: &[f64], n: usize) -> f64 {
    2.0 * (0..n).map(|i| l[i * n + i].ln()).sum::<f64>()
}

/// Solves `L x = b` in place.
pub fn forward_solve(l: &[f64], n: usize, b: &mut [f64]) {
    for i in 0..n {
        let s = dot(&l[i * n..i * n + i], &b[..i]);
        b[i] = (b[i] - s) / l[i * n + i];
    }
}

/// Solves `Lᵀ x = b` in place.
pub fn backward_solve(l: &[f64], n: usize, b: &mut [f64]) {
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= l[k * n + i] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
}

/// Solves `L Lᵀ x = b` in place.
pub fn cholesky_solve(l: &[f64], n: usize, b: &mut [f64]) {
    forward_solve(l, n, b);
    backward_solve(l, n, b);
}

/// `(L Lᵀ)⁻¹` as a full symmetric row-major matrix.
pub fn inverse_from_factor(l: &[f64], n: usize) -> Vec<f64> {
    // W = L⁻¹ (lower), then A⁻¹ = Wᵀ W.
    let mut w = vec![0.0; n * n];
    for j in 0..n {
        w[j * n + j] = 1.0 / l[j * n + j];
        for i in j + 1..n {
            let mut s = 0.0;
            for k in j..i {
                s += l[i * n + k] * w[k * n + j];
            }
            w[i * n + j] = -s / l[i * n + i];
        }
    }
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (i..n).map(|k| w[k * n + i] * w[k * n + j]).sum();
            inv[i * n + j] = s;
            inv[j * n + i] = s;
        }
    }
    inv
}

/// Factors a copy of `a` and returns its inverse and log-determinant.
pub fn spd_inverse(a: &[f64], n: usize) -> Result<(Vec<f64>, f64)> {
    let mut l = a.to_vec();
    cholesky_in_place(&mut l, n)?;
    Ok((inverse_from_factor(&l, n), logdet_from_factor(&l, n)))
}

/// Extracts the principal submatrix on `idx` from a lookup `get(i, j)`.
pub fn gather(idx: &[usize], get: impl Fn(usize, usize) -> f64) -> Vec<f64> {
    let k = idx.len();
    let mut out = vec![0.0; k * k];
    for a in 0..k {
        for b in 0..=a {
            let v = get(idx[a], idx[b]);
            out[a * k + b] = v;
            out[b * k + a] = v;
        }
    }
    out
}
