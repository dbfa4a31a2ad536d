use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sparse::{SparseSymMatrix, SparseSymPattern};

/// Relative pivot threshold: a pivot at or below `PIVOT_TOL * max(diag(M))` is rejected.
pub const PIVOT_TOL: f64 = 1e-12;

/// Numeric Cholesky factor `L` (lower, positive diagonal) stored on a filled pattern.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    pattern: Arc<SparseSymPattern>,
    pub(crate) diag: Vec<f64>,
    pub(crate) off: Vec<f64>,
    logdet: f64,
}

impl CholeskyFactor {
    pub fn n(&self) -> usize {
        self.pattern.n()
    }

    pub fn pattern(&self) -> &Arc<SparseSymPattern> {
        &self.pattern
    }

    /// `L_jj`.
    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// Sub-diagonal values of `L`, one per pattern slot.
    pub fn off(&self) -> &[f64] {
        &self.off
    }

    /// `ln det(L Lᵀ) = 2 Σ ln L_jj`.
    pub fn logdet(&self) -> f64 {
        self.logdet
    }

    /// Number of stored reals (diagonal plus off-diagonal).
    pub fn storage_len(&self) -> usize {
        self.diag.len() + self.off.len()
    }

    /// `L Lᵀ` as a dense row-major matrix (for checks).
    pub fn reconstruct_dense(&self) -> Vec<f64> {
        let n = self.n();
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            l[j * n + j] = self.diag[j];
            for s in self.pattern.col_range(j) {
                l[self.pattern.row_of_slot(s) * n + j] = self.off[s];
            }
        }
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = (0..=i.min(j)).map(|k| l[i * n + k] * l[j * n + k]).sum();
            }
        }
        a
    }
}

/// Left-looking column Cholesky on `m`'s own pattern, which must be closed under
/// elimination (a filled pattern in its perfect elimination order).
pub fn cholesky_factorize(m: &SparseSymMatrix) -> Result<CholeskyFactor> {
    let pattern = m.pattern_arc().clone();
    let n = pattern.n();
    let max_diag = m.diag.iter().copied().fold(0.0, f64::max);
    let tol = PIVOT_TOL * max_diag;

    let mut diag = vec![0.0; n];
    let mut off = m.off.clone();
    let mut pos = vec![usize::MAX; n];
    let mut logdet = 0.0;

    for j in 0..n {
        for s in pattern.col_range(j) {
            pos[pattern.row_of_slot(s)] = s;
        }
        let mut d = m.diag[j];
        for (k, s_jk) in pattern.row(j) {
            let ljk = off[s_jk];
            d -= ljk * ljk;
            for s_ik in s_jk + 1..pattern.col_range(k).end {
                let i = pattern.row_of_slot(s_ik);
                let t = pos[i];
                debug_assert!(t != usize::MAX && pattern.row_of_slot(t) == i, "pattern is not filled");
                off[t] -= off[s_ik] * ljk;
            }
        }
        if !(d > tol) || !d.is_finite() {
            return Err(Error::NotPositiveDefinite(j + 1));
        }
        let ljj = d.sqrt();
        diag[j] = ljj;
        logdet += 2.0 * ljj.ln();
        for s in pattern.col_range(j) {
            off[s] /= ljj;
        }
    }
    Ok(CholeskyFactor { pattern, diag, off, logdet })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let m = SparseSymMatrix::from_dense(2, &[4.0, 2.0, 2.0, 5.0]).unwrap();
        let f = cholesky_factorize(&m).unwrap();
        assert_eq!(f.diag(), &[2.0, 2.0]);
        assert_eq!(f.off(), &[1.0]);
        assert!((f.logdet() - 16f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn identity_factor() {
        let m = SparseSymMatrix::identity(Arc::new(SparseSymPattern::banded(7, 2)));
        let f = cholesky_factorize(&m).unwrap();
        assert!(f.diag().iter().all(|&d| d == 1.0));
        assert!(f.off().iter().all(|&v| v == 0.0));
        assert_eq!(f.logdet(), 0.0);
    }

    #[test]
    fn indefinite_reports_second_pivot() {
        let m = SparseSymMatrix::from_dense(2, &[1.0, 2.0, 2.0, 1.0]).unwrap();
        assert_eq!(cholesky_factorize(&m).unwrap_err(), Error::NotPositiveDefinite(2));
    }

    #[test]
    fn reproduces_filled_input() {
        // arrow pointing down-right: dense last row, no fill
        let n = 5;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = 4.0 + i as f64;
            a[i * n + n - 1] = 1.0;
            a[(n - 1) * n + i] = 1.0;
        }
        a[(n - 1) * n + n - 1] = 10.0;
        let m = SparseSymMatrix::from_dense(n, &a).unwrap();
        let f = cholesky_factorize(&m).unwrap();
        for (x, y) in f.reconstruct_dense().iter().zip(&a) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
