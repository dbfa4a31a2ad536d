//! Derivatives of `ln det S` from a sparse Cholesky factor.
//!
//! The gradient is the selected inverse `S⁻¹|_F`, computed by the Takahashi recurrence
//! over the factor's pattern. The Hessian-vector product `S⁻¹ Z S⁻¹|_F` is the
//! derivative of that recurrence (and of the factorization feeding it) along `Z`,
//! carried in arrays of the factor's own shape.

use crate::error::Result;
use crate::sparse::{CholeskyFactor, SparseSymMatrix, SparseSymPattern};

/// Entries of `S⁻¹` on the factor's pattern (diagonal included).
pub fn sparse_inverse(factor: &CholeskyFactor) -> SparseSymMatrix {
    let p = factor.pattern();
    let n = p.n();
    let mut ydiag = vec![0.0; n];
    let mut yoff = vec![0.0; p.nnz()];
    let mut scratch = Scratch::new(n);
    for j in (0..n).rev() {
        scratch.load(p, j);
        scratch.accumulate(p, j, factor.off(), &ydiag, &yoff);
        let ljj = factor.diag()[j];
        let mut q = 1.0 / ljj;
        for (a, s) in p.col_range(j).enumerate() {
            let y = -scratch.t[a] / ljj;
            yoff[s] = y;
            q -= factor.off()[s] * y;
        }
        ydiag[j] = q / ljj;
        scratch.unload(p, j);
    }
    SparseSymMatrix::from_parts(p.clone(), ydiag, yoff).expect("shapes match the pattern")
}

/// Entries of `S⁻¹ Z S⁻¹` on the factor's pattern. `Z` must live on a subset of it.
pub fn hess_vec(factor: &CholeskyFactor, z: &SparseSymMatrix) -> Result<SparseSymMatrix> {
    let inv = sparse_inverse(factor);
    hess_vec_with(factor, &inv, z)
}

/// As [`hess_vec`], reusing a selected inverse already computed from `factor`.
pub fn hess_vec_with(
    factor: &CholeskyFactor,
    inverse: &SparseSymMatrix,
    z: &SparseSymMatrix,
) -> Result<SparseSymMatrix> {
    let p = factor.pattern();
    let n = p.n();
    let lifted;
    let z = if std::sync::Arc::ptr_eq(z.pattern_arc(), p) {
        z
    } else {
        lifted = z.lift_to(p)?;
        &lifted
    };
    let (ld, lo) = (factor.diag(), factor.off());

    // Tangent of the factor: dS = Z.
    let mut dldiag = vec![0.0; n];
    let mut dloff = z.off.clone();
    let mut pos = vec![usize::MAX; n];
    for j in 0..n {
        for s in p.col_range(j) {
            pos[p.row_of_slot(s)] = s;
        }
        let mut dd = z.diag[j];
        for (k, s_jk) in p.row(j) {
            let (ljk, dljk) = (lo[s_jk], dloff[s_jk]);
            dd -= 2.0 * ljk * dljk;
            for s_ik in s_jk + 1..p.col_range(k).end {
                let t = pos[p.row_of_slot(s_ik)];
                dloff[t] -= dloff[s_ik] * ljk + lo[s_ik] * dljk;
            }
        }
        let ljj = ld[j];
        let dljj = dd / (2.0 * ljj);
        dldiag[j] = dljj;
        for s in p.col_range(j) {
            dloff[s] = (dloff[s] - lo[s] * dljj) / ljj;
        }
    }

    // Tangent of the Takahashi sweep.
    let mut dydiag = vec![0.0; n];
    let mut dyoff = vec![0.0; p.nnz()];
    let mut scratch = Scratch::new(n);
    for j in (0..n).rev() {
        scratch.load(p, j);
        scratch.accumulate(p, j, lo, &dydiag, &dyoff);
        scratch.accumulate(p, j, &dloff, &inverse.diag, &inverse.off);
        let (ljj, dljj) = (ld[j], dldiag[j]);
        let mut dq = -dljj / (ljj * ljj);
        for (a, s) in p.col_range(j).enumerate() {
            let dy = (-scratch.t[a] - inverse.off[s] * dljj) / ljj;
            dyoff[s] = dy;
            dq -= dloff[s] * inverse.off[s] + lo[s] * dy;
        }
        dydiag[j] = (dq - inverse.diag[j] * dljj) / ljj;
        scratch.unload(p, j);
    }
    for v in dydiag.iter_mut().chain(dyoff.iter_mut()) {
        *v = -*v;
    }
    SparseSymMatrix::from_parts(p.clone(), dydiag, dyoff)
}

/// Work arrays for one column of the sweep: `pos[i]` is `i`'s index within struct(j),
/// `t[a]` accumulates `Σ_k Y_{i_a k} L_kj` over k in struct(j).
struct Scratch {
    pos: Vec<usize>,
    t: Vec<f64>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Self { pos: vec![usize::MAX; n], t: Vec::with_capacity(n) }
    }

    fn load(&mut self, p: &SparseSymPattern, j: usize) {
        self.t.clear();
        self.t.resize(p.col(j).len(), 0.0);
        for (a, &i) in p.col(j).iter().enumerate() {
            self.pos[i] = a;
        }
    }

    fn unload(&mut self, p: &SparseSymPattern, j: usize) {
        for &i in p.col(j) {
            self.pos[i] = usize::MAX;
        }
    }

    /// Adds `Σ_{k ∈ struct(j)} Y_ik w_kj` to `t_i` for every i in struct(j), where `w`
    /// holds column values indexed by slot and `Y` is symmetric on the pattern.
    fn accumulate(&mut self, p: &SparseSymPattern, j: usize, w: &[f64], ydiag: &[f64], yoff: &[f64]) {
        for (a, s_kj) in p.col_range(j).enumerate() {
            let k = p.row_of_slot(s_kj);
            let wk = w[s_kj];
            self.t[a] += ydiag[k] * wk;
            for s_ik in p.col_range(k) {
                let b = self.pos[p.row_of_slot(s_ik)];
                if b != usize::MAX {
                    // Y_ik with i > k, both in struct(j)
                    self.t[b] += yoff[s_ik] * wk;
                    self.t[a] += yoff[s_ik] * w[p.col_range(j).start + b];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::cholesky_factorize;
    use std::sync::Arc;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn inverse_of_identity() {
        let m = SparseSymMatrix::identity(Arc::new(SparseSymPattern::banded(5, 2)));
        let y = sparse_inverse(&cholesky_factorize(&m).unwrap());
        assert!(y.diag.iter().all(|&d| d == 1.0));
        assert!(y.off.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn inverse_of_tridiagonal() {
        let m = SparseSymMatrix::from_dense(3, &[2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0]).unwrap();
        let y = sparse_inverse(&cholesky_factorize(&m).unwrap());
        for (a, b) in y.diag.iter().zip([0.75, 1.0, 0.75]) {
            assert!(close(*a, b, 1e-14));
        }
        for v in &y.off {
            assert!(close(*v, -0.5, 1e-14));
        }
    }

    #[test]
    fn inverse_of_two_by_two() {
        let m = SparseSymMatrix::from_dense(2, &[4.0, 2.0, 2.0, 5.0]).unwrap();
        let y = sparse_inverse(&cholesky_factorize(&m).unwrap());
        assert!(close(y.diag[0], 5.0 / 16.0, 1e-15));
        assert!(close(y.diag[1], 4.0 / 16.0, 1e-15));
        assert!(close(y.off[0], -2.0 / 16.0, 1e-15));
    }

    #[test]
    fn hess_vec_identity_returns_z() {
        let p = Arc::new(SparseSymPattern::banded(4, 1));
        let f = cholesky_factorize(&SparseSymMatrix::identity(p.clone())).unwrap();
        let z = SparseSymMatrix::from_parts(p, vec![1.0, 2.0, 3.0, 4.0], vec![0.5, -1.0, 2.0]).unwrap();
        let h = hess_vec(&f, &z).unwrap();
        for (a, b) in h.diag.iter().chain(&h.off).zip(z.diag.iter().chain(&z.off)) {
            assert!(close(*a, *b, 1e-14));
        }
    }

    #[test]
    fn hess_vec_diagonal_scaling() {
        let p = Arc::new(SparseSymPattern::banded(3, 2));
        let d = [1.0, 2.0, 4.0];
        let s = SparseSymMatrix::from_parts(p.clone(), d.to_vec(), vec![0.0; 3]).unwrap();
        let f = cholesky_factorize(&s).unwrap();
        let z = SparseSymMatrix::from_parts(p.clone(), vec![1.0, 1.0, 1.0], vec![1.0, 2.0, 3.0]).unwrap();
        let h = hess_vec(&f, &z).unwrap();
        for i in 0..3 {
            for j in 0..=i {
                assert!(close(h.get(i, j), z.get(i, j) / (d[i] * d[j]), 1e-14));
            }
        }
    }
}
