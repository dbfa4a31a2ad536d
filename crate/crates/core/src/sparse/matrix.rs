use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sparse::SparseSymPattern;

/// Symmetric matrix with values on a [`SparseSymPattern`]: one value per diagonal entry
/// and one per stored lower-triangle edge. Entries off the pattern are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymMatrix {
    pattern: Arc<SparseSymPattern>,
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SparseSymMatrix {
    pub fn zeros(pattern: Arc<SparseSymPattern>) -> Self {
        let (n, nnz) = (pattern.n(), pattern.nnz());
        Self { pattern, diag: vec![0.0; n], off: vec![0.0; nnz] }
    }

    pub fn identity(pattern: Arc<SparseSymPattern>) -> Self {
        let mut m = Self::zeros(pattern);
        m.diag.iter_mut().for_each(|d| *d = 1.0);
        m
    }

    pub fn from_parts(pattern: Arc<SparseSymPattern>, diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.len() != pattern.n() {
            return Err(Error::DimensionMismatch { expected: pattern.n(), found: diag.len() });
        }
        if off.len() != pattern.nnz() {
            return Err(Error::DimensionMismatch { expected: pattern.nnz(), found: off.len() });
        }
        Ok(Self { pattern, diag, off })
    }

    /// Builds a matrix from `(i, j, value)` triplets; `(i, j)` and `(j, i)` address the same
    /// entry and repeated entries are summed. The pattern is exactly the set of off-diagonal
    /// positions mentioned.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let pattern = Arc::new(SparseSymPattern::from_edges(
            n,
            triplets.iter().map(|&(i, j, _)| (i, j)),
        )?);
        let mut m = Self::zeros(pattern);
        for &(i, j, v) in triplets {
            m.add(i, j, v)?;
        }
        Ok(m)
    }

    /// Dense row-major input; only the lower triangle is read and exact zeros are dropped.
    pub fn from_dense(n: usize, a: &[f64]) -> Result<Self> {
        if a.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: a.len() });
        }
        let mut t = Vec::new();
        for i in 0..n {
            for j in 0..=i {
                let v = a[i * n + j];
                if i == j || v != 0.0 {
                    t.push((i, j, v));
                }
            }
        }
        Self::from_triplets(n, &t)
    }

    pub fn n(&self) -> usize {
        self.pattern.n()
    }

    pub fn pattern(&self) -> &SparseSymPattern {
        &self.pattern
    }

    pub fn pattern_arc(&self) -> &Arc<SparseSymPattern> {
        &self.pattern
    }

    pub fn shares_pattern(&self, other: &SparseSymMatrix) -> bool {
        Arc::ptr_eq(&self.pattern, &other.pattern) || *self.pattern == *other.pattern
    }

    /// Value at `(i, j)`; zero off the pattern.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.diag[i];
        }
        self.pattern.find(i, j).map_or(0.0, |s| self.off[s])
    }

    /// Adds `v` to entry `(i, j)` (and its mirror). Fails off the pattern.
    pub fn add(&mut self, i: usize, j: usize, v: f64) -> Result<()> {
        let n = self.n();
        if i >= n || j >= n {
            return Err(Error::IndexOutOfRange(i, j));
        }
        if i == j {
            self.diag[i] += v;
        } else {
            let s = self.pattern.find(i, j).ok_or(Error::PatternMismatch)?;
            self.off[s] += v;
        }
        Ok(())
    }

    /// Same values re-expressed on a superset pattern.
    pub fn lift_to(&self, pattern: &Arc<SparseSymPattern>) -> Result<Self> {
        if Arc::ptr_eq(&self.pattern, pattern) {
            return Ok(self.clone());
        }
        let mut out = Self::zeros(pattern.clone());
        if pattern.n() != self.n() {
            return Err(Error::DimensionMismatch { expected: pattern.n(), found: self.n() });
        }
        out.diag.copy_from_slice(&self.diag);
        for ((i, j), v) in self.pattern.edges().zip(&self.off) {
            let s = pattern.find(i, j).ok_or(Error::PatternMismatch)?;
            out.off[s] = *v;
        }
        Ok(out)
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n();
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = self.diag[i];
        }
        for ((i, j), v) in self.pattern.edges().zip(&self.off) {
            a[i * n + j] = *v;
            a[j * n + i] = *v;
        }
        a
    }

    pub fn max_abs(&self) -> f64 {
        self.diag.iter().chain(&self.off).fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `self += alpha * other`; both must share a pattern.
    pub fn axpy(&mut self, alpha: f64, other: &SparseSymMatrix) -> Result<()> {
        if !self.shares_pattern(other) {
            return Err(Error::PatternMismatch);
        }
        for (a, b) in self.diag.iter_mut().zip(&other.diag) {
            *a += alpha * b;
        }
        for (a, b) in self.off.iter_mut().zip(&other.off) {
            *a += alpha * b;
        }
        Ok(())
    }

    pub fn scale(&mut self, alpha: f64) {
        self.diag.iter_mut().chain(self.off.iter_mut()).for_each(|v| *v *= alpha);
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        let mut m = self.clone();
        m.scale(alpha);
        m
    }

    /// Lower bound on the smallest eigenvalue from Gershgorin discs.
    pub fn gershgorin_lower_bound(&self) -> f64 {
        let mut radius = vec![0.0; self.n()];
        for ((i, j), v) in self.pattern.edges().zip(&self.off) {
            radius[i] += v.abs();
            radius[j] += v.abs();
        }
        self.diag
            .iter()
            .zip(&radius)
            .map(|(d, r)| d - r)
            .fold(f64::INFINITY, f64::min)
    }
}

/// `A • B = Σ_ij A_ij B_ij`, counting each stored off-diagonal entry twice.
pub fn inner_product(a: &SparseSymMatrix, b: &SparseSymMatrix) -> Result<f64> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), found: b.n() });
    }
    let mut sum: f64 = a.diag.iter().zip(&b.diag).map(|(x, y)| x * y).sum();
    if a.shares_pattern(b) {
        sum += 2.0 * a.off.iter().zip(&b.off).map(|(x, y)| x * y).sum::<f64>();
        return Ok(sum);
    }
    let (pa, pb) = (a.pattern(), b.pattern());
    let mut off = 0.0;
    for j in 0..a.n() {
        let (ra, rb) = (pa.col_range(j), pb.col_range(j));
        let (mut s, mut t) = (ra.start, rb.start);
        while s < ra.end && t < rb.end {
            let (i, k) = (pa.row_of_slot(s), pb.row_of_slot(t));
            match i.cmp(&k) {
                std::cmp::Ordering::Less => s += 1,
                std::cmp::Ordering::Greater => t += 1,
                std::cmp::Ordering::Equal => {
                    off += a.off[s] * b.off[t];
                    s += 1;
                    t += 1;
                }
            }
        }
    }
    Ok(sum + 2.0 * off)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_product_identity() {
        let i3 = SparseSymMatrix::identity(Arc::new(SparseSymPattern::diagonal(3)));
        assert_eq!(inner_product(&i3, &i3).unwrap(), 3.0);
    }

    #[test]
    fn inner_product_off_diagonal_counts_twice() {
        let a = SparseSymMatrix::from_triplets(2, &[(0, 1, 1.0)]).unwrap();
        let b = SparseSymMatrix::from_triplets(2, &[(1, 0, 2.0)]).unwrap();
        assert_eq!(inner_product(&a, &b).unwrap(), 4.0);
    }

    #[test]
    fn inner_product_mixed_patterns() {
        let a = SparseSymMatrix::from_dense(2, &[1.0, 2.0, 2.0, 3.0]).unwrap();
        let b = SparseSymMatrix::from_dense(2, &[4.0, 0.0, 0.0, 5.0]).unwrap();
        assert_eq!(inner_product(&a, &b).unwrap(), 19.0);
        assert_eq!(inner_product(&b, &a).unwrap(), 19.0);
    }

    #[test]
    fn inner_product_dimension_mismatch() {
        let a = SparseSymMatrix::identity(Arc::new(SparseSymPattern::diagonal(2)));
        let b = SparseSymMatrix::identity(Arc::new(SparseSymPattern::diagonal(3)));
        assert!(matches!(inner_product(&a, &b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn lift_preserves_values() {
        let a = SparseSymMatrix::from_triplets(3, &[(0, 2, 1.5), (1, 1, 2.0)]).unwrap();
        let big = Arc::new(SparseSymPattern::dense(3));
        let l = a.lift_to(&big).unwrap();
        assert_eq!(l.to_dense(), a.to_dense());
        assert!(l.lift_to(&Arc::new(SparseSymPattern::diagonal(3))).is_err());
    }
}
