//! Partial symmetric matrices on a chordal pattern and their maximum-determinant
//! positive definite completions.
//!
//! All routines work in the pattern's own labels, where `0..n` is a perfect elimination
//! ordering. Every quantity is assembled from dense clique blocks `X̄_{C_r C_r}` and
//! `X̄_{U_r U_r}`; the completed matrix itself is never formed except in
//! [`CompletionFactors::reconstruct_dense`] and [`completion_vectors`].

mod banded;

use std::sync::Arc;

use crate::chordal::{verify_peo, CliqueSequence};
use crate::dense;
use crate::error::{Error, Result};
use crate::logdet_ad::hess_vec;
use crate::sparse::{cholesky_factorize, CholeskyFactor, SparseSymMatrix, SparseSymPattern};

pub use banded::{logdet_completion_banded, UpperFactor};

/// Symmetric matrix whose entries are specified only on a chordal pattern (and the
/// diagonal). The pattern must have `0..n` as a perfect elimination ordering.
#[derive(Debug, Clone)]
pub struct PartialSymMatrix {
    values: SparseSymMatrix,
}

impl PartialSymMatrix {
    pub fn new(values: SparseSymMatrix) -> Result<Self> {
        if !verify_peo(values.pattern()) {
            return Err(Error::NotChordal);
        }
        if values.diag.iter().chain(&values.off).any(|v| !v.is_finite()) {
            return Err(Error::InfeasiblePoint);
        }
        Ok(Self { values })
    }

    /// Skips the elimination-order check; the caller vouches for the pattern.
    pub(crate) fn new_unchecked(values: SparseSymMatrix) -> Self {
        Self { values }
    }

    pub fn identity(pattern: Arc<SparseSymPattern>) -> Result<Self> {
        Self::new(SparseSymMatrix::identity(pattern))
    }

    pub fn n(&self) -> usize {
        self.values.n()
    }

    pub fn pattern(&self) -> &Arc<SparseSymPattern> {
        self.values.pattern_arc()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values.get(i, j)
    }

    pub fn values(&self) -> &SparseSymMatrix {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut SparseSymMatrix {
        &mut self.values
    }

    pub fn into_values(self) -> SparseSymMatrix {
        self.values
    }
}

fn block(x: &PartialSymMatrix, idx: &[usize]) -> Vec<f64> {
    dense::gather(idx, |i, j| x.get(i, j))
}

fn factored_block(x: &PartialSymMatrix, idx: &[usize], r: usize) -> Result<Vec<f64>> {
    let mut b = block(x, idx);
    dense::cholesky_in_place(&mut b, idx.len()).map_err(|_| Error::NotCompletable(r))?;
    Ok(b)
}

/// True iff every clique block of `x` is positive definite, i.e. `x` has a positive
/// definite completion.
pub fn clique_pd_check(x: &PartialSymMatrix, cs: &CliqueSequence) -> bool {
    cs.cliques.iter().enumerate().all(|(r, c)| factored_block(x, c, r).is_ok())
}

/// `ln det X̂ = Σ_r ln det X̄_{C_r C_r} − Σ_r ln det X̄_{U_r U_r}`.
pub fn logdet_completion(x: &PartialSymMatrix, cs: &CliqueSequence) -> Result<f64> {
    let mut sum = 0.0;
    for r in 0..cs.len() {
        let lc = factored_block(x, &cs.cliques[r], r)?;
        sum += dense::logdet_from_factor(&lc, cs.cliques[r].len());
        let u = &cs.separators[r];
        if !u.is_empty() {
            let lu = factored_block(x, u, r)?;
            sum -= dense::logdet_from_factor(&lu, u.len());
        }
    }
    Ok(sum)
}

fn scatter_add(out: &mut SparseSymMatrix, idx: &[usize], m: &[f64], alpha: f64) {
    let k = idx.len();
    let p = out.pattern_arc().clone();
    for a in 0..k {
        out.diag[idx[a]] += alpha * m[a * k + a];
        for b in 0..a {
            let s = p.find(idx[a], idx[b]).expect("clique lies inside the pattern");
            out.off[s] += alpha * m[a * k + b];
        }
    }
}

/// `X̂⁻¹`, which is zero off the pattern, as a matrix on `x`'s pattern:
/// `Σ_r (X̄_{C_r C_r})⁻¹ − Σ_r (X̄_{U_r U_r})⁻¹` scattered into place.
pub fn completion_inverse(x: &PartialSymMatrix, cs: &CliqueSequence) -> Result<SparseSymMatrix> {
    completion_inverse_logdet(x, cs).map(|(w, _)| w)
}

/// [`completion_inverse`] and [`logdet_completion`] from one pass over the cliques.
pub fn completion_inverse_logdet(x: &PartialSymMatrix, cs: &CliqueSequence) -> Result<(SparseSymMatrix, f64)> {
    let mut out = SparseSymMatrix::zeros(x.pattern().clone());
    let mut logdet = 0.0;
    for r in 0..cs.len() {
        let c = &cs.cliques[r];
        let lc = factored_block(x, c, r)?;
        logdet += dense::logdet_from_factor(&lc, c.len());
        scatter_add(&mut out, c, &dense::inverse_from_factor(&lc, c.len()), 1.0);
        let u = &cs.separators[r];
        if !u.is_empty() {
            let lu = factored_block(x, u, r)?;
            logdet -= dense::logdet_from_factor(&lu, u.len());
            scatter_add(&mut out, u, &dense::inverse_from_factor(&lu, u.len()), -1.0);
        }
    }
    Ok((out, logdet))
}

/// Sparse Cholesky factor of `X̂⁻¹` on the pattern (no fill, the pattern is chordal in
/// this order). Its selected inverse is `X̂|_F`.
pub fn completion_inverse_factor(x: &PartialSymMatrix, cs: &CliqueSequence) -> Result<CholeskyFactor> {
    let w = completion_inverse(x, cs)?;
    cholesky_factorize(&w).map_err(|_| Error::NotCompletable(cs.len().saturating_sub(1)))
}

/// `(X̂ Z X̂)|_F`, the action of `−∇² ln det` at `X̂⁻¹` along `Z`.
pub fn completion_hess_apply(
    x: &PartialSymMatrix,
    cs: &CliqueSequence,
    z: &SparseSymMatrix,
) -> Result<SparseSymMatrix> {
    let factor = completion_inverse_factor(x, cs)?;
    hess_vec(&factor, z)
}

/// Per-clique pieces of `X̂ = M⁻¹ D M⁻ᵀ`, where `M` is unit lower triangular with the
/// block `−B_rᵀ` in rows `S_r`, columns `U_r`, `B_r = X̄_{U_r U_r}⁻¹ X̄_{U_r S_r}`, and
/// `D` is block diagonal with Schur complements `D_r = X̄_{S_r S_r} − X̄_{S_r U_r} B_r`.
#[derive(Debug, Clone)]
pub struct CompletionFactors {
    n: usize,
    residuals: Vec<Vec<usize>>,
    separators: Vec<Vec<usize>>,
    /// `B_r`, row-major `|U_r| × |S_r|`.
    b: Vec<Vec<f64>>,
    /// Cholesky factor of `D_r`, row-major lower `|S_r| × |S_r|`.
    d_chol: Vec<Vec<f64>>,
    logdet: f64,
}

impl CompletionFactors {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn logdet(&self) -> f64 {
        self.logdet
    }

    pub fn clique_count(&self) -> usize {
        self.residuals.len()
    }

    /// `B_r` as a row-major `|U_r| × |S_r|` block.
    pub fn coupling(&self, r: usize) -> &[f64] {
        &self.b[r]
    }

    /// `D_r` as a dense row-major block.
    pub fn schur_block(&self, r: usize) -> Vec<f64> {
        let k = self.residuals[r].len();
        let l = &self.d_chol[r];
        let mut d = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..k {
                d[i * k + j] = (0..=i.min(j)).map(|t| l[i * k + t] * l[j * k + t]).sum();
            }
        }
        d
    }

    /// `X̂` as a dense row-major matrix.
    pub fn reconstruct_dense(&self) -> Vec<f64> {
        let n = self.n;
        let vt = self.transposed_vectors();
        let mut x = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = dense::dot(&vt[i * n..i * n + n], &vt[j * n..j * n + n]);
                x[i * n + j] = v;
                x[j * n + i] = v;
            }
        }
        x
    }

    /// `Vᵀ = M⁻¹ chol(D)`, row-major; row `i` is vertex `i`'s vector.
    fn transposed_vectors(&self) -> Vec<f64> {
        let n = self.n;
        let mut vt = vec![0.0; n * n];
        for r in (0..self.clique_count()).rev() {
            let (s, u) = (&self.residuals[r], &self.separators[r]);
            let (ks, ku) = (s.len(), u.len());
            let l = &self.d_chol[r];
            for a in 0..ks {
                let row = s[a] * n;
                for t in 0..=a {
                    vt[row + s[t]] = l[a * ks + t];
                }
                for c in 0..ku {
                    let coef = self.b[r][c * ks + a];
                    if coef != 0.0 {
                        let src = u[c] * n;
                        for col in 0..n {
                            vt[row + col] += coef * vt[src + col];
                        }
                    }
                }
            }
        }
        vt
    }
}

/// Factors of the maximum-determinant completion.
pub fn completion_factors(x: &PartialSymMatrix, cs: &CliqueSequence) -> Result<CompletionFactors> {
    let l = cs.len();
    let mut b = Vec::with_capacity(l);
    let mut d_chol = Vec::with_capacity(l);
    let mut logdet = 0.0;
    for r in 0..l {
        let (s, u) = (&cs.residuals[r], &cs.separators[r]);
        let (ks, ku) = (s.len(), u.len());
        let mut d = block(x, s);
        let mut br = vec![0.0; ku * ks];
        if ku > 0 {
            let lu = factored_block(x, u, r)?;
            for a in 0..ks {
                let mut col: Vec<f64> = u.iter().map(|&ui| x.get(ui, s[a])).collect();
                dense::cholesky_solve(&lu, ku, &mut col);
                for c in 0..ku {
                    br[c * ks + a] = col[c];
                }
            }
            for a in 0..ks {
                for t in 0..ks {
                    let corr: f64 = (0..ku).map(|c| x.get(s[a], u[c]) * br[c * ks + t]).sum();
                    d[a * ks + t] -= corr;
                }
            }
        }
        dense::cholesky_in_place(&mut d, ks).map_err(|_| Error::NotCompletable(r))?;
        logdet += dense::logdet_from_factor(&d, ks);
        b.push(br);
        d_chol.push(d);
    }
    Ok(CompletionFactors {
        n: x.n(),
        residuals: cs.residuals.clone(),
        separators: cs.separators.clone(),
        b,
        d_chol,
        logdet,
    })
}

/// Dense `V` (row-major `n × n`) with `VᵀV = X̂`; column `i` is vertex `i`'s vector.
pub fn completion_vectors(factors: &CompletionFactors) -> Vec<f64> {
    let n = factors.n;
    let vt = factors.transposed_vectors();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            v[j * n + i] = vt[i * n + j];
        }
    }
    v
}
