//! Standard-form SDP data and the sparsity structure derived from it.
//!
//! Primal: minimize `C • X` subject to `A_p • X = b_p`, `X ⪰ 0`.
//! Dual: maximize `bᵀy` subject to `Σ y_p A_p + S = C`, `S ⪰ 0`.

use std::sync::Arc;

use crate::chordal::{clique_sequence, CliqueSequence};
use crate::dense;
use crate::error::{Error, Result};
use crate::sparse::{
    min_degree_ordering, symbolic_factorize, EliminationOrdering, SparseSymMatrix, SparseSymPattern,
};

/// Nonzeros of one constraint matrix in filled-pattern coordinates.
#[derive(Debug, Clone, Default)]
struct Entries {
    diag: Vec<(usize, f64)>,
    off: Vec<(usize, f64)>,
}

#[derive(Debug, Clone)]
pub struct SdpProblem {
    n: usize,
    c_orig: SparseSymMatrix,
    a_orig: Vec<SparseSymMatrix>,
    b: Vec<f64>,
    aggregate: SparseSymPattern,
    ordering: EliminationOrdering,
    filled: Arc<SparseSymPattern>,
    cliques: CliqueSequence,
    c: SparseSymMatrix,
    a: Vec<SparseSymMatrix>,
    entries: Vec<Entries>,
    gram_factor: Vec<f64>,
}

/// Re-expresses `m` (original labels) on `target` (permuted labels).
pub fn permute_onto(
    m: &SparseSymMatrix,
    ord: &EliminationOrdering,
    target: &Arc<SparseSymPattern>,
) -> Result<SparseSymMatrix> {
    let perm = ord.perm();
    let mut out = SparseSymMatrix::zeros(target.clone());
    for (i, d) in m.diag.iter().enumerate() {
        out.diag[perm[i]] = *d;
    }
    for ((i, j), v) in m.pattern().edges().zip(&m.off) {
        out.add(perm[i], perm[j], *v)?;
    }
    Ok(out)
}

impl SdpProblem {
    /// Builds the problem and its structure: aggregate pattern, minimum-degree ordering,
    /// filled pattern and clique sequence. The constraint matrices must be linearly
    /// independent.
    pub fn new(c: SparseSymMatrix, a: Vec<SparseSymMatrix>, b: Vec<f64>) -> Result<Self> {
        let n = c.n();
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
        }
        if let Some(bad) = a.iter().find(|ap| ap.n() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.n() });
        }
        let values = c.diag.iter().chain(&c.off).chain(a.iter().flat_map(|ap| ap.diag.iter().chain(&ap.off)));
        if values.chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::Parse { line: 0, msg: "non-finite problem data".into() });
        }
        let aggregate = SparseSymPattern::union(n, std::iter::once(c.pattern()).chain(a.iter().map(|m| m.pattern())))?;
        let ordering = min_degree_ordering(&aggregate);
        let filled = Arc::new(symbolic_factorize(&aggregate, &ordering));
        let cliques = clique_sequence(&filled)?;

        let c_f = permute_onto(&c, &ordering, &filled)?;
        let a_f: Vec<SparseSymMatrix> =
            a.iter().map(|ap| permute_onto(ap, &ordering, &filled)).collect::<Result<_>>()?;
        let entries = a_f
            .iter()
            .map(|ap| Entries {
                diag: ap.diag.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(i, v)| (i, *v)).collect(),
                off: ap.off.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(s, v)| (s, *v)).collect(),
            })
            .collect();

        let mut problem = Self {
            n,
            c_orig: c,
            a_orig: a,
            b,
            aggregate,
            ordering,
            filled,
            cliques,
            c: c_f,
            a: a_f,
            entries,
            gram_factor: Vec::new(),
        };
        let m = problem.m();
        let mut gram = vec![0.0; m * m];
        for p in 0..m {
            let row = problem.apply_a(&problem.a[p]);
            gram[p * m..p * m + m].copy_from_slice(&row);
        }
        dense::cholesky_in_place(&mut gram, m).map_err(|_| Error::DependentConstraints)?;
        problem.gram_factor = gram;
        Ok(problem)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.b.len()
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// `C` in original labels.
    pub fn c_original(&self) -> &SparseSymMatrix {
        &self.c_orig
    }

    /// `A_p` in original labels.
    pub fn a_original(&self) -> &[SparseSymMatrix] {
        &self.a_orig
    }

    /// Union of the data patterns, original labels.
    pub fn aggregate_pattern(&self) -> &SparseSymPattern {
        &self.aggregate
    }

    pub fn ordering(&self) -> &EliminationOrdering {
        &self.ordering
    }

    /// Chordal extension in permuted labels; every iterate lives on it.
    pub fn filled_pattern(&self) -> &Arc<SparseSymPattern> {
        &self.filled
    }

    pub fn cliques(&self) -> &CliqueSequence {
        &self.cliques
    }

    /// `C` on the filled pattern.
    pub fn c(&self) -> &SparseSymMatrix {
        &self.c
    }

    /// `A_p` on the filled pattern.
    pub fn a(&self) -> &[SparseSymMatrix] {
        &self.a
    }

    fn on_filled<'a>(&self, w: &'a SparseSymMatrix, buf: &'a mut Option<SparseSymMatrix>) -> Result<&'a SparseSymMatrix> {
        if Arc::ptr_eq(w.pattern_arc(), &self.filled) {
            Ok(w)
        } else {
            if w.n() != self.n {
                return Err(Error::DimensionMismatch { expected: self.n, found: w.n() });
            }
            Ok(buf.insert(w.lift_to(&self.filled)?))
        }
    }

    /// `(A_1 • W, …, A_m • W)` for `W` on the filled pattern (or a subset of it).
    pub fn apply_map_a(&self, w: &SparseSymMatrix) -> Result<Vec<f64>> {
        let mut buf = None;
        let w = self.on_filled(w, &mut buf)?;
        Ok(self.apply_a(w))
    }

    /// As [`apply_map_a`](Self::apply_map_a) for `W` already on the filled pattern.
    pub(crate) fn apply_a(&self, w: &SparseSymMatrix) -> Vec<f64> {
        debug_assert!(Arc::ptr_eq(w.pattern_arc(), &self.filled));
        self.entries
            .iter()
            .map(|e| {
                let d: f64 = e.diag.iter().map(|&(i, v)| v * w.diag[i]).sum();
                let o: f64 = e.off.iter().map(|&(s, v)| v * w.off[s]).sum();
                d + 2.0 * o
            })
            .collect()
    }

    /// `Σ_p z_p A_p` on the filled pattern.
    pub fn combine(&self, z: &[f64]) -> SparseSymMatrix {
        let mut out = SparseSymMatrix::zeros(self.filled.clone());
        self.combine_into(z, &mut out);
        out
    }

    /// `out += Σ_p z_p A_p`.
    pub(crate) fn combine_into(&self, z: &[f64], out: &mut SparseSymMatrix) {
        for (e, &zp) in self.entries.iter().zip(z) {
            if zp == 0.0 {
                continue;
            }
            for &(i, v) in &e.diag {
                out.diag[i] += zp * v;
            }
            for &(s, v) in &e.off {
                out.off[s] += zp * v;
            }
        }
    }

    /// Solves `G μ = r` with the Gram matrix `G_pq = A_p • A_q`.
    pub fn gram_solve(&self, r: &mut [f64]) {
        dense::cholesky_solve(&self.gram_factor, self.m(), r);
    }

    /// Removes the component of `W` in span{A_p}, so that `A(W) = 0` afterwards.
    pub fn project_null(&self, w: &mut SparseSymMatrix) {
        let mut mu = self.apply_a(w);
        self.gram_solve(&mut mu);
        for v in mu.iter_mut() {
            *v = -*v;
        }
        self.combine_into(&mu, w);
    }

    /// `max_p |A_p • X − b_p|`.
    pub fn primal_residual(&self, x: &SparseSymMatrix) -> f64 {
        self.apply_a(x).iter().zip(&self.b).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// `max |C − Σ y_p A_p − S|` over the filled pattern.
    pub fn dual_residual(&self, y: &[f64], s: &SparseSymMatrix) -> f64 {
        let mut r = self.c.clone();
        let neg: Vec<f64> = y.iter().map(|v| -v).collect();
        self.combine_into(&neg, &mut r);
        r.axpy(-1.0, s).expect("both on the filled pattern");
        r.max_abs()
    }

    /// Converts a matrix on the filled pattern back to original labels, densely.
    pub fn to_original_dense(&self, w: &SparseSymMatrix) -> Vec<f64> {
        let n = self.n;
        let perm = self.ordering.perm();
        let wd = w.to_dense();
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = wd[perm[i] * n + perm[j]];
            }
        }
        out
    }
}

/// Free-function form of [`SdpProblem::apply_map_a`].
pub fn apply_map_a(problem: &SdpProblem, w: &SparseSymMatrix) -> Result<Vec<f64>> {
    problem.apply_map_a(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_constraints(n: usize) -> Vec<SparseSymMatrix> {
        (0..n).map(|p| SparseSymMatrix::from_triplets(n, &[(p, p, 1.0)]).unwrap()).collect()
    }

    #[test]
    fn structure_of_cycle_problem() {
        let c = SparseSymMatrix::from_triplets(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]).unwrap();
        let prob = SdpProblem::new(c, diag_constraints(4), vec![1.0; 4]).unwrap();
        assert_eq!(prob.aggregate_pattern().nnz(), 4);
        assert_eq!(prob.filled_pattern().nnz(), 5);
        assert_eq!(prob.cliques().len(), 2);
        assert!(prob.c().pattern().nnz() == 5);
        assert_eq!(prob.c().off.iter().filter(|v| **v != 0.0).count(), 4);
    }

    #[test]
    fn map_of_zero_and_identity() {
        let c = SparseSymMatrix::from_triplets(3, &[(0, 1, 1.0)]).unwrap();
        let prob = SdpProblem::new(c, diag_constraints(3), vec![1.0; 3]).unwrap();
        let f = prob.filled_pattern().clone();
        assert_eq!(prob.apply_map_a(&SparseSymMatrix::zeros(f.clone())).unwrap(), vec![0.0; 3]);
        assert_eq!(prob.apply_map_a(&SparseSymMatrix::identity(f)).unwrap(), vec![1.0; 3]);
    }

    #[test]
    fn projection_kills_constraint_values() {
        let n = 3;
        let a = vec![
            SparseSymMatrix::from_triplets(n, &[(0, 0, 1.0), (1, 0, 0.5)]).unwrap(),
            SparseSymMatrix::from_triplets(n, &[(2, 1, 1.0), (1, 1, -1.0)]).unwrap(),
        ];
        let c = SparseSymMatrix::from_triplets(n, &[(2, 2, 1.0)]).unwrap();
        let prob = SdpProblem::new(c, a, vec![1.0, 0.0]).unwrap();
        let mut w = SparseSymMatrix::from_parts(
            prob.filled_pattern().clone(),
            vec![1.0, 2.0, 3.0],
            vec![0.7; prob.filled_pattern().nnz()],
        )
        .unwrap();
        prob.project_null(&mut w);
        assert!(prob.apply_a(&w).iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn dependent_constraints_rejected() {
        let a = vec![
            SparseSymMatrix::from_triplets(2, &[(0, 0, 1.0)]).unwrap(),
            SparseSymMatrix::from_triplets(2, &[(0, 0, 2.0)]).unwrap(),
        ];
        let c = SparseSymMatrix::zeros(Arc::new(SparseSymPattern::diagonal(2)));
        assert_eq!(SdpProblem::new(c, a, vec![1.0, 2.0]).unwrap_err(), Error::DependentConstraints);
    }
}
