//! Dense reference implementations used as oracles by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sparse_sdp::completion::PartialSymMatrix;
use sparse_sdp::maxcut::Graph;
use sparse_sdp::logdet_ad::{hess_vec, sparse_inverse};
use sparse_sdp::sparse::{
    cholesky_factorize, inner_product, min_degree_ordering, symbolic_factorize, SparseSymMatrix, SparseSymPattern,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dense(m: &SparseSymMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.n(), m.n(), &m.to_dense())
}

pub fn from_rows(n: usize, a: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(n, n, a)
}

pub fn inner(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.component_mul(b).sum()
}

pub fn logdet(a: &DMatrix<f64>) -> Option<f64> {
    let l = a.clone().cholesky()?;
    Some(2.0 * l.l().diagonal().iter().map(|v| v.ln()).sum::<f64>())
}

pub fn spd_inverse(a: &DMatrix<f64>) -> DMatrix<f64> {
    a.clone().cholesky().expect("positive definite").inverse()
}

/// Largest `|a_ij − b_ij|` over the pattern (diagonal included).
pub fn max_diff_on(p: &SparseSymPattern, a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..p.n() {
        d = d.max((a[(i, i)] - b[(i, i)]).abs());
    }
    for (i, j) in p.edges() {
        d = d.max((a[(i, j)] - b[(i, j)]).abs());
    }
    d
}

pub fn max_abs_on(p: &SparseSymPattern, a: &DMatrix<f64>) -> f64 {
    max_diff_on(p, a, &DMatrix::zeros(p.n(), p.n()))
}

pub fn random_graph_pattern(rng: &mut ChaCha8Rng, n: usize, q: f64) -> SparseSymPattern {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..i {
            if rng.random::<f64>() < q {
                edges.push((i, j));
            }
        }
    }
    SparseSymPattern::from_edges(n, edges).unwrap()
}

/// Chordal pattern (identity order is a PEO) from a random graph on `n` vertices.
pub fn random_chordal_pattern(rng: &mut ChaCha8Rng, n: usize) -> Arc<SparseSymPattern> {
    let q = rng.random_range(0.02..0.3);
    let g = random_graph_pattern(rng, n, q);
    Arc::new(symbolic_factorize(&g, &min_degree_ordering(&g)))
}

/// Diagonally dominant matrix on `pattern`.
pub fn random_pd_on(rng: &mut ChaCha8Rng, pattern: &Arc<SparseSymPattern>) -> SparseSymMatrix {
    let n = pattern.n();
    let off: Vec<f64> = (0..pattern.nnz()).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut diag: Vec<f64> = (0..n).map(|_| rng.random_range(0.2..1.5)).collect();
    for (i, j) in pattern.edges() {
        let v = off[pattern.find(i, j).unwrap()].abs();
        diag[i] += v;
        diag[j] += v;
    }
    SparseSymMatrix::from_parts(pattern.clone(), diag, off).unwrap()
}

/// Random symmetric matrix supported on a random subset of `pattern`.
pub fn random_sym_on(rng: &mut ChaCha8Rng, pattern: &Arc<SparseSymPattern>, density: f64) -> SparseSymMatrix {
    let n = pattern.n();
    let mut t = Vec::new();
    for i in 0..n {
        if rng.random::<f64>() < density {
            t.push((i, i, rng.random_range(-1.0..1.0)));
        }
    }
    for (i, j) in pattern.edges() {
        if rng.random::<f64>() < density {
            t.push((i, j, rng.random_range(-1.0..1.0)));
        }
    }
    SparseSymMatrix::from_triplets(n, &t).unwrap().lift_to(pattern).unwrap()
}

/// Dense `BBᵀ/n + εI`.
pub fn random_dense_pd(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let b = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    &b * b.transpose() / n as f64 + DMatrix::identity(n, n) * 0.2
}

/// Restriction of a dense PD matrix to `pattern`, which therefore has a PD completion.
pub fn restrict(y: &DMatrix<f64>, pattern: &Arc<SparseSymPattern>) -> PartialSymMatrix {
    let n = pattern.n();
    let diag = (0..n).map(|i| y[(i, i)]).collect();
    let mut off = vec![0.0; pattern.nnz()];
    for (i, j) in pattern.edges() {
        off[pattern.find(i, j).unwrap()] = y[(i, j)];
    }
    PartialSymMatrix::new(SparseSymMatrix::from_parts(pattern.clone(), diag, off).unwrap()).unwrap()
}

/// Pairs `(i, j)`, `i > j`, not in `specified`.
pub fn free_pairs(n: usize, specified: impl Fn(usize, usize) -> bool) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 0..n {
        for j in 0..i {
            if !specified(i, j) {
                v.push((i, j));
            }
        }
    }
    v
}

/// Maximizes `ln det X` over the free entries by damped Newton, starting from a PD `x0`
/// that agrees with the fixed entries.
pub fn max_det_completion(x0: &DMatrix<f64>, free: &[(usize, usize)]) -> DMatrix<f64> {
    let mut x = x0.clone();
    let k = free.len();
    if k == 0 {
        return x;
    }
    for _ in 0..200 {
        let w = spd_inverse(&x);
        let g = DVector::from_fn(k, |a, _| 2.0 * w[free[a]]);
        let h = DMatrix::from_fn(k, k, |a, b| {
            let ((i, j), (p, q)) = (free[a], free[b]);
            2.0 * (w[(i, p)] * w[(j, q)] + w[(i, q)] * w[(j, p)])
        });
        let step = h.cholesky().expect("negated Hessian is PD").solve(&g);
        let decrement = g.dot(&step);
        if decrement < 1e-26 {
            break;
        }
        let f0 = logdet(&x).unwrap();
        let mut t = 1.0;
        loop {
            let mut cand = x.clone();
            for (a, &(i, j)) in free.iter().enumerate() {
                cand[(i, j)] += t * step[a];
                cand[(j, i)] += t * step[a];
            }
            if let Some(f) = logdet(&cand) {
                if f >= f0 + 0.25 * t * decrement || t < 1e-12 {
                    x = cand;
                    break;
                }
            }
            t *= 0.5;
        }
    }
    x
}

/// MAX-CUT relaxation value (the maximization form) by a dense primal barrier method
/// over the off-diagonal entries of `X` with `diag(X) = 1`.
pub fn dense_maxcut_bound(g: &Graph) -> f64 {
    let n = g.n();
    let mut lap = DMatrix::<f64>::zeros(n, n);
    for &(i, j, w) in g.edges() {
        lap[(i, i)] += w;
        lap[(j, j)] += w;
        lap[(i, j)] -= w;
        lap[(j, i)] -= w;
    }
    let c = -lap / 4.0;
    let pairs = free_pairs(n, |_, _| false);
    let k = pairs.len();
    let mut x = DMatrix::<f64>::identity(n, n);
    let value = |x: &DMatrix<f64>, mu: f64| inner(&c, x) / mu - logdet(x).unwrap_or(f64::NAN);
    let mut mu = 1.0;
    'outer: while mu * n as f64 > 1e-8 {
        for _ in 0..100 {
            let w = spd_inverse(&x);
            let g = DVector::from_fn(k, |a, _| {
                let (i, j) = pairs[a];
                2.0 * c[(i, j)] / mu - 2.0 * w[(i, j)]
            });
            let h = DMatrix::from_fn(k, k, |a, b| {
                let ((i, j), (p, q)) = (pairs[a], pairs[b]);
                2.0 * (w[(i, p)] * w[(j, q)] + w[(i, q)] * w[(j, p)])
            });
            let Some(chol) = h.cholesky() else { break 'outer };
            let step = -chol.solve(&g);
            let decrement = -g.dot(&step);
            if decrement < 1e-20 {
                break;
            }
            let f0 = value(&x, mu);
            let mut t = 1.0;
            loop {
                let mut cand = x.clone();
                for (a, &(i, j)) in pairs.iter().enumerate() {
                    cand[(i, j)] += t * step[a];
                    cand[(j, i)] += t * step[a];
                }
                let f = value(&cand, mu);
                if f <= f0 - 0.25 * t * decrement || t < 1e-14 {
                    if f.is_finite() {
                        x = cand;
                    }
                    break;
                }
                t *= 0.5;
            }
        }
        mu *= 0.2;
    }
    -inner(&c, &x)
}

/// Dense search directions at `(X̂, S, y)` for `min C•X, A(X) = b`, from first principles.
#[derive(Debug, Clone)]
pub struct DenseDirections {
    pub dx1: DMatrix<f64>,
    pub dx2: DMatrix<f64>,
    pub ds1: DMatrix<f64>,
    pub ds2: DMatrix<f64>,
    pub dy1: Vec<f64>,
    pub dy2: Vec<f64>,
    pub lam: f64,
    pub lam_tilde: f64,
}

pub fn dense_directions(a: &[DMatrix<f64>], xhat: &DMatrix<f64>, s: &DMatrix<f64>, gap: f64, rho: f64) -> DenseDirections {
    let m = a.len();
    let n = xhat.nrows();
    let combine = |c: &[f64]| a.iter().zip(c).fold(DMatrix::zeros(n, n), |acc, (ap, v)| acc + ap * *v);
    let solve = |k: DMatrix<f64>, r: DVector<f64>| k.cholesky().expect("Gram system is PD").solve(&r);

    // Primal: minimize the barrier model at X̂ projected onto A(ΔX) = 0.
    let mm = s * (rho / gap);
    let xmx = xhat * &mm * xhat;
    let k = DMatrix::from_fn(m, m, |p, q| inner(&a[p], &(xhat * &a[q] * xhat)));
    let r = DVector::from_fn(m, |p, _| inner(&a[p], &xmx) - inner(&a[p], xhat));
    let lambda = solve(k, r);
    let nmat = xhat - &xmx + xhat * combine(lambda.as_slice()) * xhat;
    let xi = spd_inverse(xhat);
    let lam = inner(&(&xi * &nmat * &xi), &nmat).sqrt();
    let dx1 = &nmat / (1.0 + lam);
    let ds1 = combine(lambda.as_slice()) * (-gap / rho);
    let dy1: Vec<f64> = lambda.iter().map(|v| v * gap / rho).collect();

    // Dual: Newton step for (ρ/gap) b•y-type model over S = C − Σ y_p A_p.
    let si = spd_inverse(s);
    let kt = DMatrix::from_fn(m, m, |p, q| inner(&a[p], &(&si * &a[q] * &si)));
    let xbar_a: Vec<f64> = a.iter().map(|ap| inner(ap, xhat)).collect();
    let rt = DVector::from_fn(m, |p, _| inner(&a[p], &si) - rho / gap * xbar_a[p]);
    let z = solve(kt, rt);
    let nt = combine(z.as_slice());
    let t = &si * &nt * &si;
    let lam_tilde = inner(&t, &nt).sqrt();
    let ds2 = &nt / (1.0 + lam_tilde);
    let dy2: Vec<f64> = z.iter().map(|v| -v / (1.0 + lam_tilde)).collect();
    let dx2 = (&si - &t) * (gap / rho) - xhat;

    DenseDirections { dx1, dx2, ds1, ds2, dy1, dy2, lam, lam_tilde }
}

/// `max |a − b| / max(1, max |b|)`.
pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}

/// Worst relative disagreement between the sparse directions at `state` and the dense
/// oracle, per component: `[dx1, dx2, ds1, ds2, dy1, dy2, lam, lam_tilde]`.
pub fn direction_errors(
    problem: &sparse_sdp::problem::SdpProblem,
    state: &sparse_sdp::solver::IterateState,
    cfg: &sparse_sdp::solver::SolverConfig,
) -> [f64; 8] {
    use sparse_sdp::completion::completion_factors;
    let n = problem.n();
    let f = problem.filled_pattern();
    let a: Vec<DMatrix<f64>> = problem.a().iter().map(dense).collect();
    let s = dense(state.s());

    // Recompute S from C and y, and X̂ by Newton from the sparse reconstruction.
    let mut s_ref = dense(problem.c());
    for (ap, yp) in a.iter().zip(state.y()) {
        s_ref -= ap * *yp;
    }
    assert!((&s_ref - &s).abs().max() <= 1e-12 * s.abs().max().max(1.0));
    let start = from_rows(n, &completion_factors(state.x(), problem.cliques()).unwrap().reconstruct_dense());
    let xhat = max_det_completion(&start, &free_pairs(n, |i, j| f.contains(i, j)));
    assert!(max_diff_on(f, &xhat, &dense(state.x().values())) <= 1e-12 * xhat.abs().max());

    let gap = inner(&s, &xhat);
    let d = dense_directions(&a, &xhat, &s, gap, cfg.rho(n));
    let dirs = sparse_sdp::solver::compute_directions(problem, state, cfg).unwrap();
    let on_f = |sparse: &SparseSymMatrix, reference: &DMatrix<f64>| {
        max_diff_on(f, &dense(sparse), reference) / max_abs_on(f, reference).max(1e-300)
    };
    let full = |sparse: &SparseSymMatrix, reference: &DMatrix<f64>| {
        (dense(sparse) - reference).abs().max() / reference.abs().max().max(1e-300)
    };
    let scalar = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-300);
    [
        on_f(&dirs.dx1, &d.dx1),
        on_f(&dirs.dx2, &d.dx2),
        full(&dirs.ds1, &d.ds1),
        full(&dirs.ds2, &d.ds2),
        rel_err(&dirs.dy1, &d.dy1),
        rel_err(&dirs.dy2, &d.dy2),
        scalar(dirs.lam, d.lam),
        scalar(dirs.lam_tilde, d.lam_tilde),
    ]
}

/// States visited by a default solve, starting point first.
pub fn visited_states(
    problem: &sparse_sdp::problem::SdpProblem,
    cfg: &sparse_sdp::solver::SolverConfig,
) -> Vec<sparse_sdp::solver::IterateState> {
    let (x0, y0) = sparse_sdp::solver::feasible_start(problem).unwrap();
    let mut states = Vec::new();
    sparse_sdp::solver::solve_with_observer(problem, x0, y0, cfg, |_, s| states.push(s.clone())).unwrap();
    states
}

/// `h(u) = ln det(C − Σ u_p A_p)` with data on a random chordal pattern.
pub struct LogdetInstance {
    pub c: SparseSymMatrix,
    pub a: Vec<SparseSymMatrix>,
    pub u: Vec<f64>,
}

impl LogdetInstance {
    /// `C − Σ u_p A_p ≻ 0` at the base point, data on a random chordal pattern.
    pub fn random(r: &mut ChaCha8Rng) -> (Arc<SparseSymPattern>, Self) {
        let n = r.random_range(2..=15);
        let p = random_chordal_pattern(r, n);
        let m = r.random_range(1..=6);
        let a: Vec<SparseSymMatrix> = (0..m).map(|_| random_sym_on(r, &p, 0.5)).collect();
        let u: Vec<f64> = (0..m).map(|_| r.random_range(-0.3..0.3)).collect();
        let mut c = random_pd_on(r, &p);
        for (ap, up) in a.iter().zip(&u) {
            c.axpy(*up, ap).unwrap();
        }
        (p, Self { c, a, u })
    }

    pub fn slack(&self, u: &[f64]) -> SparseSymMatrix {
        let mut s = self.c.clone();
        for (ap, up) in self.a.iter().zip(u) {
            s.axpy(-up, ap).unwrap();
        }
        s
    }

    pub fn h(&self, u: &[f64]) -> f64 {
        cholesky_factorize(&self.slack(u)).unwrap().logdet()
    }

    /// `∇h = −A(S⁻¹)`.
    pub fn grad(&self, u: &[f64]) -> Vec<f64> {
        let y = sparse_inverse(&cholesky_factorize(&self.slack(u)).unwrap());
        self.a.iter().map(|ap| -inner_product(ap, &y).unwrap()).collect()
    }

    /// `(∇²h) z = −A(S⁻¹ (Σ z_p A_p) S⁻¹)`.
    pub fn hess(&self, u: &[f64], z: &[f64]) -> Vec<f64> {
        let s = self.slack(u);
        let mut dz = SparseSymMatrix::zeros(s.pattern_arc().clone());
        for (ap, zp) in self.a.iter().zip(z) {
            dz.axpy(*zp, ap).unwrap();
        }
        let w = hess_vec(&cholesky_factorize(&s).unwrap(), &dz).unwrap();
        self.a.iter().map(|ap| -inner_product(ap, &w).unwrap()).collect()
    }
}

impl LogdetInstance {
    /// Central differences of `h` at the base point.
    pub fn fd_grad(&self, step: f64) -> Vec<f64> {
        (0..self.a.len())
            .map(|p| {
                let (mut up, mut um) = (self.u.clone(), self.u.clone());
                up[p] += step;
                um[p] -= step;
                (self.h(&up) - self.h(&um)) / (2.0 * step)
            })
            .collect()
    }

    /// Central differences of `∇h` along `z` at the base point.
    pub fn fd_hess(&self, z: &[f64], step: f64) -> Vec<f64> {
        let up: Vec<f64> = self.u.iter().zip(z).map(|(u, z)| u + step * z).collect();
        let um: Vec<f64> = self.u.iter().zip(z).map(|(u, z)| u - step * z).collect();
        self.grad(&up).iter().zip(self.grad(&um)).map(|(a, b)| (a - b) / (2.0 * step)).collect()
    }
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn rel(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm(&d) / norm(b).max(1e-8)
}
