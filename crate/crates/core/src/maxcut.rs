//! MAX-CUT relaxation: graph handling, SDP construction, random instances and
//! hyperplane rounding.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::completion::{completion_factors, completion_vectors, PartialSymMatrix};
use crate::error::{Error, Result};
use crate::problem::SdpProblem;
use crate::solver::{feasible_start, solve, IterateState, SolverConfig, SolverReport};
use crate::sparse::SparseSymMatrix;

/// Simple undirected weighted graph; vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl Graph {
    /// Edges are stored as given with `i < j` normalized. Loops, duplicates, out-of-range
    /// indices and non-finite weights are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (k, (i, j, w)) in edges.into_iter().enumerate() {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange(i, j));
            }
            if i == j || !w.is_finite() {
                return Err(Error::Parse { line: k + 1, msg: format!("bad edge ({i}, {j}, {w})") });
            }
            let e = (i.min(j), i.max(j));
            if !seen.insert(e) {
                return Err(Error::Parse { line: k + 1, msg: format!("duplicate edge ({i}, {j})") });
            }
            out.push((e.0, e.1, w));
        }
        Ok(Self { n, edges: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    /// Reads `n m` followed by `m` lines `i j [w]`, 1-based.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
        let head: Vec<&str> = header.split_whitespace().collect();
        let parse_usize = |s: &str, line: usize| {
            s.parse::<usize>().map_err(|_| Error::Parse { line, msg: format!("expected an integer, found {s:?}") })
        };
        if head.len() != 2 {
            return Err(Error::Parse { line: hl, msg: "header must be \"n m\"".into() });
        }
        let (n, m) = (parse_usize(head[0], hl)?, parse_usize(head[1], hl)?);
        let mut edges = Vec::with_capacity(m);
        for (line, l) in lines {
            let tok: Vec<&str> = l.split_whitespace().collect();
            if !(2..=3).contains(&tok.len()) {
                return Err(Error::Parse { line, msg: "expected \"i j [w]\"".into() });
            }
            let (i, j) = (parse_usize(tok[0], line)?, parse_usize(tok[1], line)?);
            if i == 0 || j == 0 || i > n || j > n {
                return Err(Error::Parse { line, msg: format!("vertex out of range 1..={n}") });
            }
            let w = match tok.get(2) {
                Some(s) => s.parse::<f64>().map_err(|_| Error::Parse { line, msg: format!("bad weight {s:?}") })?,
                None => 1.0,
            };
            if i == j || !w.is_finite() {
                return Err(Error::Parse { line, msg: "loops and non-finite weights are not allowed".into() });
            }
            edges.push((i - 1, j - 1, w, line));
        }
        if edges.len() != m {
            return Err(Error::Parse { line: hl, msg: format!("header announces {m} edges, found {}", edges.len()) });
        }
        let mut seen = BTreeSet::new();
        for &(i, j, _, line) in &edges {
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(Error::Parse { line, msg: "duplicate edge".into() });
            }
        }
        Self::new(n, edges.into_iter().map(|(i, j, w, _)| (i, j, w)))
    }

    /// Inverse of [`parse`](Self::parse).
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.edges.len());
        for &(i, j, w) in &self.edges {
            if w == 1.0 {
                let _ = writeln!(s, "{} {}", i + 1, j + 1);
            } else {
                let _ = writeln!(s, "{} {} {}", i + 1, j + 1, w);
            }
        }
        s
    }
}

/// Result of rounding a relaxation to a cut.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutResult {
    pub sides: Vec<bool>,
    pub cut_value: f64,
    pub sdp_bound: f64,
    pub trials: usize,
}

/// `minimize C • X` with `C = −L/4` (`L` the weighted Laplacian), `X_pp = 1`.
/// The max-form relaxation value is `−C • X`.
pub fn maxcut_sdp(g: &Graph) -> Result<SdpProblem> {
    let n = g.n();
    let mut trip = Vec::with_capacity(g.edges().len() + n);
    let mut deg = vec![0.0; n];
    for &(i, j, w) in g.edges() {
        trip.push((i, j, w / 4.0));
        deg[i] += w;
        deg[j] += w;
    }
    trip.extend(deg.iter().enumerate().map(|(i, d)| (i, i, -d / 4.0)));
    let c = SparseSymMatrix::from_triplets(n, &trip)?;
    let a = (0..n).map(|p| SparseSymMatrix::from_triplets(n, &[(p, p, 1.0)])).collect::<Result<Vec<_>>>()?;
    SdpProblem::new(c, a, vec![1.0; n])
}

/// `X̄₀ = I` on the filled pattern and `y₀ = 1`, shifted down until `C − Diag(y₀) ≻ 0`.
pub fn initial_point(problem: &SdpProblem) -> Result<(PartialSymMatrix, Vec<f64>)> {
    feasible_start(problem)
}

/// Uniformly random simple graph with exactly `m` unit-weight edges.
pub fn random_graph(n: usize, m: usize, seed: u64) -> Result<Graph> {
    let max = n * n.saturating_sub(1) / 2;
    if m > max {
        return Err(Error::TooManyEdges { n, requested: m, max });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set = BTreeSet::new();
    while set.len() < m {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if i != j {
            set.insert((i.min(j), i.max(j)));
        }
    }
    Graph::new(n, set.into_iter().map(|(i, j)| (i, j, 1.0)))
}

pub fn cut_value(g: &Graph, sides: &[bool]) -> f64 {
    g.edges().iter().filter(|&&(i, j, _)| sides[i] != sides[j]).map(|e| e.2).sum()
}

/// Best of `trials` random-hyperplane cuts. `v` is row-major `d × n` with column `i`
/// the vector of vertex `i`. Trial `t` draws its normal from its own stream of the
/// seeded generator, so results do not depend on scheduling. Ties keep the earliest trial.
pub fn hyperplane_rounding(v: &[f64], g: &Graph, trials: usize, seed: u64) -> CutResult {
    let n = g.n();
    let d = v.len().checked_div(n).unwrap_or(0);
    let best = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let r: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
            let sides: Vec<bool> = (0..n).map(|i| (0..d).map(|k| v[k * n + i] * r[k]).sum::<f64>() >= 0.0).collect();
            (cut_value(g, &sides), t, sides)
        })
        .reduce_with(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    match best {
        Some((cut_value, _, sides)) => CutResult { sides, cut_value, sdp_bound: f64::NAN, trials },
        None => CutResult { sides: vec![false; n], cut_value: 0.0, sdp_bound: f64::NAN, trials },
    }
}

/// Vectors (row-major `n × n`, column per original vertex) whose Gram matrix is the
/// maximum-determinant completion of the state's primal matrix.
pub fn relaxation_vectors(problem: &SdpProblem, state: &IterateState) -> Result<Vec<f64>> {
    let n = problem.n();
    let factors = completion_factors(state.x(), problem.cliques())?;
    let vp = completion_vectors(&factors);
    let perm = problem.ordering().perm();
    let mut v = vec![0.0; n * n];
    for k in 0..n {
        for i in 0..n {
            v[k * n + i] = vp[k * n + perm[i]];
        }
    }
    Ok(v)
}

#[derive(Debug, Clone)]
pub struct MaxCutOutcome {
    pub problem: SdpProblem,
    pub report: SolverReport,
    pub cut: CutResult,
}

/// Relaxation, solve from the standard starting point, then rounding.
pub fn solve_maxcut(g: &Graph, cfg: &SolverConfig, trials: usize, seed: u64) -> Result<MaxCutOutcome> {
    let problem = maxcut_sdp(g)?;
    let (x0, y0) = initial_point(&problem)?;
    let report = solve(&problem, x0, y0, cfg)?;
    let v = relaxation_vectors(&problem, &report.final_state)?;
    let mut cut = hyperplane_rounding(&v, g, trials, seed);
    cut.sdp_bound = -report.dual_objective;
    Ok(MaxCutOutcome { problem, report, cut })
}
