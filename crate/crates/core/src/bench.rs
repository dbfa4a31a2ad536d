//! Benchmark drivers behind the `bench-*` commands.
//!
//! Every trial draws its instance from a seed derived from the master seed and the
//! trial index, so trials can run on the worker pool without changing results. Times
//! are wall-clock seconds.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::completion::{logdet_completion_banded, PartialSymMatrix};
use crate::error::{Error, Result};
use crate::maxcut::{initial_point, maxcut_sdp, random_graph};
use crate::solver::{solve, DirectionMode, SolverConfig, SolverReport};
use crate::sparse::{SparseSymMatrix, SparseSymPattern};

/// Seed for trial `t` under master seed `seed`.
pub fn trial_seed(seed: u64, t: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(t);
    rng.next_u64()
}

/// Parses `"5:7,10:16"` into `(n, m)` pairs.
pub fn parse_sizes(s: &str) -> Result<Vec<(usize, usize)>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let bad = || Error::Parse { line: 1, msg: format!("invalid size '{t}', expected n:m") };
            let (n, m) = t.trim().split_once(':').ok_or_else(bad)?;
            Ok((n.trim().parse().map_err(|_| bad())?, m.trim().parse().map_err(|_| bad())?))
        })
        .collect()
}

/// Parses `"lo..hi"` (inclusive) or `"lo..=hi"`.
pub fn parse_range(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parse { line: 1, msg: format!("invalid range '{s}', expected lo..hi") };
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let (lo, hi): (usize, usize) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

#[derive(Debug, Clone)]
pub struct TrialRun {
    pub seed: u64,
    pub time: f64,
    pub report: SolverReport,
}

/// Solves the MAX-CUT relaxation of a random `(n, m)` graph per trial.
pub fn maxcut_trials(n: usize, m: usize, trials: usize, seed: u64, cfg: &SolverConfig) -> Result<Vec<TrialRun>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let s = trial_seed(seed, t);
            let g = random_graph(n, m, s)?;
            let start = Instant::now();
            let problem = maxcut_sdp(&g)?;
            let (x0, y0) = initial_point(&problem)?;
            let report = solve(&problem, x0, y0, cfg)?;
            Ok(TrialRun { seed: s, time: start.elapsed().as_secs_f64(), report })
        })
        .collect()
}

fn mean(v: impl IntoIterator<Item = f64>) -> f64 {
    let (mut s, mut k) = (0.0, 0usize);
    for x in v {
        s += x;
        k += 1;
    }
    if k == 0 {
        f64::NAN
    } else {
        s / k as f64
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub converged: usize,
    pub mean_time: f64,
    pub mean_iters: f64,
    pub mean_cg_primal: f64,
    pub mean_cg_dual: f64,
    pub mean_pot_min: f64,
}

pub fn table1(sizes: &[(usize, usize)], trials: usize, seed: u64, cfg: &SolverConfig) -> Result<Vec<Table1Row>> {
    sizes
        .iter()
        .map(|&(n, m)| {
            let runs = maxcut_trials(n, m, trials, seed, cfg)?;
            Ok(Table1Row {
                n,
                m,
                trials,
                converged: runs.iter().filter(|r| r.report.converged()).count(),
                mean_time: mean(runs.iter().map(|r| r.time)),
                mean_iters: mean(runs.iter().map(|r| r.report.main_iterations() as f64)),
                mean_cg_primal: mean(runs.iter().map(|r| r.report.mean_cg().0)),
                mean_cg_dual: mean(runs.iter().map(|r| r.report.mean_cg().1)),
                mean_pot_min: mean(runs.iter().map(|r| r.report.mean_descent_steps())),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionsRow {
    pub mode: DirectionMode,
    pub n: usize,
    pub m: usize,
    pub mean_time: f64,
    pub mean_iters: f64,
}

/// Four and Two directions on the same instances, one row per mode and size.
pub fn directions(sizes: &[(usize, usize)], trials: usize, seed: u64, cfg: &SolverConfig) -> Result<Vec<DirectionsRow>> {
    let mut rows = Vec::new();
    for &(n, m) in sizes {
        for mode in [DirectionMode::Four, DirectionMode::Two] {
            let cfg = SolverConfig { direction_mode: mode, ..cfg.clone() };
            let runs = maxcut_trials(n, m, trials, seed, &cfg)?;
            rows.push(DirectionsRow {
                mode,
                n,
                m,
                mean_time: mean(runs.iter().map(|r| r.time)),
                mean_iters: mean(runs.iter().map(|r| r.report.main_iterations() as f64)),
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BandedMode {
    /// Bandwidth held fixed while `n` varies.
    FixBandwidth,
    /// `n − p` held fixed while `p` varies.
    FixDiff,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandedRow {
    pub n: usize,
    pub p: usize,
    pub reps: usize,
    pub mean_time: f64,
    pub median_time: f64,
}

/// Diagonally dominant partial matrix on the band pattern of width `p`.
pub fn random_banded_partial(n: usize, p: usize, seed: u64) -> Result<PartialSymMatrix> {
    let pattern = std::sync::Arc::new(SparseSymPattern::banded(n, p));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let off: Vec<f64> = (0..pattern.nnz()).map(|_| rng.random_range(-1.0..1.0)).collect();
    let diag: Vec<f64> = (0..n).map(|_| 2.0 * p as f64 + 1.0 + rng.random::<f64>()).collect();
    PartialSymMatrix::new(SparseSymMatrix::from_parts(pattern, diag, off)?)
}

/// Per-call seconds of `logdet_completion_banded`, one sample per rep. Each sample times
/// a batch of calls long enough to sit well above the clock resolution.
pub fn time_banded(n: usize, p: usize, reps: usize, seed: u64) -> Result<Vec<f64>> {
    let x = random_banded_partial(n, p, seed)?;
    let start = Instant::now();
    let mut batch = 0usize;
    while batch == 0 || (start.elapsed().as_secs_f64() < 2e-4 && batch < 1 << 20) {
        std::hint::black_box(logdet_completion_banded(std::hint::black_box(&x))?);
        batch += 1;
    }
    (0..reps)
        .map(|_| {
            let t = Instant::now();
            for _ in 0..batch {
                std::hint::black_box(logdet_completion_banded(std::hint::black_box(&x))?);
            }
            Ok(t.elapsed().as_secs_f64() / batch as f64)
        })
        .collect()
}

/// Timings across `range`: `n` at bandwidth `fixed` (FixBandwidth) or `p` at
/// `n = p + fixed` (FixDiff). Runs sequentially so timings do not contend.
pub fn banded(mode: BandedMode, range: (usize, usize), fixed: usize, reps: usize, seed: u64) -> Result<Vec<BandedRow>> {
    if reps == 0 {
        return Ok(Vec::new());
    }
    (range.0..=range.1)
        .map(|k| {
            let (n, p) = match mode {
                BandedMode::FixBandwidth => (k, fixed),
                BandedMode::FixDiff => (k + fixed, k),
            };
            let samples = time_banded(n, p, reps, trial_seed(seed, k as u64))?;
            Ok(BandedRow { n, p, reps, mean_time: mean(samples.iter().copied()), median_time: median(samples) })
        })
        .collect()
}

/// Writes rows as CSV with a header, even when `rows` is empty.
pub fn write_csv<T: Serialize, W: Write>(rows: &[T], header: &[&str], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(header).map_err(|e| Error::Io(e.to_string()))?;
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub const TABLE1_HEADER: [&str; 9] =
    ["n", "m", "trials", "converged", "mean_time", "mean_iters", "mean_cg_primal", "mean_cg_dual", "mean_pot_min"];
pub const DIRECTIONS_HEADER: [&str; 5] = ["mode", "n", "m", "mean_time", "mean_iters"];
pub const BANDED_HEADER: [&str; 5] = ["n", "p", "reps", "mean_time", "median_time"];

/// Pearson correlation of `(x, y)` pairs.
pub fn correlation(x: &[f64], y: &[f64]) -> f64 {
    let (mx, my) = (mean(x.iter().copied()), mean(y.iter().copied()));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// Reads rows written by [`write_csv`].
pub fn read_csv<T: for<'de> Deserialize<'de>, R: std::io::Read>(input: R) -> Result<Vec<T>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .enumerate()
        .map(|(k, r)| r.map_err(|e| Error::Parse { line: k + 2, msg: e.to_string() }))
        .collect()
}
