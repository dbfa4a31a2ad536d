use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::{DirectionMode, IterateState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    /// The gap reached the tolerance and the extra iterations ran.
    Converged,
    /// `max_main_iters` ran out first.
    IterationLimit,
    /// The step search found no decrease while the gap was still above tolerance.
    Stalled,
}

/// One main iteration (row 0 is the starting point).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iter: usize,
    pub gap: f64,
    pub phi: f64,
    pub cg_primal: usize,
    pub cg_dual: usize,
    pub descent_steps: usize,
    pub attempted_steps: usize,
    pub step: [f64; 4],
    pub lam: f64,
    pub lam_tilde: f64,
    pub cg_converged: bool,
    pub primal_residual: f64,
    pub dual_residual: f64,
}

/// The per-iteration CSV columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRow {
    pub iter: usize,
    pub gap: f64,
    pub phi: f64,
    pub cg_primal: usize,
    pub cg_dual: usize,
    pub descent_steps: usize,
}

impl From<&IterationRecord> for IterationRow {
    fn from(r: &IterationRecord) -> Self {
        Self {
            iter: r.iter,
            gap: r.gap,
            phi: r.phi,
            cg_primal: r.cg_primal,
            cg_dual: r.cg_dual,
            descent_steps: r.descent_steps,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolverReport {
    pub status: SolveStatus,
    pub records: Vec<IterationRecord>,
    /// `C • X̄`.
    pub primal_objective: f64,
    /// `bᵀy`.
    pub dual_objective: f64,
    pub gap: f64,
    pub direction_mode: DirectionMode,
    pub gamma: f64,
    pub rho: f64,
    pub final_state: IterateState,
}

/// Serializable digest of a [`SolverReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverSummary {
    pub status: SolveStatus,
    pub n: usize,
    pub m: usize,
    pub main_iterations: usize,
    pub gap: f64,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub direction_mode: DirectionMode,
    pub gamma: f64,
    pub rho: f64,
    pub total_cg_primal: usize,
    pub total_cg_dual: usize,
    pub mean_descent_steps: f64,
    pub max_primal_residual: f64,
    pub max_dual_residual: f64,
}

impl SolverReport {
    /// Main iterations performed (records minus the starting row).
    pub fn main_iterations(&self) -> usize {
        self.records.len().saturating_sub(1)
    }

    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }

    pub fn mean_descent_steps(&self) -> f64 {
        let it = &self.records[1.min(self.records.len())..];
        if it.is_empty() {
            0.0
        } else {
            it.iter().map(|r| r.descent_steps as f64).sum::<f64>() / it.len() as f64
        }
    }

    pub fn mean_cg(&self) -> (f64, f64) {
        let it = &self.records[1.min(self.records.len())..];
        if it.is_empty() {
            return (0.0, 0.0);
        }
        let k = it.len() as f64;
        (
            it.iter().map(|r| r.cg_primal as f64).sum::<f64>() / k,
            it.iter().map(|r| r.cg_dual as f64).sum::<f64>() / k,
        )
    }

    /// True iff `φ` dropped strictly at every main iteration.
    pub fn potential_strictly_decreasing(&self) -> bool {
        self.records.windows(2).all(|w| w[1].phi < w[0].phi)
    }

    pub fn summary(&self, n: usize, m: usize) -> SolverSummary {
        let fold = |f: fn(&IterationRecord) -> f64| self.records.iter().map(f).fold(0.0, f64::max);
        SolverSummary {
            status: self.status,
            n,
            m,
            main_iterations: self.main_iterations(),
            gap: self.gap,
            primal_objective: self.primal_objective,
            dual_objective: self.dual_objective,
            direction_mode: self.direction_mode,
            gamma: self.gamma,
            rho: self.rho,
            total_cg_primal: self.records.iter().map(|r| r.cg_primal).sum(),
            total_cg_dual: self.records.iter().map(|r| r.cg_dual).sum(),
            mean_descent_steps: self.mean_descent_steps(),
            max_primal_residual: fold(|r| r.primal_residual),
            max_dual_residual: fold(|r| r.dual_residual),
        }
    }

    pub fn write_iterations_csv<W: Write>(&self, out: W) -> Result<()> {
        write_iterations_csv(&self.records, out)
    }
}

pub fn write_iterations_csv<W: Write>(records: &[IterationRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(IterationRow::from(r)).map_err(|e| Error::Io(e.to_string()))?;
    }
    if records.is_empty() {
        w.write_record(["iter", "gap", "phi", "cg_primal", "cg_dual", "descent_steps"])
            .map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_iterations_csv<R: Read>(input: R) -> Result<Vec<IterationRow>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize()
        .enumerate()
        .map(|(k, row)| row.map_err(|e| Error::Parse { line: k + 2, msg: e.to_string() }))
        .collect()
}
