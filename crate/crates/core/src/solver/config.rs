use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which search directions the step-size search may combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DirectionMode {
    /// Primal and dual Newton directions plus their dual/primal counterparts.
    Four,
    /// Only the primal Newton direction and its dual counterpart.
    Two,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Potential weight; `ρ = n + γ√n`. `None` means `γ = √n`.
    pub gamma: Option<f64>,
    pub gap_tol: f64,
    /// Iterations performed after the gap first drops below `gap_tol`.
    pub extra_iters: usize,
    pub cg_rel_tol: f64,
    /// `None` means `m`.
    pub cg_max_iter: Option<usize>,
    pub max_main_iters: usize,
    pub direction_mode: DirectionMode,
    pub potential_descent_max_steps: usize,
    /// Halvings allowed to pull an infeasible starting point back inside the cone.
    pub max_halvings: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            gamma: None,
            gap_tol: 1e-3,
            extra_iters: 3,
            cg_rel_tol: 1e-5,
            cg_max_iter: None,
            max_main_iters: 200,
            direction_mode: DirectionMode::Four,
            potential_descent_max_steps: 20,
            max_halvings: 60,
        }
    }
}

impl SolverConfig {
    pub fn gamma_for(&self, n: usize) -> f64 {
        self.gamma.unwrap_or((n as f64).sqrt())
    }

    pub fn rho(&self, n: usize) -> f64 {
        let rn = (n as f64).sqrt();
        n as f64 + self.gamma_for(n) * rn
    }

    pub fn cg_limit(&self, m: usize) -> usize {
        self.cg_max_iter.unwrap_or(m).max(1)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidConfig(what.into()));
        if let Some(g) = self.gamma {
            if !(g > 0.0 && g.is_finite()) {
                return bad("gamma must be positive");
            }
        }
        if !(self.gap_tol > 0.0) {
            return bad("gap tolerance must be positive");
        }
        if !(self.cg_rel_tol > 0.0) {
            return bad("CG tolerance must be positive");
        }
        Ok(())
    }
}
