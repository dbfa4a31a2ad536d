//! Primal-dual potential reduction over partial primal matrices.
//!
//! Each main iteration builds four directions at the current iterate
//! ([`compute_directions`]), searches step sizes that lower the potential
//! ([`potential_minimize`]) and moves there. The loop stops `extra_iters` iterations
//! after the duality gap first drops below `gap_tol`.

mod cg;
mod config;
mod directions;
mod potential;
mod report;
mod state;

pub use cg::{conjugate_gradient, CgOutcome};
pub use config::{DirectionMode, SolverConfig};
pub use directions::{compute_directions, dual_direction, primal_direction, Directions, DualDirection, PrimalDirection};
pub use potential::{potential, potential_minimize, step_gradient, trial_point, StepChoice};
pub use report::{
    read_iterations_csv, write_iterations_csv, IterationRecord, IterationRow, SolveStatus, SolverReport,
    SolverSummary,
};
pub use state::IterateState;

use crate::completion::{clique_pd_check, PartialSymMatrix};
use crate::error::{Error, Result};
use crate::problem::SdpProblem;
use crate::sparse::{cholesky_factorize, SparseSymMatrix};

/// Decrease below which a step is treated as no progress.
const MIN_DECREASE: f64 = 1e-12;

/// Strictly feasible starting point built from the identity.
///
/// `X̄₀` is the least-norm solution of `A(X) = b` plus the largest-needed multiple of the
/// identity's null-space component (just `I` when `A(I) = b`). `y₀` starts at the
/// coefficients `a` of the identity in span{A_p} (so `S = C − I` when `Σ a_p A_p = I`)
/// and is shifted along `−a` by the Gershgorin deficit of `C − Σ a_p A_p` plus one,
/// doubling the shift until `S ≻ 0`.
pub fn feasible_start(problem: &SdpProblem) -> Result<(PartialSymMatrix, Vec<f64>)> {
    let f = problem.filled_pattern().clone();
    let eye = SparseSymMatrix::identity(f.clone());

    let mut mu = problem.b().to_vec();
    problem.gram_solve(&mut mu);
    let x_ls = problem.combine(&mu);
    let mut null_part = eye.clone();
    problem.project_null(&mut null_part);
    let mut x0 = None;
    let mut t = 1.0;
    for _ in 0..60 {
        let mut cand = x_ls.clone();
        cand.axpy(t, &null_part)?;
        let partial = PartialSymMatrix::new_unchecked(cand);
        if clique_pd_check(&partial, problem.cliques()) {
            x0 = Some(partial);
            break;
        }
        t *= 2.0;
    }
    let x0 = x0.ok_or_else(|| Error::InfeasibleStart("no positive definite primal point found".into()))?;

    let mut a = problem.apply_a(&eye);
    problem.gram_solve(&mut a);
    let s_of = |shift: f64| {
        let mut s = problem.c().clone();
        let coef: Vec<f64> = a.iter().map(|v| -(1.0 - shift) * v).collect();
        problem.combine_into(&coef, &mut s);
        s
    };
    let y_of = |shift: f64| a.iter().map(|v| (1.0 - shift) * v).collect::<Vec<f64>>();
    if cholesky_factorize(&s_of(0.0)).is_ok() {
        return Ok((x0, y_of(0.0)));
    }
    let mut shift = s_of(0.0).gershgorin_lower_bound().abs() + 1.0;
    for _ in 0..60 {
        if cholesky_factorize(&s_of(shift)).is_ok() {
            return Ok((x0, y_of(shift)));
        }
        shift *= 2.0;
    }
    Err(Error::InfeasibleStart("no positive definite dual slack found".into()))
}

pub fn solve(problem: &SdpProblem, x0: PartialSymMatrix, y0: Vec<f64>, cfg: &SolverConfig) -> Result<SolverReport> {
    solve_with_observer(problem, x0, y0, cfg, |_, _| {})
}

/// As [`solve`], calling `observer` after the starting point and after every iteration.
pub fn solve_with_observer(
    problem: &SdpProblem,
    x0: PartialSymMatrix,
    y0: Vec<f64>,
    cfg: &SolverConfig,
    mut observer: impl FnMut(&IterationRecord, &IterateState),
) -> Result<SolverReport> {
    cfg.validate()?;
    let rho = cfg.rho(problem.n());
    let mut state = IterateState::new(problem, x0, y0)?;
    let mut records = vec![IterationRecord {
        iter: 0,
        gap: state.gap(),
        phi: state.potential(rho),
        cg_primal: 0,
        cg_dual: 0,
        descent_steps: 0,
        attempted_steps: 0,
        step: [0.0; 4],
        lam: 0.0,
        lam_tilde: 0.0,
        cg_converged: true,
        primal_residual: state.primal_residual(problem),
        dual_residual: state.dual_residual(problem),
    }];
    observer(&records[0], &state);

    let mut extra_left: Option<usize> = None;
    let status = loop {
        if extra_left.is_none() && state.gap() <= cfg.gap_tol {
            extra_left = Some(cfg.extra_iters);
        }
        if extra_left == Some(0) {
            break SolveStatus::Converged;
        }
        let iter = records.len();
        if iter > cfg.max_main_iters {
            break SolveStatus::IterationLimit;
        }
        let dirs = compute_directions(problem, &state, cfg)?;
        let phi_old = state.potential(rho);
        let choice = potential_minimize(problem, &state, &dirs, cfg);
        if !(choice.phi < phi_old - MIN_DECREASE * phi_old.abs().max(1.0)) {
            break if extra_left.is_some() { SolveStatus::Converged } else { SolveStatus::Stalled };
        }
        state = choice.state;
        let record = IterationRecord {
            iter,
            gap: state.gap(),
            phi: choice.phi,
            cg_primal: dirs.cg_primal,
            cg_dual: dirs.cg_dual,
            descent_steps: choice.descent_steps,
            attempted_steps: choice.attempted_steps,
            step: choice.coeffs,
            lam: dirs.lam,
            lam_tilde: dirs.lam_tilde,
            cg_converged: dirs.cg_converged,
            primal_residual: state.primal_residual(problem),
            dual_residual: state.dual_residual(problem),
        };
        observer(&record, &state);
        records.push(record);
        if let Some(e) = extra_left.as_mut() {
            *e -= 1;
        }
    };

    Ok(SolverReport {
        status,
        primal_objective: state.primal_objective(problem),
        dual_objective: state.dual_objective(problem),
        gap: state.gap(),
        direction_mode: cfg.direction_mode,
        gamma: cfg.gamma_for(problem.n()),
        rho,
        records,
        final_state: state,
    })
}
