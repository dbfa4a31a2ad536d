//! Primal and dual projected Newton directions and their counterparts.
//!
//! With `ρ = n + γ√n` and `gap = S • X̄`:
//!
//! * primal: `M = (ρ/gap) S`, `N = X̂ − X̂MX̂ + Σ λ_p X̂A_pX̂` with `λ` chosen so that
//!   `A(N) = 0`; `ΔX₁ = N/(1+‖N‖)` and the dual estimate it implies gives
//!   `ΔS₁ = −(gap/ρ) Σ λ_p A_p`.
//! * dual: `z` solves the Newton system of `(ρ/gap) S • X̄ − ln det S` over
//!   `S = C − Σ y_p A_p`; `Ñ = Σ z_p A_p`, `ΔS₂ = Ñ/(1+‖Ñ‖)` and the primal estimate gives
//!   `ΔX₂ = (gap/ρ)(S⁻¹ − S⁻¹ÑS⁻¹)|_F − X̄`.
//!
//! Norms are the local ones, `‖N‖² = N • X̂⁻¹NX̂⁻¹` and `‖Ñ‖² = Ñ • S⁻¹ÑS⁻¹`. Primal
//! directions are finally projected onto `{A(·) = 0}` so inexact CG solves do not leak
//! into primal feasibility.

use crate::error::Result;
use crate::logdet_ad::hess_vec_with;
use crate::problem::SdpProblem;
use crate::solver::cg::conjugate_gradient;
use crate::solver::{IterateState, SolverConfig};
use crate::sparse::{inner_product, SparseSymMatrix};

#[derive(Debug, Clone)]
pub struct PrimalDirection {
    pub dx: SparseSymMatrix,
    pub ds: SparseSymMatrix,
    pub dy: Vec<f64>,
    pub lambda_mult: Vec<f64>,
    pub lam: f64,
    pub cg_iterations: usize,
    pub cg_converged: bool,
}

#[derive(Debug, Clone)]
pub struct DualDirection {
    pub dx: SparseSymMatrix,
    pub ds: SparseSymMatrix,
    pub dy: Vec<f64>,
    pub z: Vec<f64>,
    pub lam_tilde: f64,
    pub cg_iterations: usize,
    pub cg_converged: bool,
}

/// All four directions at one iterate.
#[derive(Debug, Clone)]
pub struct Directions {
    pub dx1: SparseSymMatrix,
    pub dx2: SparseSymMatrix,
    pub ds1: SparseSymMatrix,
    pub ds2: SparseSymMatrix,
    pub dy1: Vec<f64>,
    pub dy2: Vec<f64>,
    pub z: Vec<f64>,
    pub lambda_mult: Vec<f64>,
    pub lam: f64,
    pub lam_tilde: f64,
    pub cg_primal: usize,
    pub cg_dual: usize,
    pub cg_converged: bool,
}

impl Directions {
    pub fn new(primal: PrimalDirection, dual: DualDirection) -> Self {
        Self {
            dx1: primal.dx,
            dx2: dual.dx,
            ds1: primal.ds,
            ds2: dual.ds,
            dy1: primal.dy,
            dy2: dual.dy,
            z: dual.z,
            lambda_mult: primal.lambda_mult,
            lam: primal.lam,
            lam_tilde: dual.lam_tilde,
            cg_primal: primal.cg_iterations,
            cg_dual: dual.cg_iterations,
            cg_converged: primal.cg_converged && dual.cg_converged,
        }
    }
}

pub fn compute_directions(problem: &SdpProblem, state: &IterateState, cfg: &SolverConfig) -> Result<Directions> {
    Ok(Directions::new(primal_direction(problem, state, cfg)?, dual_direction(problem, state, cfg)?))
}

pub fn primal_direction(problem: &SdpProblem, state: &IterateState, cfg: &SolverConfig) -> Result<PrimalDirection> {
    let rho = cfg.rho(problem.n());
    let gap = state.gap();
    let lw = state.xhat_inv_factor();
    let xbar = state.x().values();
    let xhat_times = |z: &SparseSymMatrix| hess_vec_with(lw, xbar, z);

    let m_mat = state.s().scaled(rho / gap);
    let xmx = xhat_times(&m_mat)?;
    let rhs: Vec<f64> = problem.apply_a(&xmx).iter().zip(problem.b()).map(|(a, b)| a - b).collect();
    let cg = conjugate_gradient(
        |v| problem.apply_a(&xhat_times(&problem.combine(v)).expect("filled pattern")),
        &rhs,
        cfg.cg_rel_tol,
        cfg.cg_limit(problem.m()),
    );
    let lambda = cg.solution;
    let sum_la = problem.combine(&lambda);

    let mut n_mat = xbar.clone();
    n_mat.axpy(-1.0, &xmx)?;
    n_mat.axpy(1.0, &xhat_times(&sum_la)?)?;
    problem.project_null(&mut n_mat);

    // G = X̂⁻¹ N X̂⁻¹ = X̂⁻¹ − M + Σ λ_p A_p, all on the filled pattern
    let mut g = state.xhat_inv().clone();
    g.axpy(-1.0, &m_mat)?;
    g.axpy(1.0, &sum_la)?;
    let lam = inner_product(&g, &n_mat)?.max(0.0).sqrt();

    let dx = n_mat.scaled(1.0 / (1.0 + lam));
    let dy: Vec<f64> = lambda.iter().map(|l| gap / rho * l).collect();
    let ds = problem.combine(&dy).scaled(-1.0);
    Ok(PrimalDirection {
        dx,
        ds,
        dy,
        lambda_mult: lambda,
        lam,
        cg_iterations: cg.iterations,
        cg_converged: cg.converged,
    })
}

pub fn dual_direction(problem: &SdpProblem, state: &IterateState, cfg: &SolverConfig) -> Result<DualDirection> {
    let rho = cfg.rho(problem.n());
    let gap = state.gap();
    let (ls, s_inv) = (state.s_factor(), state.s_inv());
    let sinv_times = |z: &SparseSymMatrix| hess_vec_with(ls, s_inv, z);

    let ax = problem.apply_a(state.x().values());
    let rhs: Vec<f64> = problem.apply_a(s_inv).iter().zip(&ax).map(|(a, x)| a - rho / gap * x).collect();
    let cg = conjugate_gradient(
        |v| problem.apply_a(&sinv_times(&problem.combine(v)).expect("filled pattern")),
        &rhs,
        cfg.cg_rel_tol,
        cfg.cg_limit(problem.m()),
    );
    let z = cg.solution;
    let n_tilde = problem.combine(&z);
    let t = sinv_times(&n_tilde)?;
    let lam_tilde = inner_product(&t, &n_tilde)?.max(0.0).sqrt();

    let ds = n_tilde.scaled(1.0 / (1.0 + lam_tilde));
    let dy: Vec<f64> = z.iter().map(|v| -v / (1.0 + lam_tilde)).collect();
    let mut dx = s_inv.clone();
    dx.axpy(-1.0, &t)?;
    dx.scale(gap / rho);
    dx.axpy(-1.0, state.x().values())?;
    problem.project_null(&mut dx);
    Ok(DualDirection { dx, ds, dy, z, lam_tilde, cg_iterations: cg.iterations, cg_converged: cg.converged })
}
