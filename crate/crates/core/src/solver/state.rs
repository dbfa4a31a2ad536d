use std::sync::Arc;

use crate::completion::{completion_inverse_logdet, PartialSymMatrix};
use crate::error::{Error, Result};
use crate::logdet_ad::sparse_inverse;
use crate::problem::SdpProblem;
use crate::sparse::{cholesky_factorize, inner_product, CholeskyFactor, SparseSymMatrix};

/// A strictly feasible primal-dual pair with the factorizations the directions need.
#[derive(Debug, Clone)]
pub struct IterateState {
    x: PartialSymMatrix,
    s: SparseSymMatrix,
    y: Vec<f64>,
    s_factor: CholeskyFactor,
    s_inv: SparseSymMatrix,
    xhat_inv: SparseSymMatrix,
    xhat_inv_factor: CholeskyFactor,
    gap: f64,
    logdet_x: f64,
    logdet_s: f64,
}

impl IterateState {
    /// State at `x` (on the problem's filled pattern) and `S = C − Σ y_p A_p`.
    pub fn new(problem: &SdpProblem, x: PartialSymMatrix, y: Vec<f64>) -> Result<Self> {
        if y.len() != problem.m() {
            return Err(Error::DimensionMismatch { expected: problem.m(), found: y.len() });
        }
        if x.n() != problem.n() {
            return Err(Error::DimensionMismatch { expected: problem.n(), found: x.n() });
        }
        let xv = if Arc::ptr_eq(x.pattern(), problem.filled_pattern()) {
            x.into_values()
        } else {
            x.values().lift_to(problem.filled_pattern())?
        };
        let mut s = problem.c().clone();
        let neg: Vec<f64> = y.iter().map(|v| -v).collect();
        problem.combine_into(&neg, &mut s);
        Self::evaluate(problem, xv, s, y).map_err(|e| Error::InfeasibleStart(e.to_string()))
    }

    /// Builds the state, failing with `InfeasiblePoint` unless `S ≻ 0`, `x` has a
    /// positive definite completion and `S • X̄ > 0`.
    pub(crate) fn evaluate(
        problem: &SdpProblem,
        x: SparseSymMatrix,
        s: SparseSymMatrix,
        y: Vec<f64>,
    ) -> Result<Self> {
        let x = PartialSymMatrix::new_unchecked(x);
        let s_factor = cholesky_factorize(&s).map_err(|_| Error::InfeasiblePoint)?;
        let (xhat_inv, logdet_x) =
            completion_inverse_logdet(&x, problem.cliques()).map_err(|_| Error::InfeasiblePoint)?;
        let gap = inner_product(&s, x.values())?;
        if !(gap > 0.0) || !gap.is_finite() || !logdet_x.is_finite() {
            return Err(Error::InfeasiblePoint);
        }
        let xhat_inv_factor = cholesky_factorize(&xhat_inv).map_err(|_| Error::InfeasiblePoint)?;
        let s_inv = sparse_inverse(&s_factor);
        let logdet_s = s_factor.logdet();
        Ok(Self { x, s, y, s_factor, s_inv, xhat_inv, xhat_inv_factor, gap, logdet_x, logdet_s })
    }

    /// `X̄` on the filled pattern (permuted labels).
    pub fn x(&self) -> &PartialSymMatrix {
        &self.x
    }

    pub fn s(&self) -> &SparseSymMatrix {
        &self.s
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn s_factor(&self) -> &CholeskyFactor {
        &self.s_factor
    }

    /// `S⁻¹` on the filled pattern.
    pub fn s_inv(&self) -> &SparseSymMatrix {
        &self.s_inv
    }

    /// `X̂⁻¹`, exactly sparse on the filled pattern.
    pub fn xhat_inv(&self) -> &SparseSymMatrix {
        &self.xhat_inv
    }

    pub fn xhat_inv_factor(&self) -> &CholeskyFactor {
        &self.xhat_inv_factor
    }

    /// `S • X̄`.
    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn logdet_x(&self) -> f64 {
        self.logdet_x
    }

    pub fn logdet_s(&self) -> f64 {
        self.logdet_s
    }

    /// `ρ ln(S • X̄) − ln det X̂ − ln det S`.
    pub fn potential(&self, rho: f64) -> f64 {
        rho * self.gap.ln() - self.logdet_x - self.logdet_s
    }

    /// `∂φ/∂h` along a primal direction: `ρ/gap · (S • ΔX) − X̂⁻¹ • ΔX`.
    pub(crate) fn primal_slope(&self, rho: f64, dx: &SparseSymMatrix) -> f64 {
        let a = inner_product(&self.s, dx).expect("shared pattern");
        let b = inner_product(&self.xhat_inv, dx).expect("shared pattern");
        rho / self.gap * a - b
    }

    /// `∂φ/∂k` along a dual direction: `ρ/gap · (ΔS • X̄) − S⁻¹ • ΔS`.
    pub(crate) fn dual_slope(&self, rho: f64, ds: &SparseSymMatrix) -> f64 {
        let a = inner_product(ds, self.x.values()).expect("shared pattern");
        let b = inner_product(&self.s_inv, ds).expect("shared pattern");
        rho / self.gap * a - b
    }

    pub fn primal_residual(&self, problem: &SdpProblem) -> f64 {
        problem.primal_residual(self.x.values())
    }

    pub fn dual_residual(&self, problem: &SdpProblem) -> f64 {
        problem.dual_residual(&self.y, &self.s)
    }

    /// `C • X̄`.
    pub fn primal_objective(&self, problem: &SdpProblem) -> f64 {
        inner_product(problem.c(), self.x.values()).expect("shared pattern")
    }

    /// `bᵀy`.
    pub fn dual_objective(&self, problem: &SdpProblem) -> f64 {
        problem.b().iter().zip(&self.y).map(|(b, y)| b * y).sum()
    }
}
