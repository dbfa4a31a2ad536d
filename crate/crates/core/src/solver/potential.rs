use crate::problem::SdpProblem;
use crate::solver::{DirectionMode, Directions, IterateState, SolverConfig};

/// `φ = (n + γ√n) ln(S • X̄) − ln det X̂ − ln det S` at a state.
pub fn potential(problem: &SdpProblem, state: &IterateState, cfg: &SolverConfig) -> f64 {
    state.potential(cfg.rho(problem.n()))
}

/// Outcome of the step-size search over `(h₁, h₂, k₁, k₂)`.
#[derive(Debug, Clone)]
pub struct StepChoice {
    pub coeffs: [f64; 4],
    pub state: IterateState,
    pub phi: f64,
    /// Gradient steps tried along the path that produced `coeffs` (0 if no start won).
    pub descent_steps: usize,
    /// Gradient steps tried over all starts.
    pub attempted_steps: usize,
    /// Halvings spent pulling starts back inside the feasible region.
    pub halvings: usize,
}

fn mask(mode: DirectionMode) -> [bool; 4] {
    match mode {
        DirectionMode::Four => [true; 4],
        DirectionMode::Two => [true, false, true, false],
    }
}

fn starts(mode: DirectionMode) -> Vec<[f64; 4]> {
    match mode {
        DirectionMode::Four => vec![[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]],
        DirectionMode::Two => vec![[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]],
    }
}

/// The point `(X̄ + h₁ΔX₁ + h₂ΔX₂, S + k₁ΔS₁ + k₂ΔS₂)`, or `None` if it leaves the cone.
pub fn trial_point(problem: &SdpProblem, state: &IterateState, dirs: &Directions, t: [f64; 4]) -> Option<IterateState> {
    let mut x = state.x().values().clone();
    x.axpy(t[0], &dirs.dx1).ok()?;
    x.axpy(t[1], &dirs.dx2).ok()?;
    let mut s = state.s().clone();
    s.axpy(t[2], &dirs.ds1).ok()?;
    s.axpy(t[3], &dirs.ds2).ok()?;
    let y: Vec<f64> =
        state.y().iter().zip(&dirs.dy1).zip(&dirs.dy2).map(|((y, a), b)| y + t[2] * a + t[3] * b).collect();
    IterateState::evaluate(problem, x, s, y).ok()
}

/// `∇φ` with respect to `(h₁, h₂, k₁, k₂)` at a trial state.
pub fn step_gradient(state: &IterateState, dirs: &Directions, rho: f64) -> [f64; 4] {
    [
        state.primal_slope(rho, &dirs.dx1),
        state.primal_slope(rho, &dirs.dx2),
        state.dual_slope(rho, &dirs.ds1),
        state.dual_slope(rho, &dirs.ds2),
    ]
}

/// Steepest descent on `φ` in step coordinates from each unit start among the active
/// directions, moving a unit distance along the normalized negative gradient. A start is
/// halved until it is feasible and lowers `φ`; a descent step is kept only if the new
/// point is feasible and lowers `φ` further. Returns the best terminal point, or the
/// current point if no start improves.
pub fn potential_minimize(
    problem: &SdpProblem,
    state: &IterateState,
    dirs: &Directions,
    cfg: &SolverConfig,
) -> StepChoice {
    let rho = cfg.rho(problem.n());
    let active = mask(cfg.direction_mode);
    let phi0 = state.potential(rho);
    let mut best = StepChoice {
        coeffs: [0.0; 4],
        state: state.clone(),
        phi: phi0,
        descent_steps: 0,
        attempted_steps: 0,
        halvings: 0,
    };
    let (mut attempted, mut halvings) = (0, 0);

    for start in starts(cfg.direction_mode) {
        let mut t = start;
        let mut current = None;
        for _ in 0..=cfg.max_halvings {
            if let Some(s) = trial_point(problem, state, dirs, t) {
                if s.potential(rho) < phi0 {
                    current = Some(s);
                    break;
                }
            }
            t.iter_mut().for_each(|v| *v *= 0.5);
            halvings += 1;
        }
        let Some(mut current) = current else { continue };
        let mut phi = current.potential(rho);
        let mut steps = 0;
        while steps < cfg.potential_descent_max_steps {
            let mut g = step_gradient(&current, dirs, rho);
            for i in 0..4 {
                if !active[i] {
                    g[i] = 0.0;
                }
            }
            let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                break;
            }
            let mut next_t = t;
            for i in 0..4 {
                next_t[i] -= g[i] / norm;
            }
            steps += 1;
            match trial_point(problem, state, dirs, next_t) {
                Some(next) if next.potential(rho) < phi => {
                    phi = next.potential(rho);
                    t = next_t;
                    current = next;
                }
                _ => break,
            }
        }
        attempted += steps;
        if phi < best.phi {
            best = StepChoice { coeffs: t, state: current, phi, descent_steps: steps, attempted_steps: 0, halvings: 0 };
        }
    }
    best.attempted_steps = attempted;
    best.halvings = halvings;
    best
}
