use crate::dense::dot;

#[derive(Debug, Clone, PartialEq)]
pub struct CgOutcome {
    pub solution: Vec<f64>,
    pub iterations: usize,
    /// False when the iteration limit was hit before the tolerance; `solution` is then
    /// the last iterate.
    pub converged: bool,
    pub relative_residual: f64,
}

/// Unpreconditioned conjugate gradient from a zero start, stopping once
/// `‖H z − rhs‖₂ ≤ rel_tol · ‖rhs‖₂`.
pub fn conjugate_gradient(
    mut apply: impl FnMut(&[f64]) -> Vec<f64>,
    rhs: &[f64],
    rel_tol: f64,
    max_iter: usize,
) -> CgOutcome {
    let m = rhs.len();
    let mut x = vec![0.0; m];
    let bnorm = dot(rhs, rhs).sqrt();
    if bnorm == 0.0 {
        return CgOutcome { solution: x, iterations: 0, converged: true, relative_residual: 0.0 };
    }
    let target = rel_tol * bnorm;
    let mut r = rhs.to_vec();
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    let mut iterations = 0;
    while iterations < max_iter {
        let hp = apply(&p);
        let php = dot(&p, &hp);
        if !(php > 0.0) {
            break;
        }
        let alpha = rr / php;
        for i in 0..m {
            x[i] += alpha * p[i];
            r[i] -= alpha * hp[i];
        }
        iterations += 1;
        let rr_new = dot(&r, &r);
        if rr_new.sqrt() <= target {
            rr = rr_new;
            break;
        }
        let beta = rr_new / rr;
        rr = rr_new;
        for i in 0..m {
            p[i] = r[i] + beta * p[i];
        }
    }
    let relative_residual = rr.sqrt() / bnorm;
    CgOutcome { solution: x, iterations, converged: relative_residual <= rel_tol, relative_residual }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_in_one_step() {
        let rhs = vec![1.0, -2.0, 3.0];
        let out = conjugate_gradient(|v| v.to_vec(), &rhs, 1e-5, 3);
        assert_eq!(out.iterations, 1);
        assert!(out.converged);
        assert_eq!(out.solution, rhs);
    }

    #[test]
    fn diagonal_system() {
        let d = [1.0, 2.0, 4.0];
        let out = conjugate_gradient(|v| v.iter().zip(d).map(|(a, b)| a * b).collect(), &d, 1e-5, 3);
        for z in &out.solution {
            assert!((z - 1.0).abs() < 1e-5);
        }
    }

    #[test]
    fn zero_rhs() {
        let out = conjugate_gradient(|v| v.to_vec(), &[0.0, 0.0], 1e-5, 2);
        assert_eq!(out.iterations, 0);
        assert_eq!(out.solution, vec![0.0, 0.0]);
    }

    #[test]
    fn stall_is_flagged() {
        let d = [1.0, 10.0, 100.0, 1000.0];
        let out = conjugate_gradient(|v| v.iter().zip(d).map(|(a, b)| a * b).collect(), &[1.0; 4], 1e-12, 1);
        assert!(!out.converged);
        assert_eq!(out.iterations, 1);
    }
}
