mod common;

use std::sync::Arc;

use common::*;
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use sparse_sdp::chordal::{clique_sequence, CliqueSequence};
use sparse_sdp::completion::{
    clique_pd_check, completion_factors, completion_hess_apply, completion_inverse, completion_vectors,
    logdet_completion, logdet_completion_banded, PartialSymMatrix,
};
use sparse_sdp::error::Error;
use sparse_sdp::sparse::{inner_product, SparseSymMatrix, SparseSymPattern};

struct Case {
    pattern: Arc<SparseSymPattern>,
    cs: CliqueSequence,
    x: PartialSymMatrix,
    y: DMatrix<f64>,
}

fn random_case(r: &mut ChaCha8Rng, max_n: usize) -> Case {
    let n = r.random_range(2..=max_n);
    let pattern = random_chordal_pattern(r, n);
    let cs = clique_sequence(&pattern).unwrap();
    let y = random_dense_pd(r, n);
    let x = restrict(&y, &pattern);
    Case { pattern, cs, x, y }
}

fn completed(c: &Case) -> DMatrix<f64> {
    let n = c.pattern.n();
    from_rows(n, &completion_factors(&c.x, &c.cs).unwrap().reconstruct_dense())
}

fn tridiagonal() -> PartialSymMatrix {
    let pattern = Arc::new(SparseSymPattern::banded(3, 1));
    PartialSymMatrix::new(SparseSymMatrix::from_parts(pattern, vec![2.0; 3], vec![1.0; 2]).unwrap()).unwrap()
}

#[test]
fn tridiagonal_example() {
    let x = tridiagonal();
    let cs = clique_sequence(x.pattern()).unwrap();
    assert!(clique_pd_check(&x, &cs));
    let ld = logdet_completion(&x, &cs).unwrap();
    assert!((ld - (2.0 * 3f64.ln() - 2f64.ln())).abs() <= 1e-12);
    assert!((ld - 4.5f64.ln()).abs() <= 1e-12);
    let xh = from_rows(3, &completion_factors(&x, &cs).unwrap().reconstruct_dense());
    assert!((xh[(0, 2)] - 0.5).abs() < 1e-14);
    let w = completion_inverse(&x, &cs).unwrap();
    let reference = spd_inverse(&xh);
    assert!(reference[(0, 2)].abs() < 1e-14);
    assert!(max_diff_on(x.pattern(), &dense(&w), &reference) < 1e-14);
    assert!((logdet_completion_banded(&x).unwrap() - ld).abs() < 1e-12);
}

#[test]
fn banded_examples() {
    let pattern = Arc::new(SparseSymPattern::banded(4, 1));
    let x = PartialSymMatrix::new(SparseSymMatrix::from_parts(pattern, vec![2.0; 4], vec![1.0; 3]).unwrap()).unwrap();
    // Cliques {i, i+1} have determinant 3 and separators {i} have 2; the zero-filled
    // tridiagonal matrix (determinant 5) is not the maximizer.
    let ld = logdet_completion_banded(&x).unwrap();
    assert!((ld - 6.75f64.ln()).abs() < 1e-12);
    assert!(ld > 5f64.ln());

    let pattern = Arc::new(SparseSymPattern::banded(3, 1));
    let bad = PartialSymMatrix::new(SparseSymMatrix::from_parts(pattern, vec![2.0; 3], vec![3.0, 1.0]).unwrap()).unwrap();
    let cs = clique_sequence(bad.pattern()).unwrap();
    assert!(!clique_pd_check(&bad, &cs));
    assert!(matches!(logdet_completion(&bad, &cs), Err(Error::NotCompletable(_))));
    assert!(matches!(logdet_completion_banded(&bad), Err(Error::NotCompletable(_))));
}

#[test]
fn reconstruction_is_the_max_det_completion() {
    let mut r = rng(41);
    for _ in 0..100 {
        let c = random_case(&mut r, 15);
        let n = c.pattern.n();
        let xh = completed(&c);

        assert!(max_diff_on(&c.pattern, &xh, &c.y) <= 1e-12 * c.y.abs().max().max(1.0));
        let inv = spd_inverse(&xh);
        for (i, j) in free_pairs(n, |i, j| c.pattern.contains(i, j)) {
            assert!(inv[(i, j)].abs() <= 1e-10, "inverse entry ({i},{j}) = {:e}", inv[(i, j)]);
        }

        let ld = logdet_completion(&c.x, &c.cs).unwrap();
        assert!((ld - logdet(&xh).unwrap()).abs() <= 1e-9);

        let oracle = max_det_completion(&c.y, &free_pairs(n, |i, j| c.pattern.contains(i, j)));
        assert!((&oracle - &xh).abs().max() <= 1e-8);
    }
}

#[test]
fn determinant_beats_random_completions() {
    let mut r = rng(42);
    for _ in 0..100 {
        let c = random_case(&mut r, 15);
        let n = c.pattern.n();
        let xh = completed(&c);
        let best = logdet(&xh).unwrap();
        let free = free_pairs(n, |i, j| c.pattern.contains(i, j));
        assert!(logdet(&c.y).unwrap() <= best + 1e-12);
        if free.is_empty() {
            continue;
        }
        for _ in 0..1000 {
            let mut t: f64 = r.random_range(0.01..1.0);
            let e: Vec<f64> = free.iter().map(|_| r.random_range(-1.0..1.0)).collect();
            loop {
                let mut cand = xh.clone();
                for (&(i, j), v) in free.iter().zip(&e) {
                    cand[(i, j)] += t * v;
                    cand[(j, i)] += t * v;
                }
                if let Some(ld) = logdet(&cand) {
                    assert!(ld < best + 1e-12, "random completion {ld} beats {best}");
                    break;
                }
                t *= 0.5;
            }
        }
    }
}

#[test]
fn logdet_gradient_is_the_completion_inverse() {
    let mut r = rng(43);
    let step = 1e-6;
    for _ in 0..50 {
        let c = random_case(&mut r, 12);
        let z = random_sym_on(&mut r, &c.pattern, 0.6);
        let w = completion_inverse(&c.x, &c.cs).unwrap();
        let analytic = inner_product(&w, &z).unwrap();
        let shifted = |t: f64| {
            let mut v = c.x.values().clone();
            v.axpy(t, &z).unwrap();
            logdet_completion(&PartialSymMatrix::new(v).unwrap(), &c.cs).unwrap()
        };
        let fd = (shifted(step) - shifted(-step)) / (2.0 * step);
        assert!((analytic - fd).abs() <= 1e-4 * analytic.abs().max(1.0), "{analytic} vs {fd}");
    }
}

#[test]
fn hess_apply_matches_dense_and_is_symmetric() {
    let mut r = rng(44);
    for _ in 0..50 {
        let c = random_case(&mut r, 15);
        let xh = completed(&c);
        let z1 = random_sym_on(&mut r, &c.pattern, 0.5);
        let z2 = random_sym_on(&mut r, &c.pattern, 0.5);
        let h1 = completion_hess_apply(&c.x, &c.cs, &z1).unwrap();
        let h2 = completion_hess_apply(&c.x, &c.cs, &z2).unwrap();
        let reference = &xh * dense(&z1) * &xh;
        assert!(max_diff_on(&c.pattern, &dense(&h1), &reference) <= 1e-9 * reference.abs().max().max(1.0));
        let (a, b) = (inner_product(&z1, &h2).unwrap(), inner_product(&z2, &h1).unwrap());
        assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
    }
}

#[test]
fn vectors_have_the_completion_as_gram_matrix() {
    let mut r = rng(45);
    for _ in 0..50 {
        let c = random_case(&mut r, 15);
        let n = c.pattern.n();
        let v = from_rows(n, &completion_vectors(&completion_factors(&c.x, &c.cs).unwrap()));
        let gram = v.transpose() * &v;
        assert!((gram - completed(&c)).abs().max() <= 1e-10 * c.y.abs().max().max(1.0));
    }
    let x = tridiagonal();
    let cs = clique_sequence(x.pattern()).unwrap();
    let v = from_rows(3, &completion_vectors(&completion_factors(&x, &cs).unwrap()));
    let expect = from_rows(3, &[2.0, 1.0, 0.5, 1.0, 2.0, 1.0, 0.5, 1.0, 2.0]);
    assert!((v.transpose() * &v - expect).abs().max() <= 1e-10);
}

#[test]
fn banded_path_matches_general_path() {
    let mut r = rng(46);
    for _ in 0..40 {
        let n = r.random_range(2..=120);
        let p = r.random_range(1..=n.min(12));
        let pattern = Arc::new(SparseSymPattern::banded(n, p));
        let y = random_dense_pd(&mut r, n);
        let x = restrict(&y, &pattern);
        let cs = clique_sequence(&pattern).unwrap();
        let general = logdet_completion(&x, &cs).unwrap();
        let banded = logdet_completion_banded(&x).unwrap();
        assert!((general - banded).abs() <= 1e-9 * general.abs().max(1.0), "n={n} p={p}");
    }
}
