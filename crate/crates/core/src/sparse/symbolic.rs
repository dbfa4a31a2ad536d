use crate::sparse::{EliminationOrdering, SparseSymPattern};

/// Filled pattern of the Cholesky factor of `pattern` under `ord`, in the new labels.
///
/// Column `j`'s structure is its own higher neighbours merged with the structures of its
/// elimination-tree children (minus `j`). The result is chordal with `0..n` a perfect
/// elimination ordering.
pub fn symbolic_factorize(pattern: &SparseSymPattern, ord: &EliminationOrdering) -> SparseSymPattern {
    let permuted = pattern.permute(ord);
    fill_in_place_order(&permuted)
}

/// Symbolic factorization without reordering.
pub fn fill_in_place_order(pattern: &SparseSymPattern) -> SparseSymPattern {
    let n = pattern.n();
    let mut cols: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut mark = vec![usize::MAX; n];

    for j in 0..n {
        let mut s: Vec<usize> = pattern.col(j).to_vec();
        for &i in &s {
            mark[i] = j;
        }
        for &c in &children[j] {
            for &i in &cols[c] {
                if i != j && mark[i] != j {
                    mark[i] = j;
                    s.push(i);
                }
            }
        }
        s.sort_unstable();
        if let Some(&parent) = s.first() {
            children[parent].push(j);
        }
        cols.push(s);
    }
    SparseSymPattern::from_columns(cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity_fill(n: usize, edges: &[(usize, usize)]) -> SparseSymPattern {
        let p = SparseSymPattern::from_edges(n, edges.iter().copied()).unwrap();
        symbolic_factorize(&p, &EliminationOrdering::identity(n))
    }

    #[test]
    fn tridiagonal_has_no_fill() {
        let t = SparseSymPattern::banded(6, 1);
        assert_eq!(symbolic_factorize(&t, &EliminationOrdering::identity(6)), t);
    }

    #[test]
    fn four_cycle_gains_one_chord() {
        let f = identity_fill(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        assert_eq!(f.nnz(), 5);
        assert!(f.find(1, 3).is_some());
        assert!(f.find(0, 2).is_none());
    }

    #[test]
    fn leading_arrowhead_fills_completely() {
        let f = identity_fill(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert_eq!(f, SparseSymPattern::dense(5));
    }

    #[test]
    fn trailing_arrowhead_has_no_fill() {
        let edges = [(0, 4), (1, 4), (2, 4), (3, 4)];
        let f = identity_fill(5, &edges);
        assert_eq!(f.nnz(), 4);
    }

    #[test]
    fn fill_contains_permuted_input() {
        let p = SparseSymPattern::from_edges(5, [(0, 3), (3, 1), (1, 4), (4, 2), (2, 0)]).unwrap();
        let ord = EliminationOrdering::from_sequence(vec![4, 2, 0, 1, 3]).unwrap();
        let f = symbolic_factorize(&p, &ord);
        assert!(p.permute(&ord).is_subset_of(&f));
    }
}
