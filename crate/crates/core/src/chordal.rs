//! Perfect elimination orderings, maximal cliques and running-intersection clique orders.
//!
//! Every routine here assumes the pattern is already labelled so that `0..n` is the
//! candidate elimination order (the output of symbolic factorization).

use crate::error::{Error, Result};
use crate::sparse::SparseSymPattern;

/// Maximal cliques `C_1..C_l` ordered so that each clique's intersection with all later
/// cliques lies inside a single later clique (its `parent`).
///
/// `residuals[r]` holds the vertices of `C_r` found in no later clique and
/// `separators[r]` the rest, so `C_r` is their disjoint union. All sets are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueSequence {
    pub cliques: Vec<Vec<usize>>,
    pub residuals: Vec<Vec<usize>>,
    pub separators: Vec<Vec<usize>>,
    pub parent: Vec<Option<usize>>,
}

impl CliqueSequence {
    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    pub fn max_clique_size(&self) -> usize {
        self.cliques.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// True iff for every vertex its higher-numbered neighbours form a clique.
pub fn verify_peo(pattern: &SparseSymPattern) -> bool {
    (0..pattern.n()).all(|v| {
        let higher = pattern.col(v);
        match higher.split_first() {
            None => true,
            Some((&u, rest)) => is_sorted_subset(rest, pattern.col(u)),
        }
    })
}

fn is_sorted_subset(small: &[usize], big: &[usize]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.by_ref().any(|y| y == x))
}

/// Maximal members of `{ {v} ∪ higher(v) }`, ordered by their smallest vertex.
pub fn maximal_cliques(pattern: &SparseSymPattern) -> Result<Vec<Vec<usize>>> {
    if !verify_peo(pattern) {
        return Err(Error::NotChordal);
    }
    let n = pattern.n();
    // K_v is dominated iff some elimination-tree child c has |higher(c)| = |higher(v)| + 1.
    let mut dominated = vec![false; n];
    for c in 0..n {
        if let Some(&p) = pattern.col(c).first() {
            if pattern.col(c).len() == pattern.col(p).len() + 1 {
                dominated[p] = true;
            }
        }
    }
    Ok((0..n)
        .filter(|&v| !dominated[v])
        .map(|v| {
            let mut c = Vec::with_capacity(pattern.col(v).len() + 1);
            c.push(v);
            c.extend_from_slice(pattern.col(v));
            c
        })
        .collect())
}

/// Orders the maximal cliques of a chordal graph on `n` vertices (labels in perfect
/// elimination order) so that the running intersection property holds.
///
/// Each vertex is owned by the clique of largest representative (smallest member) that
/// contains it. A clique's parent is the owner of the smallest vertex it does not own;
/// cliques are emitted in post-order of that forest, children before parents, siblings
/// and roots by ascending representative.
pub fn rip_order(cliques: &[Vec<usize>], n: usize) -> Result<CliqueSequence> {
    let l = cliques.len();
    let mut sorted: Vec<Vec<usize>> = cliques
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.sort_unstable();
            c.dedup();
            c
        })
        .collect();
    if sorted.iter().flatten().any(|&v| v >= n) {
        return Err(Error::RipFailure);
    }
    sorted.sort_by_key(|c| c.first().copied().unwrap_or(usize::MAX));

    let mut owner = vec![usize::MAX; n];
    for (k, c) in sorted.iter().enumerate() {
        for &v in c {
            owner[v] = k;
        }
    }
    if owner.contains(&usize::MAX) {
        return Err(Error::RipFailure);
    }

    let mut tree_parent = vec![None; l];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); l];
    let mut roots = Vec::new();
    for (k, c) in sorted.iter().enumerate() {
        match c.iter().find(|&&v| owner[v] != k) {
            Some(&u) => {
                let p = owner[u];
                tree_parent[k] = Some(p);
                children[p].push(k);
            }
            None => roots.push(k),
        }
    }

    // iterative post-order
    let mut order = Vec::with_capacity(l);
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for &root in &roots {
        stack.push((root, 0));
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if *next < children[node].len() {
                let child = children[node][*next];
                *next += 1;
                stack.push((child, 0));
            } else {
                order.push(node);
                stack.pop();
            }
        }
    }
    if order.len() != l {
        return Err(Error::RipFailure);
    }

    let mut position = vec![0; l];
    for (r, &k) in order.iter().enumerate() {
        position[k] = r;
    }
    let cliques: Vec<Vec<usize>> = order.iter().map(|&k| sorted[k].clone()).collect();

    let mut seen = vec![false; n];
    let mut residuals = vec![Vec::new(); l];
    let mut separators = vec![Vec::new(); l];
    for r in (0..l).rev() {
        let (s, u): (Vec<usize>, Vec<usize>) = cliques[r].iter().partition(|&&v| !seen[v]);
        for &v in &cliques[r] {
            seen[v] = true;
        }
        residuals[r] = s;
        separators[r] = u;
    }

    let mut parent = vec![None; l];
    for r in 0..l {
        if separators[r].is_empty() {
            continue;
        }
        let candidate = tree_parent[order[r]].map(|k| position[k]);
        let holds = |s: usize| is_sorted_subset(&separators[r], &cliques[s]);
        parent[r] = match candidate {
            Some(s) if s > r && holds(s) => Some(s),
            _ => Some((r + 1..l).find(|&s| holds(s)).ok_or(Error::RipFailure)?),
        };
    }
    Ok(CliqueSequence { cliques, residuals, separators, parent })
}

/// Cliques plus running-intersection order for a filled pattern.
pub fn clique_sequence(pattern: &SparseSymPattern) -> Result<CliqueSequence> {
    let cliques = maximal_cliques(pattern)?;
    rip_order(&cliques, pattern.n())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(n: usize, edges: &[(usize, usize)]) -> SparseSymPattern {
        SparseSymPattern::from_edges(n, edges.iter().copied()).unwrap()
    }

    fn filled_four_cycle() -> SparseSymPattern {
        pat(4, &[(0, 1), (1, 2), (2, 3), (0, 3), (1, 3)])
    }

    #[test]
    fn peo_checks() {
        assert!(verify_peo(&filled_four_cycle()));
        assert!(!verify_peo(&pat(4, &[(0, 1), (1, 2), (2, 3), (0, 3)])));
        assert!(verify_peo(&SparseSymPattern::dense(6)));
    }

    #[test]
    fn cliques_of_path() {
        let c = maximal_cliques(&pat(3, &[(0, 1), (1, 2)])).unwrap();
        assert_eq!(c, vec![vec![0, 1], vec![1, 2]]);
    }

    #[test]
    fn cliques_of_complete_graph() {
        assert_eq!(maximal_cliques(&SparseSymPattern::dense(3)).unwrap(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn cliques_of_filled_cycle() {
        let c = maximal_cliques(&filled_four_cycle()).unwrap();
        assert_eq!(c, vec![vec![0, 1, 3], vec![1, 2, 3]]);
    }

    #[test]
    fn non_chordal_rejected() {
        let raw = pat(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        assert_eq!(maximal_cliques(&raw).unwrap_err(), Error::NotChordal);
    }

    #[test]
    fn rip_for_path() {
        let s = rip_order(&[vec![0, 1], vec![1, 2]], 3).unwrap();
        assert_eq!(s.cliques, vec![vec![0, 1], vec![1, 2]]);
        assert_eq!(s.residuals, vec![vec![0], vec![1, 2]]);
        assert_eq!(s.separators, vec![vec![1], vec![]]);
        assert_eq!(s.parent, vec![Some(1), None]);
    }

    #[test]
    fn rip_single_clique() {
        let s = rip_order(&[vec![0, 1, 2]], 3).unwrap();
        assert_eq!(s.residuals[0], vec![0, 1, 2]);
        assert!(s.separators[0].is_empty());
    }

    #[test]
    fn rip_filled_cycle() {
        let s = clique_sequence(&filled_four_cycle()).unwrap();
        assert_eq!(s.cliques, vec![vec![0, 1, 3], vec![1, 2, 3]]);
        assert_eq!(s.separators[0], vec![1, 3]);
    }

    #[test]
    fn rip_disconnected_components() {
        let p = pat(5, &[(0, 1), (2, 3), (3, 4)]);
        let s = clique_sequence(&p).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.residuals.iter().map(Vec::len).sum::<usize>(), 5);
        let roots = s.separators.iter().filter(|u| u.is_empty()).count();
        assert_eq!(roots, 2);
    }

    #[test]
    fn rip_requires_cover() {
        assert_eq!(rip_order(&[vec![0, 1]], 3).unwrap_err(), Error::RipFailure);
    }
}
