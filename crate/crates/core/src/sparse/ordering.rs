use std::collections::BTreeSet;

use crate::sparse::SparseSymPattern;

/// Bijection between original vertex labels and elimination positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationOrdering {
    perm: Vec<usize>,
    inverse: Vec<usize>,
}

impl EliminationOrdering {
    pub fn identity(n: usize) -> Self {
        Self { perm: (0..n).collect(), inverse: (0..n).collect() }
    }

    /// From the elimination sequence: `sequence[k]` is the original vertex eliminated k-th.
    /// Returns `None` if `sequence` is not a permutation.
    pub fn from_sequence(sequence: Vec<usize>) -> Option<Self> {
        let n = sequence.len();
        let mut perm = vec![usize::MAX; n];
        for (k, &v) in sequence.iter().enumerate() {
            if v >= n || perm[v] != usize::MAX {
                return None;
            }
            perm[v] = k;
        }
        Some(Self { perm, inverse: sequence })
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// Original index -> new index.
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// New index -> original index, i.e. the elimination sequence.
    pub fn inverse(&self) -> &[usize] {
        &self.inverse
    }
}

/// Plain minimum degree on the elimination graph. Ties go to the smallest original index.
pub fn min_degree_ordering(pattern: &SparseSymPattern) -> EliminationOrdering {
    let n = pattern.n();
    let mut adj: Vec<BTreeSet<usize>> =
        pattern.adjacency().into_iter().map(|a| a.into_iter().collect()).collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (adj[v].len(), v)).collect();
    let mut sequence = Vec::with_capacity(n);

    while let Some((_, v)) = queue.pop_first() {
        sequence.push(v);
        let nbrs: Vec<usize> = std::mem::take(&mut adj[v]).into_iter().collect();
        for &u in &nbrs {
            queue.remove(&(adj[u].len(), u));
            adj[u].remove(&v);
        }
        for (a, &u) in nbrs.iter().enumerate() {
            for &w in &nbrs[a + 1..] {
                adj[u].insert(w);
                adj[w].insert(u);
            }
        }
        for &u in &nbrs {
            queue.insert((adj[u].len(), u));
        }
    }
    EliminationOrdering::from_sequence(sequence).expect("every vertex is eliminated once")
}
