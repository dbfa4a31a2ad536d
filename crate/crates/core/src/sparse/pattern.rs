use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::sparse::EliminationOrdering;

/// Symmetric sparsity graph stored as the strict lower triangle in compressed columns.
///
/// The diagonal is implicit and always present. Column `j` lists the rows `i > j`
/// with `{i, j}` an edge, sorted ascending. A row index (`row_ptr`/`row_cols`/`row_slots`)
/// is kept alongside so column-oriented factorizations can find the entries of a row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseSymPattern {
    n: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    row_ptr: Vec<usize>,
    row_cols: Vec<usize>,
    row_slots: Vec<usize>,
}

impl SparseSymPattern {
    /// Pattern with no off-diagonal entries.
    pub fn diagonal(n: usize) -> Self {
        Self::from_columns(vec![Vec::new(); n])
    }

    /// Builds a pattern from unordered index pairs. Self-loops and duplicates are dropped.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange(i, j));
            }
            if i == j {
                continue;
            }
            let (lo, hi) = if i < j { (i, j) } else { (j, i) };
            cols[lo].insert(hi);
        }
        Ok(Self::from_columns(
            cols.into_iter().map(|c| c.into_iter().collect()).collect(),
        ))
    }

    /// Complete graph on `n` vertices.
    pub fn dense(n: usize) -> Self {
        Self::from_columns((0..n).map(|j| (j + 1..n).collect()).collect())
    }

    /// Band pattern: `{i, j}` present iff `0 < |i - j| <= p`.
    pub fn banded(n: usize, p: usize) -> Self {
        Self::from_columns((0..n).map(|j| (j + 1..n.min(j + p + 1)).collect()).collect())
    }

    /// `cols[j]` must hold strictly increasing rows greater than `j`.
    pub(crate) fn from_columns(cols: Vec<Vec<usize>>) -> Self {
        let n = cols.len();
        let mut col_ptr = Vec::with_capacity(n + 1);
        let mut row_idx = Vec::new();
        col_ptr.push(0);
        for (j, c) in cols.iter().enumerate() {
            debug_assert!(c.windows(2).all(|w| w[0] < w[1]));
            debug_assert!(c.iter().all(|&i| i > j && i < n));
            row_idx.extend_from_slice(c);
            col_ptr.push(row_idx.len());
        }

        let mut counts = vec![0usize; n + 1];
        for &i in &row_idx {
            counts[i + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let row_ptr = counts.clone();
        let mut next = counts;
        let mut row_cols = vec![0; row_idx.len()];
        let mut row_slots = vec![0; row_idx.len()];
        for j in 0..n {
            for s in col_ptr[j]..col_ptr[j + 1] {
                let i = row_idx[s];
                row_cols[next[i]] = j;
                row_slots[next[i]] = s;
                next[i] += 1;
            }
        }
        Self { n, col_ptr, row_idx, row_ptr, row_cols, row_slots }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stored off-diagonal entries (edges).
    pub fn nnz(&self) -> usize {
        self.row_idx.len()
    }

    /// Rows below the diagonal in column `j`.
    pub fn col(&self, j: usize) -> &[usize] {
        &self.row_idx[self.col_ptr[j]..self.col_ptr[j + 1]]
    }

    /// Slot range of column `j` in the off-diagonal value array.
    pub fn col_range(&self, j: usize) -> std::ops::Range<usize> {
        self.col_ptr[j]..self.col_ptr[j + 1]
    }

    pub fn row_of_slot(&self, slot: usize) -> usize {
        self.row_idx[slot]
    }

    /// `(column, slot)` pairs for the entries left of the diagonal in row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.row_cols[r.clone()].iter().copied().zip(self.row_slots[r].iter().copied())
    }

    /// Slot of the off-diagonal entry `{i, j}`, if present.
    pub fn find(&self, i: usize, j: usize) -> Option<usize> {
        if i == j || i >= self.n || j >= self.n {
            return None;
        }
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        let start = self.col_ptr[lo];
        self.col(lo).binary_search(&hi).ok().map(|k| start + k)
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        i == j && i < self.n || self.find(i, j).is_some()
    }

    /// Edges as `(row, col)` with `row > col`, in slot order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |j| self.col(j).iter().map(move |&i| (i, j)))
    }

    /// Neighbour lists of the full symmetric graph.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for (i, j) in self.edges() {
            adj[i].push(j);
            adj[j].push(i);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    /// True if every edge of `self` is an edge of `other`.
    pub fn is_subset_of(&self, other: &SparseSymPattern) -> bool {
        self.n == other.n && self.edges().all(|(i, j)| other.find(i, j).is_some())
    }

    /// Union of several patterns of the same order.
    pub fn union<'a>(n: usize, patterns: impl IntoIterator<Item = &'a SparseSymPattern>) -> Result<Self> {
        let mut edges = Vec::new();
        for p in patterns {
            if p.n != n {
                return Err(Error::DimensionMismatch { expected: n, found: p.n });
            }
            edges.extend(p.edges());
        }
        Self::from_edges(n, edges)
    }

    /// Relabels vertex `v` as `ord.perm()[v]`.
    pub fn permute(&self, ord: &EliminationOrdering) -> Self {
        let perm = ord.perm();
        Self::from_edges(self.n, self.edges().map(|(i, j)| (perm[i], perm[j])))
            .expect("permutation maps indices into range")
    }
}
