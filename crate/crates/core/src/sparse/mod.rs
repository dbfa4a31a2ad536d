//! Symmetric sparse storage, fill-reducing ordering and sparse Cholesky.
//!
//! Everything is stored as the strict lower triangle in compressed columns plus an
//! explicit diagonal. Matrices that live on the same pattern share it through an `Arc`
//! so elementwise work never needs index lookups.

mod cholesky;
mod matrix;
mod ordering;
mod pattern;
mod symbolic;

pub use cholesky::{cholesky_factorize, CholeskyFactor, PIVOT_TOL};
pub use matrix::{inner_product, SparseSymMatrix};
pub use ordering::{min_degree_ordering, EliminationOrdering};
pub use pattern::SparseSymPattern;
pub use symbolic::{fill_in_place_order, symbolic_factorize};
