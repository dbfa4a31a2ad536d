//! Sparse semidefinite programming by primal-dual potential reduction.
//!
//! The primal variable is kept only on the aggregate sparsity pattern `F` of the data, as
//! a partial matrix; its maximum-determinant positive definite completion is never formed
//! except through clique factors ([`completion`]). The dual slack is a sparse matrix on
//! `F` factored by a fill-reducing Cholesky ([`sparse`]), and derivatives of `ln det` come
//! from the selected inverse ([`logdet_ad`]). [`solver`] drives the iteration; [`maxcut`]
//! builds the MAX-CUT relaxation and rounds it.
//!
//! ```no_run
//! use sparse_sdp::maxcut::{random_graph, solve_maxcut};
//! use sparse_sdp::solver::SolverConfig;
//!
//! let g = random_graph(20, 40, 1).unwrap();
//! let out = solve_maxcut(&g, &SolverConfig::default(), 100, 0).unwrap();
//! println!("bound {} cut {}", out.cut.sdp_bound, out.cut.cut_value);
//! ```

pub mod chordal;
pub mod dense;
pub mod error;
pub mod sparse;
pub mod logdet_ad;
pub mod completion;
pub mod problem;
pub mod maxcut;
pub mod solver;
pub mod sdpa;
pub mod bench;
