//! Solvers for Chern–Simons vortex equations on finite weighted graphs.
//!
//! The crate covers the coupled `U(1) × U(1)` Abelian Chern–Simons system
//!
//! ```text
//! Δu = λ f1(u, v) + 4π Σ m_j δ_{p_j}
//! Δv = λ f2(u, v) + 4π Σ n_j δ_{q_j}
//! ```
//!
//! and the scalar equation `Δu = λ e^u (e^u - 1) + 4π Σ δ_{p_j}` on a
//! connected graph with vertex measure `μ` and edge weights `ω`.
//!
//! Modules, bottom up:
//!
//! - [`graph`]: weighted graphs, the μ-Laplacian, gradient form, integrals.
//! - [`linops`]: solves for `Δ - K` and the mean-zero Poisson problem.
//! - [`model`]: parameters, vortex data and the nonlinearities.
//! - [`solver`]: background solves, the monotone iteration, sub-solutions
//!   and the checks that certify them.
//! - [`analysis`]: λ sweeps, decay rates and critical-coupling bisection.
//! - [`cli`]: the `gv` command-line driver.
//!
//! Runnable walkthroughs of each capability live in `examples/`.

// `!(x <= tol)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod error;
pub mod generators;
pub mod graph;
pub mod linops;
pub mod model;
pub mod solver;

pub use error::{Error, Result};
pub use graph::{VertexFunction, WeightedGraph};
pub use model::{ModelParams, ScalarVortexSet, VortexSet};
pub use solver::{IterationOptions, IterationReport, Outcome};
