//! Nowhere-zero `Z2 x Z3` labelings of multigraphs with prescribed boundary supports.
//!
//! Given a connected multigraph `G` and vertex sets `T ⊆ U` with `|T|` even, `|U| != 1`,
//! and no U-free vertex set cut off by fewer than two edges, [`solver::solve`] builds
//! `phi2: E -> Z2` and `phi3: E -> Z3` such that no edge gets `(0, 0)`, the boundary of
//! `phi2` is nonzero exactly on `T`, and the boundary of `phi3` is nonzero exactly on `U`.
//! With `T = U = ∅` this is a nowhere-zero `Z6`-flow of a 2-edge-connected graph, which
//! [`integerflow`] turns into an integer flow with values in `±{1, ..., 5}`.

pub mod generators;
pub mod groupflow;
pub mod hypothesis;
pub mod integerflow;
pub mod io;
pub mod multigraph;
pub mod oracle;
pub mod solver;

pub use groupflow::{crt_pair, verify_solution, Solution, Z2, Z3, Z6};
pub use hypothesis::{check_instance, HypothesisReport, Instance};
pub use multigraph::{EdgeId, Multigraph, Path, Vertex};
pub use solver::{solve, solve_with_trace, SolveError};
