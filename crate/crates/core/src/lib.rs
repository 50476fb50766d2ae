//! Sparsest- and densest-k-subgraph via QUBO relaxations.
//!
//! Graphs and vertex subsets live in [`graph`], the three relaxations in
//! [`qubo`], solvers in [`solvers`], parameter theory in [`theory`] and the
//! penalty-update loops in [`iterative`]. [`bench`] runs TOML manifests of
//! jobs and writes CSV results.

pub mod bench;
pub mod error;
pub mod graph;
pub mod io;
pub mod iterative;
pub mod qubo;
pub mod solvers;
pub mod theory;

pub use error::{Result, SksError};
pub use graph::{Graph, VertexSubset};
pub use iterative::{IterationTrace, IterativeConfig, Method, Subgraph};
pub use qubo::{QuboModel, RelaxationKind, RelaxationParams};
pub use solvers::{QuboSolver, SaParams, SolveOutcome, SolverChoice};
