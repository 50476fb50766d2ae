//! QUBO solvers behind a single `minimize` contract.
//!
//! [`exhaustive`] scans all `2^n` assignments and is the ground truth for
//! small models; [`sa`] is a seeded single-flip simulated annealer. The
//! iterative algorithms only see [`QuboSolver`], so any other backend can be
//! plugged in as a closure.

pub mod exhaustive;
pub mod sa;

use std::time::Duration;

use crate::error::Result;
use crate::graph::VertexSubset;
use crate::qubo::QuboModel;

pub use exhaustive::{
    cardinality_profile, exhaustive_minimize, sks_exact, ExhaustiveResult, DEFAULT_EXHAUSTIVE_LIMIT,
    MINIMIZER_CAP,
};
pub use sa::{sa_minimize, SaParams};

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    /// Best assignment found.
    pub x: VertexSubset,
    /// Objective at `x`, offset included; always `model.evaluate(&x)`.
    pub value: f64,
    pub cardinality: usize,
    pub is_proven_optimal: bool,
    /// Number of global minimizers, when the solver knows it.
    pub minimizer_count: Option<u64>,
    pub runtime: Duration,
}

impl SolveOutcome {
    /// Equality on everything except wall-clock time.
    pub fn same_result(&self, other: &Self) -> bool {
        self.x == other.x
            && self.value.to_bits() == other.value.to_bits()
            && self.cardinality == other.cardinality
            && self.is_proven_optimal == other.is_proven_optimal
            && self.minimizer_count == other.minimizer_count
    }
}

/// Anything that can (approximately) minimize a QUBO model. `seed` lets
/// stochastic solvers vary between calls while staying reproducible;
/// deterministic solvers ignore it.
pub trait QuboSolver {
    fn minimize(&self, model: &QuboModel, seed: u64) -> Result<SolveOutcome>;

    fn name(&self) -> &str {
        "custom"
    }

    fn is_exact(&self) -> bool {
        false
    }
}

impl<F> QuboSolver for F
where
    F: Fn(&QuboModel, u64) -> Result<SolveOutcome>,
{
    fn minimize(&self, model: &QuboModel, seed: u64) -> Result<SolveOutcome> {
        self(model, seed)
    }
}

/// The two built-in backends.
#[derive(Debug, Clone, PartialEq)]
pub enum SolverChoice {
    Sa(SaParams),
    Oracle { limit: usize },
}

impl SolverChoice {
    pub fn oracle() -> Self {
        Self::Oracle {
            limit: DEFAULT_EXHAUSTIVE_LIMIT,
        }
    }

    pub fn sa() -> Self {
        Self::Sa(SaParams::default())
    }
}

impl QuboSolver for SolverChoice {
    fn minimize(&self, model: &QuboModel, seed: u64) -> Result<SolveOutcome> {
        match self {
            Self::Sa(params) => sa_minimize(model, &SaParams { seed, ..params.clone() }),
            Self::Oracle { limit } => Ok(exhaustive_minimize(model, false, *limit)?.outcome),
        }
    }

    fn name(&self) -> &str {
        match self {
            Self::Sa(_) => "sa",
            Self::Oracle { .. } => "oracle",
        }
    }

    fn is_exact(&self) -> bool {
        matches!(self, Self::Oracle { .. })
    }
}

/// Sparse view of a model used by both solvers: `diag[i] = Q_ii + c_i` and
/// `couplings[i]` lists `(j, 2 Q_ij)` for nonzero off-diagonal entries.
///
/// Flipping `x_i` from 0 to 1 changes the energy by
/// `diag[i] + sum_j 2 Q_ij x_j`; the sum is kept as a running local field.
pub(crate) struct Couplings {
    pub diag: Vec<f64>,
    pub couplings: Vec<Vec<(usize, f64)>>,
}

impl Couplings {
    pub fn new(model: &QuboModel) -> Self {
        let n = model.dim();
        let mut diag = Vec::with_capacity(n);
        let mut couplings = Vec::with_capacity(n);
        for i in 0..n {
            let row = model.row(i);
            diag.push(row[i] + model.linear()[i]);
            couplings.push(
                row.iter()
                    .enumerate()
                    .filter(|&(j, &w)| j != i && w != 0.0)
                    .map(|(j, &w)| (j, 2.0 * w))
                    .collect(),
            );
        }
        Self { diag, couplings }
    }

    /// Energy change for flipping `i` given its current local field.
    #[inline]
    pub fn flip_delta(&self, i: usize, on: bool, field: f64) -> f64 {
        let d = self.diag[i] + field;
        if on {
            -d
        } else {
            d
        }
    }

    /// Applies the field update after `i` flipped to state `now_on`.
    #[inline]
    pub fn propagate(&self, i: usize, now_on: bool, field: &mut [f64]) {
        let sign = if now_on { 1.0 } else { -1.0 };
        for &(j, w) in &self.couplings[i] {
            field[j] += sign * w;
        }
    }
}
