//! Single-flip simulated annealing with a geometric inverse-temperature
//! schedule.
//!
//! Every read draws from its own ChaCha8 stream (`seed`, stream = read
//! index), so reads can run in parallel and the merged result is identical to
//! a sequential run: the lowest value wins, earliest read on ties.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Result, SksError};
use crate::graph::VertexSubset;
use crate::qubo::QuboModel;

use super::{Couplings, SolveOutcome};

#[derive(Debug, Clone, PartialEq)]
pub struct SaParams {
    /// Independent restarts.
    pub reads: usize,
    /// Full passes over the variables per read.
    pub sweeps: usize,
    pub beta_start: f64,
    pub beta_end: f64,
    pub seed: u64,
    /// Re-evaluate the full objective after every accepted flip and panic on
    /// disagreement with the incremental energy. Test aid; `O(n^2)` per flip.
    pub check_incremental: bool,
}

impl Default for SaParams {
    fn default() -> Self {
        Self {
            reads: 100,
            sweeps: 1000,
            beta_start: 0.1,
            beta_end: 10.0,
            seed: 0,
            check_incremental: false,
        }
    }
}

impl SaParams {
    pub fn validate(&self) -> Result<()> {
        if self.reads == 0 || self.sweeps == 0 {
            return Err(SksError::InvalidParameter(
                "reads and sweeps must be at least 1".into(),
            ));
        }
        if !(self.beta_start > 0.0 && self.beta_start <= self.beta_end && self.beta_end.is_finite()) {
            return Err(SksError::InvalidParameter(format!(
                "need 0 < beta_start <= beta_end, got {} and {}",
                self.beta_start, self.beta_end
            )));
        }
        Ok(())
    }

    /// `beta_t = beta_start * (beta_end / beta_start)^(t / (sweeps - 1))`.
    pub fn schedule(&self) -> Vec<f64> {
        if self.sweeps == 1 {
            return vec![self.beta_start];
        }
        let ratio = self.beta_end / self.beta_start;
        let last = (self.sweeps - 1) as f64;
        (0..self.sweeps)
            .map(|t| self.beta_start * ratio.powf(t as f64 / last))
            .collect()
    }
}

struct ReadResult {
    state: Vec<bool>,
    value: f64,
}

fn anneal_once(
    model: &QuboModel,
    c: &Couplings,
    betas: &[f64],
    seed: u64,
    read: usize,
    check: bool,
) -> ReadResult {
    let n = model.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(read as u64);

    let mut x: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let mut field = vec![0.0; n];
    for (i, _) in x.iter().enumerate().filter(|(_, &on)| on) {
        for &(j, w) in &c.couplings[i] {
            field[j] += w;
        }
    }
    let mut energy = model.evaluate_bools(&x);
    let mut best_energy = energy;
    let mut best = x.clone();
    let mut order: Vec<usize> = (0..n).collect();

    for &beta in betas {
        order.shuffle(&mut rng);
        for &i in &order {
            let delta = c.flip_delta(i, x[i], field[i]);
            let accept = delta <= 0.0 || rng.gen::<f64>() < (-beta * delta).exp();
            if !accept {
                continue;
            }
            x[i] = !x[i];
            c.propagate(i, x[i], &mut field);
            energy += delta;
            if check {
                let full = model.evaluate_bools(&x);
                assert!(
                    (full - energy).abs() <= 1e-7 * full.abs().max(1.0),
                    "incremental energy {energy} drifted from {full}"
                );
            }
            if energy < best_energy {
                best_energy = energy;
                best.copy_from_slice(&x);
            }
        }
    }
    let value = model.evaluate_bools(&best);
    ReadResult { state: best, value }
}

pub fn sa_minimize(model: &QuboModel, params: &SaParams) -> Result<SolveOutcome> {
    params.validate()?;
    let start = Instant::now();
    let c = Couplings::new(model);
    let betas = params.schedule();

    let results: Vec<ReadResult> = (0..params.reads)
        .into_par_iter()
        .map(|r| anneal_once(model, &c, &betas, params.seed, r, params.check_incremental))
        .collect();

    let mut winner = 0;
    for (r, res) in results.iter().enumerate().skip(1) {
        if res.value < results[winner].value {
            winner = r;
        }
    }
    let x = VertexSubset::from_bools(&results[winner].state);
    Ok(SolveOutcome {
        cardinality: x.cardinality(),
        value: results[winner].value,
        x,
        is_proven_optimal: false,
        minimizer_count: None,
        runtime: start.elapsed(),
    })
}
