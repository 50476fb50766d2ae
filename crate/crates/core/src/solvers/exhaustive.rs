//! Exhaustive enumeration in Gray-code order.
//!
//! Each step flips one variable, so the objective and the per-variable local
//! fields are updated in `O(deg)` instead of being recomputed. Ties are
//! resolved towards the lexicographically smallest incidence vector
//! `(x_1, x_2, ...)` with `0 < 1`.

use std::time::Instant;

use crate::error::{Result, SksError};
use crate::graph::{Graph, VertexSubset};
use crate::qubo::QuboModel;

use super::{Couplings, SolveOutcome};

pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 24;
pub const MINIMIZER_CAP: usize = 1_000_000;

/// Hard ceiling: masks are `u64` and 2^40 steps is already out of reach.
const ABSOLUTE_LIMIT: usize = 40;

#[derive(Debug, Clone)]
pub struct ExhaustiveResult {
    pub outcome: SolveOutcome,
    /// Every global minimizer, in lexicographic order; only when requested.
    pub minimizers: Option<Vec<VertexSubset>>,
}

/// `a` precedes `b` lexicographically as `(x_1, ..., x_n)`.
#[inline]
pub(crate) fn lex_less(a: u64, b: u64) -> bool {
    let d = a ^ b;
    d != 0 && a & (d & d.wrapping_neg()) == 0
}

fn lex_key(mask: u64, n: usize) -> u64 {
    // Reversing the low n bits makes numeric order equal lexicographic order.
    mask.reverse_bits() >> (64 - n.max(1))
}

fn tie_tolerance(best: f64) -> f64 {
    1e-9 * best.abs().max(1.0)
}

fn check_limit(dim: usize, limit: usize) -> Result<()> {
    if dim > limit.min(ABSOLUTE_LIMIT) {
        Err(SksError::ExhaustiveLimit {
            dim,
            limit: limit.min(ABSOLUTE_LIMIT),
        })
    } else {
        Ok(())
    }
}

/// Visits every assignment once in Gray-code order and calls
/// `visit(mask, value)`; the first call is the all-zero assignment.
fn gray_scan(model: &QuboModel, mut visit: impl FnMut(u64, f64)) {
    let n = model.dim();
    let c = Couplings::new(model);
    let mut field = vec![0.0; n];
    let mut mask = 0u64;
    let mut value = model.offset();
    visit(mask, value);
    let total: u64 = 1 << n;
    for step in 1..total {
        let i = step.trailing_zeros() as usize;
        let on = mask >> i & 1 == 1;
        value += c.flip_delta(i, on, field[i]);
        mask ^= 1 << i;
        c.propagate(i, !on, &mut field);
        visit(mask, value);
    }
}

/// Global minimum of `model` over `{0,1}^dim`.
///
/// With `enumerate_all`, a second pass collects every assignment within a
/// relative `1e-9` of the minimum; more than [`MINIMIZER_CAP`] of them is an
/// error.
pub fn exhaustive_minimize(
    model: &QuboModel,
    enumerate_all: bool,
    limit: usize,
) -> Result<ExhaustiveResult> {
    let n = model.dim();
    check_limit(n, limit)?;
    let start = Instant::now();

    let mut best = f64::INFINITY;
    let mut best_mask = 0u64;
    let mut count = 0u64;
    gray_scan(model, |mask, v| {
        let tol = tie_tolerance(best);
        if v < best - tol {
            best = v;
            best_mask = mask;
            count = 1;
        } else if v <= best + tol {
            count += 1;
            if v < best {
                best = v;
            }
            if lex_less(mask, best_mask) {
                best_mask = mask;
            }
        }
    });

    let minimizers = if enumerate_all {
        let tol = tie_tolerance(best);
        let mut masks = Vec::new();
        let mut overflow = false;
        gray_scan(model, |mask, v| {
            if v <= best + tol {
                if masks.len() == MINIMIZER_CAP {
                    overflow = true;
                } else {
                    masks.push(mask);
                }
            }
        });
        if overflow {
            return Err(SksError::MinimizerCap(MINIMIZER_CAP));
        }
        masks.sort_unstable_by_key(|&m| lex_key(m, n));
        count = masks.len() as u64;
        best_mask = masks[0];
        Some(masks.into_iter().map(|m| VertexSubset::from_mask(n, m)).collect::<Vec<_>>())
    } else {
        None
    };

    let x = VertexSubset::from_mask(n, best_mask);
    let value = model.evaluate(&x)?;
    Ok(ExhaustiveResult {
        outcome: SolveOutcome {
            cardinality: x.cardinality(),
            x,
            value,
            is_proven_optimal: true,
            minimizer_count: Some(count),
            runtime: start.elapsed(),
        },
        minimizers,
    })
}

/// Minimum induced edge count for every cardinality `0..=n`, with the
/// lexicographically smallest witness mask for each.
pub fn cardinality_profile(g: &Graph, limit: usize) -> Result<Vec<(usize, u64)>> {
    let n = g.n();
    check_limit(n, limit)?;
    let adj: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).ones().fold(0u64, |acc, u| acc | 1 << u))
        .collect();
    let mut best: Vec<(usize, u64)> = vec![(usize::MAX, 0); n + 1];
    best[0] = (0, 0);
    let mut mask = 0u64;
    let mut edges = 0usize;
    let mut card = 0usize;
    for step in 1u64..(1u64 << n) {
        let v = step.trailing_zeros() as usize;
        let touching = (adj[v] & mask).count_ones() as usize;
        if mask >> v & 1 == 1 {
            edges -= touching;
            card -= 1;
        } else {
            edges += touching;
            card += 1;
        }
        mask ^= 1 << v;
        let slot = &mut best[card];
        if edges < slot.0 || (edges == slot.0 && lex_less(mask, slot.1)) {
            *slot = (edges, mask);
        }
    }
    Ok(best)
}

/// Exact sparsest-k-subgraph value `m_k` and a witness; `m_0 = 0`.
pub fn sks_exact(g: &Graph, k: usize, limit: usize) -> Result<(usize, VertexSubset)> {
    if k > g.n() {
        return Err(SksError::SizeOutOfRange { k, lo: 0, hi: g.n() });
    }
    let profile = cardinality_profile(g, limit)?;
    let (m, mask) = profile[k];
    Ok((m, VertexSubset::from_mask(g.n(), mask)))
}
