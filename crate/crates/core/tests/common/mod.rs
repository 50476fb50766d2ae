//! Brute-force reference computations shared by the integration tests.
//!
//! Everything here works on `u64` vertex masks and recomputes edge counts
//! from scratch, without touching the library's enumeration code.

#![allow(dead_code)]

use sks_core::graph::{generate_er, Graph, VertexSubset};

pub fn adjacency_masks(g: &Graph) -> Vec<u64> {
    let mut adj = vec![0u64; g.n()];
    for &(i, j) in g.edges() {
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }
    adj
}

pub fn edges_in(adj: &[u64], mask: u64) -> usize {
    let mut twice = 0;
    let mut rest = mask;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        twice += (adj[v] & mask).count_ones() as usize;
    }
    twice / 2
}

/// `m_k` for `k = 0..=n`.
pub fn brute_m(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let adj = adjacency_masks(g);
    let mut m = vec![usize::MAX; n + 1];
    for mask in 0u64..(1 << n) {
        let c = mask.count_ones() as usize;
        let e = edges_in(&adj, mask);
        if e < m[c] {
            m[c] = e;
        }
    }
    m
}

/// Minimizers of `edges(S) - (p/q)|S|`, compared exactly as integers
/// `q*edges - p*|S|`. Returned in increasing mask order.
pub fn brute_lr_minimizers(g: &Graph, p: i64, q: i64) -> Vec<u64> {
    assert!(q > 0);
    let n = g.n();
    let adj = adjacency_masks(g);
    let mut best = i64::MAX;
    let mut out = Vec::new();
    for mask in 0u64..(1 << n) {
        let v = q * edges_in(&adj, mask) as i64 - p * mask.count_ones() as i64;
        if v < best {
            best = v;
            out.clear();
        }
        if v == best {
            out.push(mask);
        }
    }
    out
}

/// Minimum of an objective given as a function of (edges, cardinality).
pub fn brute_min_by(g: &Graph, f: impl Fn(usize, usize) -> f64) -> (f64, Vec<u64>) {
    let n = g.n();
    let adj = adjacency_masks(g);
    let vals: Vec<f64> = (0u64..(1 << n))
        .map(|mask| f(edges_in(&adj, mask), mask.count_ones() as usize))
        .collect();
    let best = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let tol = 1e-9 * best.abs().max(1.0);
    let masks = (0u64..(1 << n)).filter(|&m| vals[m as usize] <= best + tol).collect();
    (best, masks)
}

pub fn mask_of(s: &VertexSubset) -> u64 {
    s.to_mask().expect("small universe")
}

pub fn induced_degree(adj: &[u64], mask: u64, v: usize) -> usize {
    (adj[v] & mask).count_ones() as usize
}

/// The acceptance corpus: graph `i` has `n = 6 + i % 9`,
/// `p = [0.25, 0.5, 0.75][(i / 9) % 3]`, seed `CORPUS_SEED + i`.
pub const CORPUS_SEED: u64 = 1000;
pub const CORPUS_SIZE: usize = 200;

pub fn corpus_params(i: usize) -> (usize, f64, u64) {
    (6 + i % 9, [0.25, 0.5, 0.75][(i / 9) % 3], CORPUS_SEED + i as u64)
}

pub fn corpus() -> Vec<Graph> {
    (0..CORPUS_SIZE)
        .map(|i| {
            let (n, p, seed) = corpus_params(i);
            generate_er(n, p, seed).unwrap()
        })
        .collect()
}
