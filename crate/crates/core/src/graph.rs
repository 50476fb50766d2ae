//! Simple undirected graphs, vertex subsets, generators, and the max-degree
//! peeling heuristic.
//!
//! Vertices are 0-based inside the crate. Every constructor that takes
//! labels from the outside world (`from_edge_list`, `VertexSubset::from_labels`,
//! the DIMACS reader) uses 1-based labels.
//!
//! Random generators use ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`),
//! which produces the same stream on every platform. Pairs `{i, j}` with
//! `i < j` are visited in lexicographic order and each consumes exactly one
//! uniform `f64` draw, so a graph is a pure function of its parameters and
//! seed.

use std::fmt;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, SksError};

/// A set of vertices of a host graph; equivalently an incidence vector in
/// `{0,1}^n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSubset {
    bits: FixedBitSet,
}

impl VertexSubset {
    pub fn empty(n: usize) -> Self {
        Self {
            bits: FixedBitSet::with_capacity(n),
        }
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        Self { bits }
    }

    /// Builds a subset from 0-based vertex indices.
    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::empty(n);
        for v in indices {
            if v >= n {
                return Err(SksError::VertexOutOfRange { vertex: v + 1, n });
            }
            s.bits.insert(v);
        }
        Ok(s)
    }

    /// Builds a subset from 1-based vertex labels.
    pub fn from_labels(n: usize, labels: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::empty(n);
        for l in labels {
            if l == 0 || l > n {
                return Err(SksError::VertexOutOfRange { vertex: l, n });
            }
            s.bits.insert(l - 1);
        }
        Ok(s)
    }

    /// Low `n` bits of `mask` are the incidence vector (bit `i` is vertex `i`).
    pub fn from_mask(n: usize, mask: u64) -> Self {
        debug_assert!(n <= 64);
        let mut s = Self::empty(n);
        for v in 0..n {
            if mask >> v & 1 == 1 {
                s.bits.insert(v);
            }
        }
        s
    }

    pub fn to_mask(&self) -> Option<u64> {
        if self.universe() > 64 {
            return None;
        }
        Some(self.bits.ones().fold(0u64, |acc, v| acc | 1 << v))
    }

    pub fn from_bools(x: &[bool]) -> Self {
        let mut s = Self::empty(x.len());
        for (v, &b) in x.iter().enumerate() {
            s.bits.set(v, b);
        }
        s
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.universe()).map(|v| self.bits.contains(v)).collect()
    }

    /// Size of the host vertex set.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn cardinality(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.bits.contains(v)
    }

    pub fn insert(&mut self, v: usize) {
        self.bits.insert(v);
    }

    pub fn remove(&mut self, v: usize) {
        self.bits.set(v, false);
    }

    /// Members as 0-based indices, ascending.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    /// Members as 1-based labels, ascending.
    pub fn labels(&self) -> Vec<usize> {
        self.bits.ones().map(|v| v + 1).collect()
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }
}

impl fmt::Debug for VertexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VertexSubset{:?}", self.labels())
    }
}

impl fmt::Display for VertexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.labels().iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

/// Simple undirected graph on vertices `0..n`.
///
/// The edge list is sorted and deduplicated with `i < j` in every pair, and
/// each vertex carries a bitset of its neighbours.
#[derive(Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<FixedBitSet>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("m", &self.m())
            .finish()
    }
}

impl Graph {
    /// Builds a graph from 1-based endpoint pairs. Orientation and duplicates
    /// collapse; self-loops and out-of-range endpoints are errors.
    pub fn from_edge_list(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut zero_based = Vec::with_capacity(pairs.len());
        for &(i, j) in pairs {
            for v in [i, j] {
                if v == 0 || v > n {
                    return Err(SksError::VertexOutOfRange { vertex: v, n });
                }
            }
            if i == j {
                return Err(SksError::SelfLoop(i));
            }
            zero_based.push((i - 1, j - 1));
        }
        Ok(Self::from_zero_based(n, zero_based))
    }

    /// Internal constructor; callers guarantee `i != j` and both `< n`.
    pub(crate) fn from_zero_based(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut edges: Vec<(usize, usize)> = pairs
            .into_iter()
            .map(|(i, j)| if i < j { (i, j) } else { (j, i) })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        let mut adj = vec![FixedBitSet::with_capacity(n); n];
        for &(i, j) in &edges {
            adj[i].insert(j);
            adj[j].insert(i);
        }
        Self { n, edges, adj }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_zero_based(n, std::iter::empty())
    }

    pub fn complete(n: usize) -> Self {
        Self::from_zero_based(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
    }

    /// Path `1 - 2 - ... - n`.
    pub fn path(n: usize) -> Self {
        Self::from_zero_based(n, (1..n).map(|i| (i - 1, i)))
    }

    /// Cycle `1 - 2 - ... - n - 1`; needs `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        Self::from_zero_based(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// Star with centre vertex 1 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Self::from_zero_based(leaves + 1, (1..=leaves).map(|j| (0, j)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Sorted 0-based edges with `i < j`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &FixedBitSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones(..)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(j)
    }

    pub fn complement(&self) -> Self {
        let pairs = (0..self.n)
            .flat_map(|i| (i + 1..self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.adj[i].contains(j));
        Self::from_zero_based(self.n, pairs)
    }

    /// Number of edges with both endpoints in `s`.
    pub fn induced_edge_count(&self, s: &VertexSubset) -> usize {
        let twice: usize = s
            .iter()
            .map(|v| self.adj[v].intersection_count(s.bits()))
            .sum();
        twice / 2
    }

    /// Degree of `v` inside the subgraph induced by `s`.
    pub fn induced_degree(&self, v: usize, s: &VertexSubset) -> usize {
        self.adj[v].intersection_count(s.bits())
    }

    /// Maximum degree of the induced subgraph; 0 for the empty set.
    pub fn max_induced_degree(&self, s: &VertexSubset) -> usize {
        s.iter().map(|v| self.induced_degree(v, s)).max().unwrap_or(0)
    }

    /// Dense 0/1 adjacency matrix, materialized on request.
    pub fn dense_adjacency(&self) -> Vec<Vec<u8>> {
        let mut a = vec![vec![0u8; self.n]; self.n];
        for &(i, j) in &self.edges {
            a[i][j] = 1;
            a[j][i] = 1;
        }
        a
    }

    /// Subgraph induced by `s`, relabelled `0..|s|` in ascending order.
    pub fn induced_subgraph(&self, s: &VertexSubset) -> Self {
        let mut new_index = vec![usize::MAX; self.n];
        for (idx, v) in s.iter().enumerate() {
            new_index[v] = idx;
        }
        let pairs = self
            .edges
            .iter()
            .filter(|&&(i, j)| s.contains(i) && s.contains(j))
            .map(|&(i, j)| (new_index[i], new_index[j]));
        Self::from_zero_based(s.cardinality(), pairs)
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(SksError::InvalidProbability(p))
    }
}

/// Erdős–Rényi `G(n, p)`.
pub fn generate_er(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_probability(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < p {
                pairs.push((i, j));
            }
        }
    }
    Ok(Graph::from_zero_based(n, pairs))
}

/// Random bipartite graph with sides `1..=a` and `a+1..=a+b`; only
/// cross pairs are sampled.
pub fn generate_bipartite(a: usize, b: usize, p: f64, seed: u64) -> Result<Graph> {
    check_probability(p)?;
    if a == 0 || b == 0 {
        return Err(SksError::InvalidParameter(format!(
            "bipartite sides must be non-empty, got {a} and {b}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for i in 0..a {
        for j in a..a + b {
            if rng.gen::<f64>() < p {
                pairs.push((i, j));
            }
        }
    }
    Ok(Graph::from_zero_based(a + b, pairs))
}

/// Outcome of the greedy sparse-subgraph heuristic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyResult {
    pub subset: VertexSubset,
    /// Induced edge count of `subset`.
    pub edge_count: usize,
    /// Maximum degree inside the induced subgraph.
    pub max_degree_inside: usize,
}

/// Shrinks `start` to `k` vertices by repeatedly deleting a vertex of maximum
/// degree in the current induced subgraph, smallest index first on ties.
pub(crate) fn peel_max_degree(g: &Graph, start: &VertexSubset, k: usize) -> VertexSubset {
    let mut s = start.clone();
    let mut deg: Vec<usize> = (0..g.n()).map(|v| g.induced_degree(v, &s)).collect();
    let mut size = s.cardinality();
    while size > k {
        let mut victim = None;
        let mut best = 0usize;
        for v in s.iter() {
            if victim.is_none() || deg[v] > best {
                victim = Some(v);
                best = deg[v];
            }
        }
        let v = victim.expect("non-empty subset");
        s.remove(v);
        for u in g.neighbors(v).ones() {
            deg[u] -= 1;
        }
        size -= 1;
    }
    s
}

pub fn greedy_sparse_subgraph(g: &Graph, k: usize) -> Result<GreedyResult> {
    if k == 0 || k > g.n() {
        return Err(SksError::SizeOutOfRange { k, lo: 1, hi: g.n() });
    }
    let subset = peel_max_degree(g, &VertexSubset::full(g.n()), k);
    Ok(GreedyResult {
        edge_count: g.induced_edge_count(&subset),
        max_degree_inside: g.max_induced_degree(&subset),
        subset,
    })
}

/// Peels `g` down to `target_n` vertices and relabels the survivors
/// `1..=target_n`, preserving their order.
pub fn extract_subgraph_by_degree(g: &Graph, target_n: usize) -> Result<Graph> {
    if target_n > g.n() {
        return Err(SksError::SizeOutOfRange {
            k: target_n,
            lo: 0,
            hi: g.n(),
        });
    }
    let keep = peel_max_degree(g, &VertexSubset::full(g.n()), target_n);
    Ok(g.induced_subgraph(&keep))
}
