//! QUBO models and the three relaxations of the sparsest-k-subgraph problem.
//!
//! A model evaluates `x^T Q x + c^T x + offset` with `Q` symmetric. Builders
//! keep the linear part in `c` and never fold it into the diagonal, and the
//! constant terms stay in `offset`, so a feasible assignment evaluates to its
//! induced edge count.

use std::fmt::Write as _;
use std::io::Write;

use crate::error::{Result, SksError};
use crate::graph::{Graph, VertexSubset};

#[derive(Debug, Clone, PartialEq)]
pub struct QuboModel {
    dim: usize,
    /// Row-major symmetric `dim x dim` matrix.
    quad: Vec<f64>,
    linear: Vec<f64>,
    offset: f64,
}

impl QuboModel {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            quad: vec![0.0; dim * dim],
            linear: vec![0.0; dim],
            offset: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn quad(&self, i: usize, j: usize) -> f64 {
        self.quad[i * self.dim + j]
    }

    pub fn linear(&self) -> &[f64] {
        &self.linear
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Adds `w` to both `Q[i][j]` and `Q[j][i]` (once on the diagonal).
    pub fn add_quad(&mut self, i: usize, j: usize, w: f64) {
        self.quad[i * self.dim + j] += w;
        if i != j {
            self.quad[j * self.dim + i] += w;
        }
    }

    pub fn add_linear(&mut self, i: usize, w: f64) {
        self.linear[i] += w;
    }

    pub fn add_offset(&mut self, w: f64) {
        self.offset += w;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.quad[i * self.dim..(i + 1) * self.dim]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.quad(i, j) == self.quad(j, i)))
    }

    pub fn evaluate(&self, x: &VertexSubset) -> Result<f64> {
        if x.universe() != self.dim {
            return Err(SksError::DimensionMismatch {
                expected: self.dim,
                found: x.universe(),
            });
        }
        Ok(self.evaluate_bools(&x.to_bools()))
    }

    pub fn evaluate_bools(&self, x: &[bool]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        let ones: Vec<usize> = (0..self.dim).filter(|&i| x[i]).collect();
        let mut value = self.offset;
        for &i in &ones {
            value += self.linear[i];
            let row = self.row(i);
            for &j in &ones {
                value += row[j];
            }
        }
        value
    }

    /// Text export: `qubo <n>`, then `q i j coeff` for nonzero upper-triangle
    /// entries of the symmetric matrix (an off-diagonal entry contributes
    /// `2*coeff*x_i*x_j`), `l i coeff` for linear terms and `o coeff`.
    /// Indices are 1-based.
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(self.to_text().as_bytes())?;
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "qubo {}", self.dim);
        for i in 0..self.dim {
            for j in i..self.dim {
                let w = self.quad(i, j);
                if w != 0.0 {
                    let _ = writeln!(s, "q {} {} {}", i + 1, j + 1, w);
                }
            }
        }
        for (i, &w) in self.linear.iter().enumerate() {
            if w != 0.0 {
                let _ = writeln!(s, "l {} {}", i + 1, w);
            }
        }
        let _ = writeln!(s, "o {}", self.offset);
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelaxationKind {
    /// Quadratic penalty.
    Qp,
    /// Lagrangian relaxation.
    Lr,
    /// Augmented Lagrangian.
    Al,
}

impl RelaxationKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Qp => "qp",
            Self::Lr => "lr",
            Self::Al => "al",
        }
    }
}

impl std::str::FromStr for RelaxationKind {
    type Err = SksError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "qp" => Ok(Self::Qp),
            "lr" => Ok(Self::Lr),
            "al" => Ok(Self::Al),
            _ => Err(SksError::InvalidParameter(format!("unknown relaxation {s:?}"))),
        }
    }
}

/// Relaxation kind plus its parameters. `mu` is ignored by `Lr`, `lambda` by
/// `Qp`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxationParams {
    pub kind: RelaxationKind,
    pub k: usize,
    pub mu: f64,
    pub lambda: f64,
}

impl RelaxationParams {
    pub fn qp(k: usize, mu: f64) -> Self {
        Self {
            kind: RelaxationKind::Qp,
            k,
            mu,
            lambda: 0.0,
        }
    }

    pub fn lr(k: usize, lambda: f64) -> Self {
        Self {
            kind: RelaxationKind::Lr,
            k,
            mu: 0.0,
            lambda,
        }
    }

    pub fn al(k: usize, lambda: f64, mu: f64) -> Self {
        Self {
            kind: RelaxationKind::Al,
            k,
            mu,
            lambda,
        }
    }

    /// The LR model always carries the `lambda*k` offset here.
    pub fn build(&self, g: &Graph) -> Result<QuboModel> {
        match self.kind {
            RelaxationKind::Qp => build_qp(g, self.k, self.mu),
            RelaxationKind::Lr => Ok(build_lr(g, self.lambda, self.k, true)),
            RelaxationKind::Al => build_al(g, self.k, self.lambda, self.mu),
        }
    }

    /// Objective computed straight from the graph, without a coefficient
    /// matrix.
    pub fn objective_on_graph(&self, g: &Graph, x: &VertexSubset) -> f64 {
        let edges = g.induced_edge_count(x) as f64;
        let dev = x.cardinality() as f64 - self.k as f64;
        match self.kind {
            RelaxationKind::Qp => edges + 0.5 * self.mu * dev * dev,
            RelaxationKind::Lr => edges - self.lambda * dev,
            RelaxationKind::Al => edges - self.lambda * dev + 0.5 * self.mu * dev * dev,
        }
    }
}

fn add_edges(model: &mut QuboModel, g: &Graph) {
    // (1/2) x^T A x: each edge puts 1/2 in both symmetric slots.
    for &(i, j) in g.edges() {
        model.add_quad(i, j, 0.5);
    }
}

/// `(mu/2)(e^T x - k)^2 = (mu/2) x^T (e e^T) x - mu k e^T x + (mu/2) k^2`.
fn add_cardinality_penalty(model: &mut QuboModel, k: usize, mu: f64) {
    let n = model.dim();
    let half = 0.5 * mu;
    for i in 0..n {
        for j in i..n {
            model.add_quad(i, j, half);
        }
        model.add_linear(i, -mu * k as f64);
    }
    model.add_offset(half * (k * k) as f64);
}

fn check_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && mu.is_finite() {
        Ok(())
    } else {
        Err(SksError::NonPositiveMu(mu))
    }
}

fn check_k(g: &Graph, k: usize) -> Result<()> {
    if k > g.n() {
        Err(SksError::SizeOutOfRange { k, lo: 0, hi: g.n() })
    } else {
        Ok(())
    }
}

/// `(1/2) x^T A x + (mu/2)(e^T x - k)^2`.
pub fn build_qp(g: &Graph, k: usize, mu: f64) -> Result<QuboModel> {
    check_mu(mu)?;
    check_k(g, k)?;
    let mut model = QuboModel::zero(g.n());
    add_edges(&mut model, g);
    add_cardinality_penalty(&mut model, k, mu);
    Ok(model)
}

/// `(1/2) x^T A x - lambda e^T x`, plus `lambda*k` when `with_offset`.
pub fn build_lr(g: &Graph, lambda: f64, k: usize, with_offset: bool) -> QuboModel {
    let mut model = QuboModel::zero(g.n());
    add_edges(&mut model, g);
    for i in 0..g.n() {
        model.add_linear(i, -lambda);
    }
    if with_offset {
        model.add_offset(lambda * k as f64);
    }
    model
}

/// `(1/2) x^T A x + lambda (k - e^T x) + (mu/2)(e^T x - k)^2`.
pub fn build_al(g: &Graph, k: usize, lambda: f64, mu: f64) -> Result<QuboModel> {
    check_mu(mu)?;
    check_k(g, k)?;
    let mut model = build_lr(g, lambda, k, true);
    add_cardinality_penalty(&mut model, k, mu);
    Ok(model)
}
