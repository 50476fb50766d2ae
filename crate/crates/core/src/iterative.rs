//! Penalty- and multiplier-update loops around a QUBO solver.
//!
//! Each loop rebuilds the relaxation with the current parameters, asks the
//! solver for a minimizer and adjusts the parameters from the cardinality it
//! got back. Solve `t` (0-based) uses seed `cfg.seed + t`.

use crate::error::{Result, SksError};
use crate::graph::{greedy_sparse_subgraph, peel_max_degree, Graph, VertexSubset};
use crate::qubo::{build_al, build_lr, build_qp};
use crate::solvers::QuboSolver;

#[derive(Debug, Clone, PartialEq)]
pub struct IterativeConfig {
    pub max_iters: usize,
    /// Step size of the multiplier update in [`lria`].
    pub phi: f64,
    /// Growth factor of `mu` in [`alia`].
    pub rho: f64,
    pub mu_init_alia: f64,
    pub seed: u64,
    /// Replaces the greedy max-degree starting multiplier of LRIA and ALIA.
    pub lambda_init: Option<f64>,
    /// Replaces `2 min(m~, k-1) + 1` in QPIA.
    pub mu_init_qpia: Option<f64>,
}

impl Default for IterativeConfig {
    fn default() -> Self {
        Self {
            max_iters: 100,
            phi: 0.1,
            rho: 1.1,
            mu_init_alia: 0.1,
            seed: 0,
            lambda_init: None,
            mu_init_qpia: None,
        }
    }
}

impl IterativeConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(SksError::InvalidParameter(msg));
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1".into());
        }
        if !(self.phi > 0.0 && self.phi.is_finite()) {
            return bad(format!("phi must be positive, got {}", self.phi));
        }
        if !(self.rho > 1.0 && self.rho.is_finite()) {
            return bad(format!("rho must exceed 1, got {}", self.rho));
        }
        if !(self.mu_init_alia > 0.0 && self.mu_init_alia.is_finite()) {
            return bad(format!("mu_init_alia must be positive, got {}", self.mu_init_alia));
        }
        if let Some(mu) = self.mu_init_qpia {
            if !(mu > 0.0 && mu.is_finite()) {
                return Err(SksError::NonPositiveMu(mu));
            }
        }
        if let Some(l) = self.lambda_init {
            if !l.is_finite() {
                return bad(format!("lambda_init must be finite, got {l}"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Qpia,
    Lria,
    Alia,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Self::Qpia => "qpia",
            Self::Lria => "lria",
            Self::Alia => "alia",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = SksError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "qpia" => Ok(Self::Qpia),
            "lria" => Ok(Self::Lria),
            "alia" => Ok(Self::Alia),
            _ => Err(SksError::InvalidParameter(format!("unknown method {s:?}"))),
        }
    }
}

/// A vertex subset with its induced edge count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub subset: VertexSubset,
    pub edge_count: usize,
}

impl Subgraph {
    pub fn of(g: &Graph, subset: VertexSubset) -> Self {
        Self {
            edge_count: g.induced_edge_count(&subset),
            subset,
        }
    }

    pub fn cardinality(&self) -> usize {
        self.subset.cardinality()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    /// 1-based.
    pub iter: usize,
    pub mu: Option<f64>,
    pub lambda: Option<f64>,
    /// Solver objective value.
    pub value: f64,
    pub cardinality: usize,
    /// Induced edge count of the returned assignment.
    pub edges: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub method: Method,
    pub k: usize,
    pub records: Vec<IterationRecord>,
    /// Cardinality-`k` subgraph, or `None` when the loop produced none.
    pub final_subgraph: Option<Subgraph>,
    /// LRIA: smallest cardinality `>= k` seen. QPIA and ALIA: the cardinality
    /// closest to `k` seen (earliest on ties).
    pub best_k_reached: Option<usize>,
    pub refined: bool,
}

impl IterationTrace {
    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    pub fn k_first_iter(&self) -> Option<usize> {
        self.records.first().map(|r| r.cardinality)
    }

    /// Parameters used by the last solve.
    pub fn mu_final(&self) -> Option<f64> {
        self.records.last().and_then(|r| r.mu)
    }

    pub fn lambda_final(&self) -> Option<f64> {
        self.records.last().and_then(|r| r.lambda)
    }

    /// Edge count of the final subgraph.
    pub fn value(&self) -> Option<usize> {
        self.final_subgraph.as_ref().map(|s| s.edge_count)
    }
}

fn check_k(g: &Graph, k: usize) -> Result<()> {
    if k == 0 || k > g.n() {
        Err(SksError::SizeOutOfRange { k, lo: 1, hi: g.n() })
    } else {
        Ok(())
    }
}

fn greedy_lambda(g: &Graph, k: usize) -> Result<f64> {
    Ok(greedy_sparse_subgraph(g, k)?.max_degree_inside as f64)
}

fn closest(best: Option<usize>, c: usize, k: usize) -> Option<usize> {
    match best {
        Some(b) if b.abs_diff(k) <= c.abs_diff(k) => Some(b),
        _ => Some(c),
    }
}

/// Shrinks `s` to `k` vertices, always dropping a vertex of maximum degree
/// in the current induced subgraph (smallest index on ties).
pub fn greedy_refine(g: &Graph, s: &VertexSubset, k: usize) -> Result<VertexSubset> {
    if s.universe() != g.n() {
        return Err(SksError::DimensionMismatch {
            expected: g.n(),
            found: s.universe(),
        });
    }
    if s.cardinality() < k {
        return Err(SksError::SizeOutOfRange {
            k,
            lo: 0,
            hi: s.cardinality(),
        });
    }
    Ok(peel_max_degree(g, s, k))
}

/// Quadratic penalty loop: `mu += 1` until the minimizer has `k` vertices.
pub fn qpia<S: QuboSolver + ?Sized>(
    g: &Graph,
    k: usize,
    solver: &S,
    cfg: &IterativeConfig,
) -> Result<IterationTrace> {
    check_k(g, k)?;
    cfg.validate()?;
    let mut mu = match cfg.mu_init_qpia {
        Some(mu) => mu,
        None => {
            let m_tilde = greedy_sparse_subgraph(g, k)?.edge_count;
            (2 * m_tilde.min(k - 1) + 1) as f64
        }
    };
    let mut trace = IterationTrace {
        method: Method::Qpia,
        k,
        records: Vec::new(),
        final_subgraph: None,
        best_k_reached: None,
        refined: false,
    };
    for t in 0..cfg.max_iters {
        let model = build_qp(g, k, mu)?;
        let out = solver.minimize(&model, cfg.seed.wrapping_add(t as u64))?;
        let sub = Subgraph::of(g, out.x);
        trace.records.push(IterationRecord {
            iter: t + 1,
            mu: Some(mu),
            lambda: None,
            value: out.value,
            cardinality: out.cardinality,
            edges: sub.edge_count,
        });
        trace.best_k_reached = closest(trace.best_k_reached, out.cardinality, k);
        if out.cardinality == k {
            trace.final_subgraph = Some(sub);
            break;
        }
        mu += 1.0;
    }
    Ok(trace)
}

/// Lagrangian loop: `lambda += phi (k - k_c)`, keeping the smallest
/// over-size solution as a fallback for greedy refinement.
pub fn lria<S: QuboSolver + ?Sized>(
    g: &Graph,
    k: usize,
    solver: &S,
    cfg: &IterativeConfig,
) -> Result<IterationTrace> {
    check_k(g, k)?;
    cfg.validate()?;
    let mut lambda = match cfg.lambda_init {
        Some(l) => l,
        None => greedy_lambda(g, k)?,
    };
    let mut trace = IterationTrace {
        method: Method::Lria,
        k,
        records: Vec::new(),
        final_subgraph: None,
        best_k_reached: None,
        refined: false,
    };
    let mut best: Option<Subgraph> = None;
    for t in 0..cfg.max_iters {
        let model = build_lr(g, lambda, k, true);
        let out = solver.minimize(&model, cfg.seed.wrapping_add(t as u64))?;
        let kc = out.cardinality;
        let sub = Subgraph::of(g, out.x);
        trace.records.push(IterationRecord {
            iter: t + 1,
            mu: None,
            lambda: Some(lambda),
            value: out.value,
            cardinality: kc,
            edges: sub.edge_count,
        });
        if kc == k {
            trace.best_k_reached = Some(k);
            trace.final_subgraph = Some(sub);
            return Ok(trace);
        }
        if kc > k {
            let better = match &best {
                None => true,
                Some(b) => (kc, sub.edge_count) < (b.cardinality(), b.edge_count),
            };
            if better {
                trace.best_k_reached = Some(kc);
                best = Some(sub);
            }
        }
        lambda += cfg.phi * (k as f64 - kc as f64);
    }
    if let Some(b) = best {
        let refined = greedy_refine(g, &b.subset, k)?;
        trace.final_subgraph = Some(Subgraph::of(g, refined));
        trace.refined = true;
    }
    Ok(trace)
}

/// Augmented Lagrangian loop: `lambda += mu (k - e^T x)` on infeasible
/// iterations, `mu *= rho` after every solve.
pub fn alia<S: QuboSolver + ?Sized>(
    g: &Graph,
    k: usize,
    solver: &S,
    cfg: &IterativeConfig,
) -> Result<IterationTrace> {
    check_k(g, k)?;
    cfg.validate()?;
    let mut lambda = match cfg.lambda_init {
        Some(l) => l,
        None => greedy_lambda(g, k)?,
    };
    let mut mu = cfg.mu_init_alia;
    let mut trace = IterationTrace {
        method: Method::Alia,
        k,
        records: Vec::new(),
        final_subgraph: None,
        best_k_reached: None,
        refined: false,
    };
    for t in 0..cfg.max_iters {
        let model = build_al(g, k, lambda, mu)?;
        let out = solver.minimize(&model, cfg.seed.wrapping_add(t as u64))?;
        let kc = out.cardinality;
        let sub = Subgraph::of(g, out.x);
        trace.records.push(IterationRecord {
            iter: t + 1,
            mu: Some(mu),
            lambda: Some(lambda),
            value: out.value,
            cardinality: kc,
            edges: sub.edge_count,
        });
        trace.best_k_reached = closest(trace.best_k_reached, kc, k);
        if kc == k {
            trace.final_subgraph = Some(sub);
            break;
        }
        lambda += mu * (k as f64 - kc as f64);
        mu *= cfg.rho;
    }
    Ok(trace)
}

pub fn run_method<S: QuboSolver + ?Sized>(
    method: Method,
    g: &Graph,
    k: usize,
    solver: &S,
    cfg: &IterativeConfig,
) -> Result<IterationTrace> {
    match method {
        Method::Qpia => qpia(g, k, solver, cfg),
        Method::Lria => lria(g, k, solver, cfg),
        Method::Alia => alia(g, k, solver, cfg),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensestResult {
    /// Trace of the sparsest search on the complement.
    pub trace: IterationTrace,
    /// `k(k-1)/2` minus the complement edges of the final subgraph.
    pub densest_value: Option<usize>,
}

/// Densest `k`-subgraph by running `method` on the complement graph.
pub fn densest_k<S: QuboSolver + ?Sized>(
    g: &Graph,
    k: usize,
    method: Method,
    solver: &S,
    cfg: &IterativeConfig,
) -> Result<DensestResult> {
    let trace = run_method(method, &g.complement(), k, solver, cfg)?;
    let densest_value = trace.value().map(|e| k * (k - 1) / 2 - e);
    Ok(DensestResult {
        trace,
        densest_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate_er;
    use crate::qubo::QuboModel;
    use crate::solvers::{SaParams, SolveOutcome, SolverChoice};

    fn oracle() -> SolverChoice {
        SolverChoice::oracle()
    }

    #[test]
    fn qpia_examples() {
        let cfg = IterativeConfig::default();
        let t = qpia(&Graph::empty(6), 3, &oracle(), &cfg).unwrap();
        assert_eq!(t.iterations(), 1);
        assert_eq!(t.value(), Some(0));

        let t = qpia(&Graph::complete(4), 2, &oracle(), &cfg).unwrap();
        assert_eq!(t.iterations(), 1);
        assert_eq!(t.value(), Some(1));
        assert_eq!(t.mu_final(), Some(3.0));
        assert!(!t.refined);

        assert!(qpia(&Graph::complete(4), 0, &oracle(), &cfg).is_err());
        assert!(qpia(&Graph::complete(4), 5, &oracle(), &cfg).is_err());
    }

    #[test]
    fn qpia_increments_mu_until_feasible() {
        // Tiny mu makes the empty set optimal for a while on K4 with k = 2.
        let cfg = IterativeConfig {
            mu_init_qpia: Some(0.25),
            max_iters: 10,
            ..Default::default()
        };
        let t = qpia(&Graph::complete(4), 2, &oracle(), &cfg).unwrap();
        assert!(t.iterations() > 1);
        let mus: Vec<f64> = t.records.iter().map(|r| r.mu.unwrap()).collect();
        for w in mus.windows(2) {
            assert_eq!(w[1], w[0] + 1.0);
        }
        assert_eq!(t.value(), Some(1));
    }

    #[test]
    fn alia_examples() {
        let cfg = IterativeConfig::default();
        let t = alia(&Graph::complete(5), 3, &oracle(), &cfg).unwrap();
        assert_eq!(t.iterations(), 1);
        assert_eq!(t.value(), Some(3));
        assert_eq!(t.mu_final(), Some(0.1));
    }

    #[test]
    fn alia_mu_grows_every_iteration() {
        let g = generate_er(10, 0.5, 2).unwrap();
        let cfg = IterativeConfig {
            lambda_init: Some(-3.0),
            ..Default::default()
        };
        let t = alia(&g, 5, &oracle(), &cfg).unwrap();
        assert!(t.iterations() > 1);
        for w in t.records.windows(2) {
            let (a, b) = (w[0].mu.unwrap(), w[1].mu.unwrap());
            assert!((b - a * 1.1).abs() < 1e-12);
        }
    }

    #[test]
    fn lria_on_k4() {
        let t = lria(&Graph::complete(4), 2, &oracle(), &IterativeConfig::default()).unwrap();
        let f = t.final_subgraph.unwrap();
        assert_eq!(f.cardinality(), 2);
        assert_eq!(f.edge_count, 1);
    }

    #[test]
    fn lria_negative_lambda_gives_empty_set_then_recovers() {
        let g = Graph::complete(5);
        let cfg = IterativeConfig {
            lambda_init: Some(-1.0),
            ..Default::default()
        };
        let t = lria(&g, 3, &oracle(), &cfg).unwrap();
        assert_eq!(t.records[0].cardinality, 0);
        let f = t.final_subgraph.unwrap();
        assert_eq!(f.cardinality(), 3);
        assert_eq!(f.edge_count, 3);
    }

    #[test]
    fn lria_refines_or_reports_absent() {
        // K4 has minimizers of cardinality 2 only on lambda in [1, 2]; a huge
        // step skips over it.
        let g = Graph::complete(4);
        let cfg = IterativeConfig {
            lambda_init: Some(10.0),
            phi: 7.0,
            max_iters: 3,
            ..Default::default()
        };
        let t = lria(&g, 2, &oracle(), &cfg).unwrap();
        assert!(t.records.iter().all(|r| r.cardinality != 2));
        assert!(t.refined);
        let f = t.final_subgraph.unwrap();
        assert_eq!((f.cardinality(), f.edge_count), (2, 1));

        let cfg = IterativeConfig {
            lambda_init: Some(-5.0),
            max_iters: 2,
            ..Default::default()
        };
        let t = lria(&g, 2, &oracle(), &cfg).unwrap();
        assert!(t.final_subgraph.is_none());
        assert!(!t.refined);
        assert_eq!(t.best_k_reached, None);
    }

    #[test]
    fn greedy_refine_examples() {
        let c5 = Graph::cycle(5);
        let s = greedy_refine(&c5, &VertexSubset::full(5), 2).unwrap();
        assert_eq!(s.cardinality(), 2);
        assert_eq!(c5.induced_edge_count(&s), 0);

        let k4 = Graph::complete(4);
        let s = greedy_refine(&k4, &VertexSubset::full(4), 2).unwrap();
        assert_eq!(s.labels(), vec![3, 4]);

        let same = VertexSubset::from_labels(5, [1, 3]).unwrap();
        assert_eq!(greedy_refine(&c5, &same, 2).unwrap(), same);
        assert!(greedy_refine(&c5, &same, 3).is_err());
    }

    #[test]
    fn densest_examples() {
        let cfg = IterativeConfig::default();
        for m in [Method::Qpia, Method::Lria, Method::Alia] {
            let r = densest_k(&Graph::complete(4), 3, m, &oracle(), &cfg).unwrap();
            assert_eq!(r.densest_value, Some(3));
            let r = densest_k(&Graph::empty(5), 3, m, &oracle(), &cfg).unwrap();
            assert_eq!(r.densest_value, Some(0));
        }
    }

    #[test]
    fn seeds_advance_per_iteration() {
        let seen = std::cell::RefCell::new(Vec::new());
        let solver = |m: &QuboModel, seed: u64| -> Result<SolveOutcome> {
            seen.borrow_mut().push(seed);
            // Always infeasible: the empty set.
            let x = VertexSubset::empty(m.dim());
            Ok(SolveOutcome {
                value: m.evaluate(&x)?,
                cardinality: 0,
                x,
                is_proven_optimal: false,
                minimizer_count: None,
                runtime: Default::default(),
            })
        };
        let cfg = IterativeConfig {
            seed: 40,
            max_iters: 4,
            ..Default::default()
        };
        let t = qpia(&Graph::path(4), 2, &solver, &cfg).unwrap();
        assert_eq!(t.iterations(), 4);
        assert!(t.final_subgraph.is_none());
        assert_eq!(*seen.borrow(), vec![40, 41, 42, 43]);
    }

    #[test]
    fn sa_backend_is_deterministic() {
        let g = generate_er(12, 0.5, 9).unwrap();
        let solver = SolverChoice::Sa(SaParams {
            reads: 10,
            sweeps: 200,
            ..Default::default()
        });
        let cfg = IterativeConfig {
            seed: 3,
            ..Default::default()
        };
        for m in [Method::Qpia, Method::Lria, Method::Alia] {
            let a = run_method(m, &g, 6, &solver, &cfg).unwrap();
            let b = run_method(m, &g, 6, &solver, &cfg).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn config_validation() {
        for bad in [
            IterativeConfig { max_iters: 0, ..Default::default() },
            IterativeConfig { phi: 0.0, ..Default::default() },
            IterativeConfig { rho: 1.0, ..Default::default() },
            IterativeConfig { mu_init_alia: -1.0, ..Default::default() },
        ] {
            assert!(bad.validate().is_err());
            assert!(alia(&Graph::complete(3), 2, &oracle(), &bad).is_err());
        }
    }
}
