//! Penalty-parameter bounds, Lagrange-multiplier windows and exactness
//! checks for the sparsest-k-subgraph relaxations.
//!
//! Quantities that need `m_k` for every `k` come from an exhaustive
//! cardinality scan ([`spectrum`]), so everything here that takes a
//! [`SpectrumReport`] is exact but limited to small graphs. Window endpoints
//! are exact rationals; emptiness of a window is never a rounding artifact.

use std::collections::BTreeSet;

use num_rational::Rational64;

use crate::error::{Result, SksError};
use crate::graph::{greedy_sparse_subgraph, Graph, VertexSubset};
use crate::qubo::{build_lr, RelaxationParams};
use crate::solvers::{cardinality_profile, exhaustive_minimize, sks_exact};

/// Default offset used when sampling just inside an open interval.
pub const DEFAULT_EPSILON: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumReport {
    /// `m[k]` for `k = 0..=n`.
    pub m: Vec<usize>,
    /// `diff[l - 1] = diff_l` for `l = 1..=n`, with `diff_1 = 0`.
    pub diff: Vec<i64>,
    /// Largest `k` with `m_k = 0`.
    pub alpha: usize,
    pub diff_monotone: bool,
    /// A sparsest `k`-subgraph for each `k`.
    pub witnesses: Vec<VertexSubset>,
}

impl SpectrumReport {
    pub fn from_m(m: Vec<usize>, witnesses: Vec<VertexSubset>) -> Self {
        let n = m.len().saturating_sub(1);
        let diff: Vec<i64> = (1..=n)
            .map(|l| if l == 1 { 0 } else { m[l] as i64 - m[l - 1] as i64 })
            .collect();
        let alpha = (0..=n).rev().find(|&k| m[k] == 0).unwrap_or(0);
        let diff_monotone = diff.windows(2).all(|w| w[0] <= w[1]);
        Self {
            m,
            diff,
            alpha,
            diff_monotone,
            witnesses,
        }
    }

    pub fn n(&self) -> usize {
        self.m.len() - 1
    }

    /// `diff_l` for `1 <= l <= n`.
    pub fn diff_at(&self, l: usize) -> i64 {
        self.diff[l - 1]
    }

    /// `m_k - lambda k`, the best Lagrangian value at cardinality `k`.
    pub fn lagrangian_value(&self, k: usize, lambda: Rational64) -> Rational64 {
        Rational64::from_integer(self.m[k] as i64) - lambda * (k as i64)
    }

    /// Cardinalities whose sparsest subgraphs minimize the Lagrangian at
    /// `lambda`. Computed from the spectrum alone.
    pub fn minimizer_cardinalities(&self, lambda: Rational64) -> Vec<usize> {
        let values: Vec<Rational64> = (0..=self.n()).map(|k| self.lagrangian_value(k, lambda)).collect();
        let best = *values.iter().min().expect("m is never empty");
        (0..=self.n()).filter(|&k| values[k] == best).collect()
    }
}

pub fn spectrum(g: &Graph, limit: usize) -> Result<SpectrumReport> {
    let profile = cardinality_profile(g, limit)?;
    let m = profile.iter().map(|&(e, _)| e).collect();
    let witnesses = profile
        .iter()
        .map(|&(_, mask)| VertexSubset::from_mask(g.n(), mask))
        .collect();
    Ok(SpectrumReport::from_m(m, witnesses))
}

/// A condition `mu/2 > threshold` with an integer threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PenaltyThreshold {
    pub half_mu_above: usize,
}

impl PenaltyThreshold {
    /// Smallest integer `mu` with `mu/2` strictly above the threshold.
    pub fn min_mu(&self) -> usize {
        2 * self.half_mu_above + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiffBound {
    pub threshold: PenaltyThreshold,
    /// The bound only guarantees exactness when `diff` is monotone.
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuBounds {
    pub k: usize,
    /// Edge count of the feasible solution behind `feasible`.
    pub m_tilde: usize,
    /// `mu/2 > m`.
    pub global: PenaltyThreshold,
    /// `mu/2 > m~_k`.
    pub feasible: PenaltyThreshold,
    /// `mu/2 > k - 1`.
    pub cardinality: PenaltyThreshold,
    /// `mu/2 > min(m~_k, k - 1)`.
    pub combined: PenaltyThreshold,
    /// `mu/2 > diff_k`; present only when a spectrum was supplied.
    pub diff_based: Option<DiffBound>,
}

impl MuBounds {
    /// `2 min(m~_k, k-1) + 1`.
    pub fn recommended_mu(&self) -> usize {
        self.combined.min_mu()
    }
}

/// Quadratic-penalty thresholds for target size `k`. `m_tilde` defaults to
/// the greedy sparse subgraph's edge count.
pub fn mu_bounds(
    g: &Graph,
    k: usize,
    m_tilde: Option<usize>,
    spectrum: Option<&SpectrumReport>,
) -> Result<MuBounds> {
    if k == 0 || k > g.n() {
        return Err(SksError::SizeOutOfRange { k, lo: 1, hi: g.n() });
    }
    let m_tilde = match m_tilde {
        Some(v) => v,
        None => greedy_sparse_subgraph(g, k)?.edge_count,
    };
    let t = |v: usize| PenaltyThreshold { half_mu_above: v };
    let diff_based = spectrum.map(|s| DiffBound {
        threshold: t(s.diff_at(k).max(0) as usize),
        valid: s.diff_monotone,
    });
    Ok(MuBounds {
        k,
        m_tilde,
        global: t(g.m()),
        feasible: t(m_tilde),
        cardinality: t(k - 1),
        combined: t(m_tilde.min(k - 1)),
        diff_based,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LambdaWindow {
    pub k: usize,
    pub a_k: Rational64,
    pub b_k: Rational64,
    pub nonempty: bool,
    pub touching: bool,
}

impl LambdaWindow {
    pub fn midpoint(&self) -> Rational64 {
        (self.a_k + self.b_k) / 2
    }
}

pub fn r2f(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `A_k = max_{k' < k} (m_k - m_k')/(k - k')` over `k' = 0..k-1` and
/// `B_k = min_{k' > k} (m_k' - m_k)/(k' - k)`.
pub fn lambda_window(s: &SpectrumReport, k: usize) -> Result<LambdaWindow> {
    let n = s.n();
    if k == 0 || k + 1 > n {
        return Err(SksError::SizeOutOfRange {
            k,
            lo: 1,
            hi: n.saturating_sub(1),
        });
    }
    let mk = s.m[k] as i64;
    let a_k = (0..k)
        .map(|lo| Rational64::new(mk - s.m[lo] as i64, (k - lo) as i64))
        .max()
        .expect("k >= 1");
    let b_k = (k + 1..=n)
        .map(|hi| Rational64::new(s.m[hi] as i64 - mk, (hi - k) as i64))
        .min()
        .expect("k < n");
    if s.diff_monotone {
        assert_eq!(a_k, Rational64::from_integer(s.diff_at(k)), "A_k != diff_k under monotone diff");
        assert_eq!(b_k, Rational64::from_integer(s.diff_at(k + 1)), "B_k != diff_k+1 under monotone diff");
    }
    Ok(LambdaWindow {
        k,
        a_k,
        b_k,
        nonempty: a_k < b_k,
        touching: a_k == b_k,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryWindow {
    pub lambda: Rational64,
    pub k1: usize,
    pub k2: usize,
    /// `None` when no cardinality lies below `k1` (no constraint).
    pub d_minus: Option<Rational64>,
    /// `None` when no cardinality lies above `k2`.
    pub d_plus: Option<Rational64>,
}

/// How far `lambda` can move down (up) before the Lagrangian minimizers stop
/// being exactly the `k1` (`k2`) ones.
pub fn boundary_window(
    s: &SpectrumReport,
    lambda: Rational64,
    k1: usize,
    k2: usize,
) -> Result<BoundaryWindow> {
    let n = s.n();
    if k1 >= k2 || k2 > n {
        return Err(SksError::HypothesisViolated(format!(
            "need k1 < k2 <= n, got k1={k1}, k2={k2}, n={n}"
        )));
    }
    let cards = s.minimizer_cardinalities(lambda);
    if !cards.contains(&k1) || !cards.contains(&k2) {
        return Err(SksError::HypothesisViolated(format!(
            "lambda={lambda} has minimizer cardinalities {cards:?}, not both {k1} and {k2}"
        )));
    }
    let m = |k: usize| s.m[k] as i64;
    let d_minus = (0..k1)
        .map(|k| lambda - Rational64::new(m(k1) - m(k), (k1 - k) as i64))
        .min();
    let d_plus = (k2 + 1..=n)
        .map(|k| Rational64::new(m(k2) - m(k), k2 as i64 - k as i64) - lambda)
        .min();
    for (name, d) in [("d-", d_minus), ("d+", d_plus)] {
        if let Some(d) = d {
            if d <= Rational64::from_integer(0) {
                return Err(SksError::HypothesisViolated(format!(
                    "{name} = {d} is not positive"
                )));
            }
        }
    }
    Ok(BoundaryWindow {
        lambda,
        k1,
        k2,
        d_minus,
        d_plus,
    })
}

/// `(lambda, mu) = ((k-1)/2, k)`, for which the augmented Lagrangian is
/// exact on every graph.
pub fn al_exact_params(k: usize) -> (f64, f64) {
    assert!(k >= 1, "k must be at least 1");
    ((k as f64 - 1.0) / 2.0, k as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Every minimizer has cardinality `k` and `m_k` edges.
    AllFeasibleOptimal,
    /// Some minimizer has the wrong cardinality.
    SomeInfeasible,
    /// A minimizer with cardinality `k` but more than `m_k` edges. Cannot
    /// happen for these relaxations; reported rather than hidden.
    FeasibleButSuboptimal,
}

#[derive(Debug, Clone)]
pub struct ExactnessReport {
    pub verdict: Verdict,
    pub m_k: usize,
    pub minimizer_count: usize,
    pub cardinalities: BTreeSet<usize>,
}

/// Builds the relaxation, enumerates all of its minimizers and compares them
/// with the exact sparsest-k-subgraph value.
pub fn verify_exactness(g: &Graph, params: &RelaxationParams, limit: usize) -> Result<ExactnessReport> {
    let k = params.k;
    let (m_k, _) = sks_exact(g, k, limit)?;
    let model = params.build(g)?;
    let minimizers = exhaustive_minimize(&model, true, limit)?
        .minimizers
        .expect("requested");
    let cardinalities: BTreeSet<usize> = minimizers.iter().map(|x| x.cardinality()).collect();
    let verdict = if cardinalities.iter().any(|&c| c != k) {
        Verdict::SomeInfeasible
    } else if minimizers.iter().any(|x| g.induced_edge_count(x) != m_k) {
        Verdict::FeasibleButSuboptimal
    } else {
        Verdict::AllFeasibleOptimal
    };
    Ok(ExactnessReport {
        verdict,
        m_k,
        minimizer_count: minimizers.len(),
        cardinalities,
    })
}

/// All minimizers of `(1/2) x^T A x - lambda e^T x`.
pub fn lr_minimizers(g: &Graph, lambda: f64, limit: usize) -> Result<Vec<VertexSubset>> {
    let model = build_lr(g, lambda, 0, false);
    Ok(exhaustive_minimize(&model, true, limit)?
        .minimizers
        .expect("requested"))
}

/// Repeatedly drops the smallest-index vertex of induced degree exactly 1.
pub fn strip_degree_one(g: &Graph, s: &VertexSubset) -> VertexSubset {
    let mut s = s.clone();
    loop {
        let next = s.iter().find(|&v| g.induced_degree(v, &s) == 1);
        match next {
            Some(v) => s.remove(v),
            None => return s,
        }
    }
}

fn is_maximum_stable(g: &Graph, x: &VertexSubset, alpha: usize) -> bool {
    x.cardinality() == alpha && g.induced_edge_count(x) == 0
}

#[derive(Debug, Clone)]
pub struct LambdaCheck {
    pub lambda: f64,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct StableSetReport {
    pub alpha: usize,
    /// `lambda` in (0, 1): every Lagrangian minimizer is a maximum stable set.
    pub unit_interval: Vec<LambdaCheck>,
    /// `lambda = 1`: stripping degree-1 vertices from any minimizer leaves a
    /// stable set of size alpha.
    pub lambda_one_ok: bool,
    /// `m_{alpha+1}`, when alpha < n.
    pub m_alpha_plus_1: Option<usize>,
    /// Samples of the widened window `(0, m_{alpha+1})`.
    pub widened: Vec<LambdaCheck>,
    /// Exact upper end `B_alpha` of the window in which maximum stable sets
    /// are the only minimizers; may be below `m_{alpha+1}`.
    pub b_alpha: Option<Rational64>,
}

impl StableSetReport {
    pub fn all_ok(&self) -> bool {
        self.lambda_one_ok
            && self.unit_interval.iter().all(|c| c.ok)
            && self.widened.iter().all(|c| c.ok)
    }
}

/// Checks the maximum-stable-set characterizations of Lagrangian minimizers
/// at `lambda = 0.25, 0.5, 0.75`, at `lambda = 1`, and at `eps`, the
/// midpoint and `m_{alpha+1} - eps` of `(0, m_{alpha+1})`.
pub fn stable_set_checks(g: &Graph, eps: f64, limit: usize) -> Result<StableSetReport> {
    let s = spectrum(g, limit)?;
    let alpha = s.alpha;
    let check = |lambda: f64| -> Result<LambdaCheck> {
        let ok = lr_minimizers(g, lambda, limit)?
            .iter()
            .all(|x| is_maximum_stable(g, x, alpha));
        Ok(LambdaCheck { lambda, ok })
    };
    let unit_interval = [0.25, 0.5, 0.75]
        .into_iter()
        .map(check)
        .collect::<Result<Vec<_>>>()?;

    let lambda_one_ok = lr_minimizers(g, 1.0, limit)?.iter().all(|x| {
        let stripped = strip_degree_one(g, x);
        is_maximum_stable(g, &stripped, alpha)
    });

    let (m_alpha_plus_1, widened, b_alpha) = if alpha < g.n() {
        let top = s.m[alpha + 1];
        let mut samples = vec![eps.min(top as f64 / 2.0), top as f64 / 2.0, top as f64 - eps];
        samples.dedup();
        let widened = samples.into_iter().map(check).collect::<Result<Vec<_>>>()?;
        let b = if alpha >= 1 {
            Some(lambda_window(&s, alpha)?.b_k)
        } else {
            None
        };
        (Some(top), widened, b)
    } else {
        (None, Vec::new(), None)
    };

    Ok(StableSetReport {
        alpha,
        unit_interval,
        lambda_one_ok,
        m_alpha_plus_1,
        widened,
        b_alpha,
    })
}
