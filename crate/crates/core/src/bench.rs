//! Manifest-driven batch runs.
//!
//! A manifest is a TOML file with an optional `[settings]` table and a list
//! of `[[job]]` tables. Every job is resolved (graph loaded or generated,
//! parameters checked) before any of them runs; a bad job rejects the whole
//! manifest. Jobs then run in parallel and rows come back in manifest order.
//!
//! ```toml
//! [settings]
//! exhaustive_limit = 20
//!
//! [[job]]
//! generator = { kind = "er", n = 12, p = 0.5, seed = 1 }
//! k = 5
//! method = "alia"
//! solver = "oracle"
//!
//! [[job]]
//! instance = "graphs/host.dimacs"   # relative to the manifest
//! k = 10
//! sense = "densest"
//! method = "qpia"
//! seed = 3
//! optimum = 29
//! overrides = { sa_reads = 20 }
//! ```

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SksError};
use crate::graph::{generate_bipartite, generate_er, greedy_sparse_subgraph, Graph};
use crate::io::load_graph;
use crate::iterative::{densest_k, run_method, IterationTrace, IterativeConfig, Method};
use crate::solvers::{sks_exact, SaParams, SolverChoice, DEFAULT_EXHAUSTIVE_LIMIT};
use crate::theory::{lambda_window, mu_bounds, r2f, spectrum};

pub const ENV_EXHAUSTIVE_LIMIT: &str = "SKS_EXHAUSTIVE_LIMIT";
pub const ENV_SA_READS: &str = "SKS_SA_READS";
pub const ENV_SA_SWEEPS: &str = "SKS_SA_SWEEPS";

/// Settings as they appear in a config file or manifest; every field optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SettingsLayer {
    pub exhaustive_limit: Option<usize>,
    pub sa_reads: Option<usize>,
    pub sa_sweeps: Option<usize>,
}

impl SettingsLayer {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| SksError::Manifest(e.to_string()))
    }

    /// Reads the `SKS_*` variables through `get`.
    pub fn from_env_with(get: impl Fn(&str) -> Option<String>) -> Result<Self> {
        let parse = |key: &str| -> Result<Option<usize>> {
            match get(key) {
                None => Ok(None),
                Some(v) => v.trim().parse().map(Some).map_err(|_| {
                    SksError::InvalidParameter(format!("{key}={v:?} is not a non-negative integer"))
                }),
            }
        };
        Ok(Self {
            exhaustive_limit: parse(ENV_EXHAUSTIVE_LIMIT)?,
            sa_reads: parse(ENV_SA_READS)?,
            sa_sweeps: parse(ENV_SA_SWEEPS)?,
        })
    }

    pub fn from_env() -> Result<Self> {
        Self::from_env_with(|k| std::env::var(k).ok())
    }

    fn over(self, lower: &Self) -> Self {
        Self {
            exhaustive_limit: self.exhaustive_limit.or(lower.exhaustive_limit),
            sa_reads: self.sa_reads.or(lower.sa_reads),
            sa_sweeps: self.sa_sweeps.or(lower.sa_sweeps),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub exhaustive_limit: usize,
    pub sa: SaParams,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            exhaustive_limit: DEFAULT_EXHAUSTIVE_LIMIT,
            sa: SaParams::default(),
        }
    }
}

impl Settings {
    /// Flag beats env beats file beats built-in default.
    pub fn resolve(flags: &SettingsLayer, env: &SettingsLayer, file: &SettingsLayer) -> Self {
        let merged = flags.clone().over(&env.clone().over(file));
        let d = Self::default();
        Self {
            exhaustive_limit: merged.exhaustive_limit.unwrap_or(d.exhaustive_limit),
            sa: SaParams {
                reads: merged.sa_reads.unwrap_or(d.sa.reads),
                sweeps: merged.sa_sweeps.unwrap_or(d.sa.sweeps),
                ..d.sa
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GeneratorSpec {
    Er { n: usize, p: f64, seed: u64 },
    Bipartite { a: usize, b: usize, p: f64, seed: u64 },
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<Graph> {
        match *self {
            Self::Er { n, p, seed } => generate_er(n, p, seed),
            Self::Bipartite { a, b, p, seed } => generate_bipartite(a, b, p, seed),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Self::Er { n, p, seed } => format!("er_n{n}_p{p}_s{seed}"),
            Self::Bipartite { a, b, p, seed } => format!("bg_a{a}_b{b}_p{p}_s{seed}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub max_iters: Option<usize>,
    pub phi: Option<f64>,
    pub rho: Option<f64>,
    pub mu_init_alia: Option<f64>,
    pub lambda_init: Option<f64>,
    pub mu_init: Option<f64>,
    pub sa_reads: Option<usize>,
    pub sa_sweeps: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub name: Option<String>,
    pub instance: Option<PathBuf>,
    pub generator: Option<GeneratorSpec>,
    pub k: usize,
    #[serde(default = "default_sense")]
    pub sense: String,
    pub method: String,
    #[serde(default = "default_solver")]
    pub solver: String,
    #[serde(default)]
    pub seed: u64,
    pub optimum: Option<usize>,
    #[serde(default)]
    pub overrides: Overrides,
}

fn default_sense() -> String {
    "sparsest".into()
}

fn default_solver() -> String {
    "sa".into()
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentManifest {
    #[serde(default)]
    pub settings: SettingsLayer,
    #[serde(default, rename = "job")]
    pub jobs: Vec<JobSpec>,
}

impl ExperimentManifest {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| SksError::Manifest(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sense {
    Sparsest,
    Densest,
}

impl Sense {
    pub fn name(self) -> &'static str {
        match self {
            Self::Sparsest => "sparsest",
            Self::Densest => "densest",
        }
    }
}

impl std::str::FromStr for Sense {
    type Err = SksError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sparsest" => Ok(Self::Sparsest),
            "densest" => Ok(Self::Densest),
            _ => Err(SksError::InvalidParameter(format!("unknown sense {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JobMethod {
    Iterative(Method),
    Exact,
    Bounds,
}

impl JobMethod {
    pub fn name(self) -> &'static str {
        match self {
            Self::Iterative(m) => m.name(),
            Self::Exact => "exact",
            Self::Bounds => "bounds",
        }
    }
}

impl std::str::FromStr for JobMethod {
    type Err = SksError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(Self::Exact),
            "bounds" => Ok(Self::Bounds),
            other => other.parse().map(Self::Iterative).map_err(|_| {
                SksError::InvalidParameter(format!(
                    "unknown method {s:?} (expected qpia, lria, alia, exact or bounds)"
                ))
            }),
        }
    }
}

/// A job ready to run.
#[derive(Debug, Clone)]
pub struct ResolvedJob {
    pub instance: String,
    pub graph: Graph,
    pub k: usize,
    pub sense: Sense,
    pub method: JobMethod,
    pub solver: SolverChoice,
    pub cfg: IterativeConfig,
    pub exhaustive_limit: usize,
    pub seed: u64,
    pub optimum: Option<usize>,
}

/// `solver` is "sa" or "oracle".
pub fn solver_from_name(name: &str, settings: &Settings) -> Result<SolverChoice> {
    match name.to_ascii_lowercase().as_str() {
        "sa" => Ok(SolverChoice::Sa(settings.sa.clone())),
        "oracle" | "exhaustive" => Ok(SolverChoice::Oracle {
            limit: settings.exhaustive_limit,
        }),
        _ => Err(SksError::InvalidParameter(format!(
            "unknown solver {name:?} (expected sa or oracle)"
        ))),
    }
}

impl ResolvedJob {
    /// Checks everything that can be checked without running the job.
    pub fn validate(&self) -> Result<()> {
        let n = self.graph.n();
        if self.k == 0 || self.k > n {
            return Err(SksError::SizeOutOfRange { k: self.k, lo: 1, hi: n });
        }
        self.cfg.validate()?;
        match &self.solver {
            SolverChoice::Sa(p) => p.validate()?,
            SolverChoice::Oracle { limit } => {
                if matches!(self.method, JobMethod::Iterative(_)) && n > *limit {
                    return Err(SksError::ExhaustiveLimit { dim: n, limit: *limit });
                }
            }
        }
        if self.method == JobMethod::Exact && n > self.exhaustive_limit {
            return Err(SksError::ExhaustiveLimit {
                dim: n,
                limit: self.exhaustive_limit,
            });
        }
        Ok(())
    }
}

fn resolve_job(spec: &JobSpec, base_dir: &Path, settings: &Settings) -> Result<ResolvedJob> {
    let (instance, graph) = match (&spec.instance, &spec.generator) {
        (Some(path), None) => {
            let full = if path.is_absolute() { path.clone() } else { base_dir.join(path) };
            (path.display().to_string(), load_graph(&full)?)
        }
        (None, Some(gen)) => (gen.label(), gen.generate()?),
        _ => {
            return Err(SksError::Manifest(
                "exactly one of `instance` and `generator` is required".into(),
            ))
        }
    };
    let o = &spec.overrides;
    let job_settings = Settings {
        exhaustive_limit: settings.exhaustive_limit,
        sa: SaParams {
            reads: o.sa_reads.unwrap_or(settings.sa.reads),
            sweeps: o.sa_sweeps.unwrap_or(settings.sa.sweeps),
            ..settings.sa.clone()
        },
    };
    let d = IterativeConfig::default();
    let cfg = IterativeConfig {
        max_iters: o.max_iters.unwrap_or(d.max_iters),
        phi: o.phi.unwrap_or(d.phi),
        rho: o.rho.unwrap_or(d.rho),
        mu_init_alia: o.mu_init_alia.unwrap_or(d.mu_init_alia),
        seed: spec.seed,
        lambda_init: o.lambda_init,
        mu_init_qpia: o.mu_init,
    };
    let job = ResolvedJob {
        instance: spec.name.clone().unwrap_or(instance),
        graph,
        k: spec.k,
        sense: spec.sense.parse()?,
        method: spec.method.parse()?,
        solver: solver_from_name(&spec.solver, &job_settings)?,
        cfg,
        exhaustive_limit: settings.exhaustive_limit,
        seed: spec.seed,
        optimum: spec.optimum,
    };
    job.validate()?;
    Ok(job)
}

/// Resolves every job or reports the first bad one by 1-based index.
pub fn resolve_manifest(
    manifest: &ExperimentManifest,
    base_dir: &Path,
    settings: &Settings,
) -> Result<Vec<ResolvedJob>> {
    manifest
        .jobs
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            resolve_job(spec, base_dir, settings)
                .map_err(|e| SksError::Manifest(format!("job {}: {e}", i + 1)))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub sense: String,
    pub method: String,
    pub solver: String,
    pub mu_final: Option<f64>,
    pub lambda_final: Option<f64>,
    pub iterations: Option<usize>,
    pub k_first_iter: Option<usize>,
    pub best_k_reached: Option<usize>,
    pub refined: bool,
    pub value: Option<usize>,
    pub optimum: Option<usize>,
    pub error: Option<f64>,
    pub status: String,
    pub seed: u64,
    pub runtime_ms: Option<u128>,
}

/// Relative gap to the optimum: `(opt - v)/opt` for densest and
/// `(v - opt)/max(opt, 1)` for sparsest.
pub fn error_vs_optimum(sense: Sense, value: usize, optimum: usize) -> f64 {
    let (v, o) = (value as f64, optimum as f64);
    match sense {
        Sense::Densest if optimum == 0 => 0.0,
        Sense::Densest => (o - v) / o,
        Sense::Sparsest => (v - o) / o.max(1.0),
    }
}

pub struct JobOutput {
    pub row: ResultRow,
    pub trace: Option<IterationTrace>,
}

fn sense_value(sense: Sense, k: usize, sparse_edges: usize) -> usize {
    match sense {
        Sense::Sparsest => sparse_edges,
        Sense::Densest => k * (k - 1) / 2 - sparse_edges,
    }
}

fn base_row(job: &ResolvedJob) -> ResultRow {
    ResultRow {
        instance: job.instance.clone(),
        n: job.graph.n(),
        m: job.graph.m(),
        k: job.k,
        sense: job.sense.name().into(),
        method: job.method.name().into(),
        solver: match job.method {
            JobMethod::Iterative(_) => job.solver_name().into(),
            JobMethod::Exact => "oracle".into(),
            JobMethod::Bounds => String::new(),
        },
        mu_final: None,
        lambda_final: None,
        iterations: None,
        k_first_iter: None,
        best_k_reached: None,
        refined: false,
        value: None,
        optimum: job.optimum,
        error: None,
        status: String::new(),
        seed: job.seed,
        runtime_ms: None,
    }
}

impl ResolvedJob {
    fn solver_name(&self) -> &str {
        use crate::solvers::QuboSolver;
        self.solver.name()
    }

    /// The graph the sparsest search runs on.
    fn search_graph(&self) -> Graph {
        match self.sense {
            Sense::Sparsest => self.graph.clone(),
            Sense::Densest => self.graph.complement(),
        }
    }
}

/// Runs one job. Errors raised while running are returned, not recorded;
/// [`run_jobs`] turns them into rows.
pub fn execute_job(job: &ResolvedJob, timings: bool) -> Result<JobOutput> {
    let start = Instant::now();
    let mut row = base_row(job);
    let mut trace = None;
    match job.method {
        JobMethod::Iterative(method) => {
            let t = match job.sense {
                Sense::Sparsest => run_method(method, &job.graph, job.k, &job.solver, &job.cfg)?,
                Sense::Densest => densest_k(&job.graph, job.k, method, &job.solver, &job.cfg)?.trace,
            };
            row.mu_final = t.mu_final();
            row.lambda_final = t.lambda_final();
            row.iterations = Some(t.iterations());
            row.k_first_iter = t.k_first_iter();
            row.best_k_reached = t.best_k_reached;
            row.refined = t.refined;
            row.value = t.value().map(|e| sense_value(job.sense, job.k, e));
            trace = Some(t);
        }
        JobMethod::Exact => {
            let (m_k, _) = sks_exact(&job.search_graph(), job.k, job.exhaustive_limit)?;
            row.value = Some(sense_value(job.sense, job.k, m_k));
            row.optimum = row.optimum.or(row.value);
        }
        JobMethod::Bounds => {
            let g = job.search_graph();
            let greedy = greedy_sparse_subgraph(&g, job.k)?;
            let b = mu_bounds(&g, job.k, Some(greedy.edge_count), None)?;
            row.mu_final = Some(b.recommended_mu() as f64);
            if g.n() <= job.exhaustive_limit && job.k < g.n() {
                let w = lambda_window(&spectrum(&g, job.exhaustive_limit)?, job.k)?;
                if w.nonempty {
                    row.lambda_final = Some(r2f(w.midpoint()));
                }
            }
            row.value = Some(sense_value(job.sense, job.k, greedy.edge_count));
        }
    }
    row.status = match (row.value, row.optimum) {
        (None, _) => "absent".into(),
        (Some(v), Some(o)) if v == o => "optimal".into(),
        _ => "feasible".into(),
    };
    if let (Some(v), Some(o)) = (row.value, row.optimum) {
        row.error = Some(error_vs_optimum(job.sense, v, o));
    }
    if timings {
        row.runtime_ms = Some(start.elapsed().as_millis());
    }
    Ok(JobOutput { row, trace })
}

/// Runs all jobs concurrently; rows are in input order and a failing job
/// yields a row with `status = "failed: ..."`.
pub fn run_jobs(jobs: &[ResolvedJob], timings: bool) -> Vec<ResultRow> {
    jobs.par_iter()
        .map(|job| match execute_job(job, timings) {
            Ok(out) => out.row,
            Err(e) => ResultRow {
                status: format!("failed: {e}"),
                ..base_row(job)
            },
        })
        .collect()
}

pub fn write_rows<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    if rows.is_empty() {
        w.write_record(RESULT_HEADER)?;
    }
    w.flush()?;
    Ok(())
}

pub const RESULT_HEADER: [&str; 19] = [
    "instance",
    "n",
    "m",
    "k",
    "sense",
    "method",
    "solver",
    "mu_final",
    "lambda_final",
    "iterations",
    "k_first_iter",
    "best_k_reached",
    "refined",
    "value",
    "optimum",
    "error",
    "status",
    "seed",
    "runtime_ms",
];

/// Per-iteration rows `iter,mu,lambda,value,cardinality,edges` followed by a
/// `final` row with the last parameters, the final edge count and
/// `best_k_reached`.
pub fn write_trace<W: Write>(trace: &IterationTrace, out: W) -> Result<()> {
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["iter", "mu", "lambda", "value", "cardinality", "edges"])?;
    for r in &trace.records {
        w.write_record([
            r.iter.to_string(),
            opt(r.mu),
            opt(r.lambda),
            r.value.to_string(),
            r.cardinality.to_string(),
            r.edges.to_string(),
        ])?;
    }
    w.write_record([
        "final".to_string(),
        opt(trace.mu_final()),
        opt(trace.lambda_final()),
        trace.value().map(|v| v.to_string()).unwrap_or_default(),
        trace.best_k_reached.map(|v| v.to_string()).unwrap_or_default(),
        trace.value().map(|v| v.to_string()).unwrap_or_default(),
    ])?;
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MethodSummary {
    pub jobs: usize,
    pub feasible: usize,
    pub failed: usize,
    /// Jobs with a known optimum.
    pub with_optimum: usize,
    pub optimal: usize,
    pub mean_error: Option<f64>,
}

/// Counts per method name, in name order.
pub fn summarize(rows: &[ResultRow]) -> BTreeMap<String, MethodSummary> {
    let mut out: BTreeMap<String, MethodSummary> = BTreeMap::new();
    let mut errors: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for r in rows {
        let s = out.entry(r.method.clone()).or_default();
        s.jobs += 1;
        if r.status.starts_with("failed") {
            s.failed += 1;
        }
        if r.value.is_some() {
            s.feasible += 1;
        }
        if r.optimum.is_some() {
            s.with_optimum += 1;
        }
        if r.status == "optimal" {
            s.optimal += 1;
        }
        if let Some(e) = r.error {
            errors.entry(r.method.clone()).or_default().push(e);
        }
    }
    for (name, errs) in errors {
        if let Some(s) = out.get_mut(&name) {
            s.mean_error = Some(errs.iter().sum::<f64>() / errs.len() as f64);
        }
    }
    out
}

pub fn format_summary(summary: &BTreeMap<String, MethodSummary>) -> String {
    let mut s = String::from("method  jobs  feasible  optimal/known  failed  mean_error\n");
    for (name, m) in summary {
        s.push_str(&format!(
            "{:<7} {:>5} {:>9} {:>8}/{:<5} {:>6}  {}\n",
            name,
            m.jobs,
            m.feasible,
            m.optimal,
            m.with_optimum,
            m.failed,
            m.mean_error.map(|e| format!("{e:.4}")).unwrap_or_else(|| "-".into()),
        ));
    }
    s
}

/// Loads, validates and runs a manifest file; returns the rows.
pub fn run_manifest_file(
    path: &Path,
    flags: &SettingsLayer,
    env: &SettingsLayer,
    timings: bool,
) -> Result<Vec<ResultRow>> {
    let manifest = ExperimentManifest::load(path)?;
    let settings = Settings::resolve(flags, env, &manifest.settings);
    let base = path.parent().unwrap_or(Path::new("."));
    let jobs = resolve_manifest(&manifest, base, &settings)?;
    Ok(run_jobs(&jobs, timings))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MANIFEST: &str = r#"
[settings]
sa_reads = 5
sa_sweeps = 50

[[job]]
generator = { kind = "er", n = 8, p = 0.5, seed = 1 }
k = 4
method = "alia"
solver = "oracle"

[[job]]
generator = { kind = "er", n = 8, p = 0.5, seed = 1 }
k = 4
method = "exact"

[[job]]
generator = { kind = "bipartite", a = 3, b = 4, p = 0.7, seed = 2 }
k = 3
sense = "densest"
method = "qpia"
seed = 5
optimum = 2
"#;

    #[test]
    fn settings_precedence() {
        let file = SettingsLayer { exhaustive_limit: Some(10), sa_reads: Some(7), sa_sweeps: Some(9) };
        let env = SettingsLayer { exhaustive_limit: Some(12), sa_reads: Some(8), ..Default::default() };
        let flags = SettingsLayer { exhaustive_limit: Some(14), ..Default::default() };
        let s = Settings::resolve(&flags, &env, &file);
        assert_eq!(s.exhaustive_limit, 14);
        assert_eq!(s.sa.reads, 8);
        assert_eq!(s.sa.sweeps, 9);
        let d = Settings::resolve(&Default::default(), &Default::default(), &Default::default());
        assert_eq!(d, Settings::default());
    }

    #[test]
    fn env_layer_parses() {
        let env = SettingsLayer::from_env_with(|k| (k == ENV_SA_READS).then(|| "12".to_string())).unwrap();
        assert_eq!(env.sa_reads, Some(12));
        assert_eq!(env.exhaustive_limit, None);
        assert!(SettingsLayer::from_env_with(|_| Some("x".into())).is_err());
    }

    #[test]
    fn manifest_runs_in_order_and_deterministically() {
        let m = ExperimentManifest::from_toml_str(MANIFEST).unwrap();
        let s = Settings::resolve(&Default::default(), &Default::default(), &m.settings);
        let jobs = resolve_manifest(&m, Path::new("."), &s).unwrap();
        let rows = run_jobs(&jobs, false);
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].method, "alia");
        assert_eq!(rows[1].method, "exact");
        assert_eq!(rows[0].value, rows[1].value);
        assert_eq!(rows[2].sense, "densest");
        assert_eq!(rows[2].solver, "sa");
        assert_eq!(rows[2].seed, 5);
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_rows(&rows, &mut a).unwrap();
        write_rows(&run_jobs(&jobs, false), &mut b).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert_eq!(text.lines().next().unwrap(), RESULT_HEADER.join(","));
    }

    #[test]
    fn unknown_method_rejected_before_running() {
        let bad = MANIFEST.replace("method = \"exact\"", "method = \"tabu\"");
        let m = ExperimentManifest::from_toml_str(&bad).unwrap();
        let err = resolve_manifest(&m, Path::new("."), &Settings::default()).unwrap_err();
        assert!(err.to_string().contains("job 2"), "{err}");
    }

    #[test]
    fn manifest_shape_errors() {
        let both = "[[job]]\ninstance = \"a\"\ngenerator = { kind = \"er\", n = 3, p = 0.5, seed = 1 }\nk = 1\nmethod = \"exact\"\n";
        let m = ExperimentManifest::from_toml_str(both).unwrap();
        assert!(resolve_manifest(&m, Path::new("."), &Settings::default()).is_err());
        assert!(ExperimentManifest::from_toml_str("[[job]]\nk = 1\nmethod = \"exact\"\nbogus = 1\n").is_err());
        let big_k = "[[job]]\ngenerator = { kind = \"er\", n = 3, p = 0.5, seed = 1 }\nk = 4\nmethod = \"exact\"\n";
        let m = ExperimentManifest::from_toml_str(big_k).unwrap();
        assert!(resolve_manifest(&m, Path::new("."), &Settings::default()).is_err());
    }

    #[test]
    fn error_metric() {
        assert_eq!(error_vs_optimum(Sense::Densest, 27, 30), 0.1);
        assert_eq!(error_vs_optimum(Sense::Sparsest, 3, 2), 0.5);
        assert_eq!(error_vs_optimum(Sense::Sparsest, 1, 0), 1.0);
        assert_eq!(error_vs_optimum(Sense::Densest, 0, 0), 0.0);
    }

    #[test]
    fn densest_row_matches_complement() {
        let g = generate_er(9, 0.6, 4).unwrap();
        let job = ResolvedJob {
            instance: "g".into(),
            graph: g.clone(),
            k: 4,
            sense: Sense::Densest,
            method: JobMethod::Exact,
            solver: SolverChoice::oracle(),
            cfg: IterativeConfig::default(),
            exhaustive_limit: 24,
            seed: 0,
            optimum: None,
        };
        let row = execute_job(&job, false).unwrap().row;
        let (m_k, _) = sks_exact(&g.complement(), 4, 24).unwrap();
        assert_eq!(row.value, Some(6 - m_k));
        assert_eq!(row.status, "optimal");
    }

    #[test]
    fn summary_counts() {
        let m = ExperimentManifest::from_toml_str(MANIFEST).unwrap();
        let s = Settings::resolve(&Default::default(), &Default::default(), &m.settings);
        let rows = run_jobs(&resolve_manifest(&m, Path::new("."), &s).unwrap(), false);
        let sum = summarize(&rows);
        assert_eq!(sum["alia"].jobs, 1);
        assert_eq!(sum["exact"].optimal, 1);
        assert!(format_summary(&sum).contains("qpia"));
    }

    #[test]
    fn trace_csv_shape() {
        let t = crate::iterative::qpia(
            &Graph::complete(4),
            2,
            &SolverChoice::oracle(),
            &IterativeConfig::default(),
        )
        .unwrap();
        let mut buf = Vec::new();
        write_trace(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "iter,mu,lambda,value,cardinality,edges\n1,3,,1,2,1\nfinal,3,,1,2,1\n");
    }
}
