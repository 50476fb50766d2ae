//! `sks`: generate instances, inspect penalty bounds, run single solves,
//! iterative algorithms and manifest benchmarks.
//!
//! Exit status is 0 on success, 1 on a command-line usage error and 2 when
//! the command itself fails.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use sks_core::bench::{
    execute_job, format_summary, resolve_manifest, run_jobs, solver_from_name, summarize, write_rows,
    write_trace, ExperimentManifest, JobMethod, ResolvedJob, ResultRow, Sense, Settings,
    SettingsLayer,
};
use sks_core::graph::{extract_subgraph_by_degree, generate_bipartite, generate_er, greedy_sparse_subgraph};
use sks_core::io::{load_graph, save_graph};
use sks_core::iterative::{IterativeConfig, Method};
use sks_core::solvers::QuboSolver;
use sks_core::theory::{al_exact_params, lambda_window, mu_bounds, spectrum};
use sks_core::{Graph, RelaxationKind, RelaxationParams};

#[derive(Parser)]
#[command(name = "sks", version, about = "Sparsest/densest k-subgraph via QUBO relaxations")]
struct Cli {
    #[command(flatten)]
    settings: SettingsArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SettingsArgs {
    /// TOML file with exhaustive_limit, sa_reads, sa_sweeps.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Largest n handled by exhaustive enumeration [env: SKS_EXHAUSTIVE_LIMIT].
    #[arg(long, global = true)]
    exhaustive_limit: Option<usize>,
    /// Simulated-annealing restarts [env: SKS_SA_READS].
    #[arg(long, global = true)]
    sa_reads: Option<usize>,
    /// Sweeps per restart [env: SKS_SA_SWEEPS].
    #[arg(long, global = true)]
    sa_sweeps: Option<usize>,
}

impl SettingsArgs {
    fn flags(&self) -> SettingsLayer {
        SettingsLayer {
            exhaustive_limit: self.exhaustive_limit,
            sa_reads: self.sa_reads,
            sa_sweeps: self.sa_sweeps,
        }
    }

    fn file(&self) -> Result<SettingsLayer> {
        match &self.config {
            None => Ok(SettingsLayer::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                Ok(SettingsLayer::from_toml_str(&text)?)
            }
        }
    }

    fn resolve(&self) -> Result<Settings> {
        Ok(Settings::resolve(&self.flags(), &SettingsLayer::from_env()?, &self.file()?))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write a graph instance.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Penalty bounds and, with --exact, the spectrum and multiplier window.
    Bounds(BoundsArgs),
    /// Build one relaxation and minimize it once.
    Solve(SolveArgs),
    /// Run QPIA, LRIA or ALIA.
    Iterate(IterateArgs),
    /// Exact sparsest (or densest) k-subgraph by enumeration.
    Exact(ExactArgs),
    /// Run a TOML manifest of jobs and write CSV rows.
    Bench(BenchArgs),
}

#[derive(Subcommand)]
enum GenCommand {
    /// Erdos-Renyi G(n, p).
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Random bipartite graph with parts of size a and b.
    Bipartite {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Keep target-n vertices by peeling maximum-degree vertices.
    Extract {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        target_n: usize,
        #[arg(long, short)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SenseArg {
    Sparsest,
    Densest,
}

impl From<SenseArg> for Sense {
    fn from(s: SenseArg) -> Self {
        match s {
            SenseArg::Sparsest => Sense::Sparsest,
            SenseArg::Densest => Sense::Densest,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Sa,
    Oracle,
}

impl SolverArg {
    fn name(self) -> &'static str {
        match self {
            Self::Sa => "sa",
            Self::Oracle => "oracle",
        }
    }
}

#[derive(Args)]
struct InstanceArgs {
    /// DIMACS edge-list file.
    #[arg(long, short)]
    instance: PathBuf,
    #[arg(long, short)]
    k: usize,
    #[arg(long, value_enum, default_value = "sparsest")]
    sense: SenseArg,
}

impl InstanceArgs {
    fn load(&self) -> Result<Graph> {
        load_graph(&self.instance).with_context(|| format!("loading {}", self.instance.display()))
    }

    /// The graph the sparsest search runs on.
    fn search_graph(&self, g: &Graph) -> Graph {
        match self.sense {
            SenseArg::Sparsest => g.clone(),
            SenseArg::Densest => g.complement(),
        }
    }

    fn check_k(&self, g: &Graph) -> Result<()> {
        if self.k == 0 || self.k > g.n() {
            bail!("k = {} out of range 1..={}", self.k, g.n());
        }
        Ok(())
    }
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    /// Also compute m_k for every k (needs n <= exhaustive limit).
    #[arg(long)]
    exact: bool,
    /// Print `key,value` lines instead of text.
    #[arg(long)]
    csv: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum RelaxationArg {
    Qp,
    Lr,
    Al,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    #[arg(long, value_enum)]
    relaxation: RelaxationArg,
    /// Default: 2 min(m~, k-1) + 1 for qp, k for al.
    #[arg(long)]
    mu: Option<f64>,
    /// Default: greedy max degree for lr, (k-1)/2 for al.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    #[arg(long, value_enum, default_value = "sa")]
    solver: SolverArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the QUBO model in text form.
    #[arg(long)]
    export_qubo: Option<PathBuf>,
    /// Write the result row as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Qpia,
    Lria,
    Alia,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Qpia => Method::Qpia,
            MethodArg::Lria => Method::Lria,
            MethodArg::Alia => Method::Alia,
        }
    }
}

#[derive(Args)]
struct IterateArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    #[arg(long, value_enum)]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "sa")]
    solver: SolverArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    max_iters: usize,
    #[arg(long, default_value_t = 0.1)]
    phi: f64,
    #[arg(long, default_value_t = 1.1)]
    rho: f64,
    /// Starting mu: QPIA default 2 min(m~, k-1) + 1, ALIA default 0.1.
    #[arg(long)]
    mu_init: Option<f64>,
    /// Starting lambda for LRIA/ALIA (default: greedy max degree).
    #[arg(long, allow_hyphen_values = true)]
    lambda_init: Option<f64>,
    /// Per-iteration CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Result row CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExactArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    /// Print m_k for every k as `k,m_k` lines.
    #[arg(long)]
    all: bool,
}

#[derive(Args)]
struct BenchArgs {
    manifest: PathBuf,
    /// Results CSV; stdout when omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Print per-method counts to stderr.
    #[arg(long)]
    summary: bool,
    /// Fill the runtime_ms column (makes output run-dependent).
    #[arg(long)]
    timings: bool,
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn cmd_gen(cmd: GenCommand) -> Result<()> {
    let (g, out, comment) = match cmd {
        GenCommand::Er { n, p, seed, out } => {
            (generate_er(n, p, seed)?, out, format!("er n={n} p={p} seed={seed}"))
        }
        GenCommand::Bipartite { a, b, p, seed, out } => (
            generate_bipartite(a, b, p, seed)?,
            out,
            format!("bipartite a={a} b={b} p={p} seed={seed}"),
        ),
        GenCommand::Extract { input, target_n, out } => {
            let host = load_graph(&input).with_context(|| format!("loading {}", input.display()))?;
            (
                extract_subgraph_by_degree(&host, target_n)?,
                out,
                format!("extracted {target_n} vertices from {}", input.display()),
            )
        }
    };
    save_graph(&out, &g, Some(&comment)).with_context(|| format!("writing {}", out.display()))?;
    println!("n={} m={}", g.n(), g.m());
    Ok(())
}

fn cmd_bounds(args: BoundsArgs, settings: &Settings) -> Result<()> {
    let g = args.inst.search_graph(&args.inst.load()?);
    args.inst.check_k(&g)?;
    let k = args.inst.k;
    let mut lines: Vec<(String, String)> = Vec::new();
    let mut push = |key: &str, v: String| lines.push((key.to_string(), v));

    let exact = if !args.exact {
        Err("not requested (pass --exact)".to_string())
    } else if g.n() > settings.exhaustive_limit {
        Err(format!("n = {} exceeds exhaustive limit {}", g.n(), settings.exhaustive_limit))
    } else {
        Ok(spectrum(&g, settings.exhaustive_limit)?)
    };
    let b = mu_bounds(&g, k, None, exact.as_ref().ok())?;
    push("n", g.n().to_string());
    push("m", g.m().to_string());
    push("k", k.to_string());
    push("m_tilde", b.m_tilde.to_string());
    push("mu_global", b.global.min_mu().to_string());
    push("mu_feasible", b.feasible.min_mu().to_string());
    push("mu_cardinality", b.cardinality.min_mu().to_string());
    push("mu_lb", b.recommended_mu().to_string());
    match &exact {
        Err(why) => push("exact", format!("unavailable: {why}")),
        Ok(s) => {
            push("m_k", s.m[k].to_string());
            push("alpha", s.alpha.to_string());
            push("diff_monotone", s.diff_monotone.to_string());
            if let Some(d) = b.diff_based {
                let note = if d.valid { "" } else { " (diff not monotone; not a guarantee)" };
                push("mu_diff", format!("{}{note}", d.threshold.min_mu()));
            }
            let m: Vec<String> = s.m.iter().map(|v| v.to_string()).collect();
            push("spectrum", m.join(" "));
            if k < g.n() {
                let w = lambda_window(s, k)?;
                push("a_k", w.a_k.to_string());
                push("b_k", w.b_k.to_string());
                push(
                    "window",
                    if w.nonempty {
                        format!("({}, {})", w.a_k, w.b_k)
                    } else if w.touching {
                        "empty (A_k = B_k)".into()
                    } else {
                        "empty (A_k > B_k)".into()
                    },
                );
            }
        }
    }
    let mut out = io::stdout().lock();
    for (key, v) in lines {
        if args.csv {
            let mut w = csv_line(&key, &v);
            w.push('\n');
            out.write_all(w.as_bytes())?;
        } else {
            writeln!(out, "{key:<15} {v}")?;
        }
    }
    Ok(())
}

fn csv_line(key: &str, v: &str) -> String {
    if v.contains([',', '"', '\n']) {
        format!("{key},\"{}\"", v.replace('"', "\"\""))
    } else {
        format!("{key},{v}")
    }
}

fn solver_for(name: SolverArg, n: usize, settings: &Settings) -> Result<sks_core::SolverChoice> {
    if matches!(name, SolverArg::Oracle) && n > settings.exhaustive_limit {
        bail!("n = {n} exceeds exhaustive limit {}", settings.exhaustive_limit);
    }
    Ok(solver_from_name(name.name(), settings)?)
}

fn dense_value(sense: Sense, k: usize, edges: usize) -> usize {
    match sense {
        Sense::Sparsest => edges,
        Sense::Densest => k * k.saturating_sub(1) / 2 - edges,
    }
}

fn cmd_solve(args: SolveArgs, settings: &Settings) -> Result<()> {
    let host = args.inst.load()?;
    let g = args.inst.search_graph(&host);
    args.inst.check_k(&g)?;
    let k = args.inst.k;
    let params = match args.relaxation {
        RelaxationArg::Qp => {
            let mu = match args.mu {
                Some(mu) => mu,
                None => mu_bounds(&g, k, None, None)?.recommended_mu() as f64,
            };
            RelaxationParams::qp(k, mu)
        }
        RelaxationArg::Lr => {
            let lambda = match args.lambda {
                Some(l) => l,
                None => greedy_sparse_subgraph(&g, k)?.max_degree_inside as f64,
            };
            RelaxationParams::lr(k, lambda)
        }
        RelaxationArg::Al => {
            let (l0, m0) = al_exact_params(k);
            RelaxationParams::al(k, args.lambda.unwrap_or(l0), args.mu.unwrap_or(m0))
        }
    };
    let model = params.build(&g)?;
    if let Some(p) = &args.export_qubo {
        std::fs::write(p, model.to_text()).with_context(|| format!("writing {}", p.display()))?;
    }
    let solver = solver_for(args.solver, g.n(), settings)?;
    let out = solver.minimize(&model, args.seed)?;
    let edges = g.induced_edge_count(&out.x);
    let sense: Sense = args.inst.sense.into();
    let feasible = out.cardinality == k;

    println!("objective   {}", out.value);
    println!("cardinality {}", out.cardinality);
    println!("edges       {edges}");
    println!("subset      {}", out.x);
    if feasible {
        println!("value       {}", dense_value(sense, k, edges));
    } else {
        println!("value       absent (cardinality {} != k = {k})", out.cardinality);
    }

    if let Some(path) = &args.out {
        let kind: RelaxationKind = params.kind;
        let row = ResultRow {
            instance: args.inst.instance.display().to_string(),
            n: host.n(),
            m: host.m(),
            k,
            sense: sense.name().into(),
            method: kind.name().into(),
            solver: solver.name().into(),
            mu_final: (kind != RelaxationKind::Lr).then_some(params.mu),
            lambda_final: (kind != RelaxationKind::Qp).then_some(params.lambda),
            iterations: Some(1),
            k_first_iter: Some(out.cardinality),
            best_k_reached: Some(out.cardinality),
            refined: false,
            value: feasible.then(|| dense_value(sense, k, edges)),
            optimum: None,
            error: None,
            status: if feasible { "feasible" } else { "absent" }.into(),
            seed: args.seed,
            runtime_ms: None,
        };
        write_rows(&[row], open_out(Some(path))?)?;
    }
    Ok(())
}

fn cmd_iterate(args: IterateArgs, settings: &Settings) -> Result<()> {
    let g = args.inst.load()?;
    args.inst.check_k(&g)?;
    let method: Method = args.method.into();
    let d = IterativeConfig::default();
    let cfg = IterativeConfig {
        max_iters: args.max_iters,
        phi: args.phi,
        rho: args.rho,
        mu_init_alia: match method {
            Method::Alia => args.mu_init.unwrap_or(d.mu_init_alia),
            _ => d.mu_init_alia,
        },
        seed: args.seed,
        lambda_init: args.lambda_init,
        mu_init_qpia: match method {
            Method::Qpia => args.mu_init,
            _ => None,
        },
    };
    let job = ResolvedJob {
        instance: args.inst.instance.display().to_string(),
        solver: solver_for(args.solver, g.n(), settings)?,
        graph: g,
        k: args.inst.k,
        sense: args.inst.sense.into(),
        method: JobMethod::Iterative(method),
        cfg,
        exhaustive_limit: settings.exhaustive_limit,
        seed: args.seed,
        optimum: None,
    };
    job.validate()?;
    let out = execute_job(&job, false)?;
    let trace = out.trace.expect("iterative jobs carry a trace");
    let r = &out.row;
    println!("iterations     {}", trace.iterations());
    println!("k_first_iter   {}", opt(r.k_first_iter));
    println!("best_k_reached {}", opt(r.best_k_reached));
    println!("mu_final       {}", opt(r.mu_final));
    println!("lambda_final   {}", opt(r.lambda_final));
    println!("refined        {}", r.refined);
    match (&trace.final_subgraph, r.value) {
        (Some(s), Some(v)) => {
            println!("subset         {}", s.subset);
            println!("value          {v}");
        }
        _ => println!("value          absent"),
    }
    if let Some(p) = &args.trace {
        write_trace(&trace, open_out(Some(p))?)?;
    }
    if let Some(p) = &args.out {
        write_rows(std::slice::from_ref(&out.row), open_out(Some(p))?)?;
    }
    Ok(())
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "-".into())
}

fn cmd_exact(args: ExactArgs, settings: &Settings) -> Result<()> {
    let g = args.inst.search_graph(&args.inst.load()?);
    args.inst.check_k(&g)?;
    let k = args.inst.k;
    let sense: Sense = args.inst.sense.into();
    let s = spectrum(&g, settings.exhaustive_limit)?;
    let mut out = io::stdout().lock();
    writeln!(out, "value  {}", dense_value(sense, k, s.m[k]))?;
    writeln!(out, "subset {}", s.witnesses[k])?;
    if args.all {
        writeln!(out, "k,value")?;
        for (j, &m) in s.m.iter().enumerate() {
            writeln!(out, "{j},{}", dense_value(sense, j, m))?;
        }
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs, settings: &SettingsArgs) -> Result<()> {
    let manifest = ExperimentManifest::load(&args.manifest)
        .with_context(|| format!("reading {}", args.manifest.display()))?;
    // The manifest's [settings] table takes precedence over --config.
    let config = settings.file()?;
    let file = SettingsLayer {
        exhaustive_limit: manifest.settings.exhaustive_limit.or(config.exhaustive_limit),
        sa_reads: manifest.settings.sa_reads.or(config.sa_reads),
        sa_sweeps: manifest.settings.sa_sweeps.or(config.sa_sweeps),
    };
    let resolved = Settings::resolve(&settings.flags(), &SettingsLayer::from_env()?, &file);
    let base = args.manifest.parent().unwrap_or(Path::new("."));
    let jobs = resolve_manifest(&manifest, base, &resolved)?;
    let rows = run_jobs(&jobs, args.timings);
    write_rows(&rows, open_out(args.out.as_deref())?)?;
    if args.summary {
        eprint!("{}", format_summary(&summarize(&rows)));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen(c) => cmd_gen(c),
        Command::Bounds(a) => cmd_bounds(a, &cli.settings.resolve()?),
        Command::Solve(a) => cmd_solve(a, &cli.settings.resolve()?),
        Command::Iterate(a) => cmd_iterate(a, &cli.settings.resolve()?),
        Command::Exact(a) => cmd_exact(a, &cli.settings.resolve()?),
        Command::Bench(a) => cmd_bench(a, &cli.settings),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        // downstream closed the pipe (e.g. `| head`)
        Err(e)
            if e.chain()
                .filter_map(|c| c.downcast_ref::<std::io::Error>())
                .any(|io| io.kind() == std::io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
