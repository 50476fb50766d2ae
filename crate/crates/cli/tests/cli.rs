use std::path::Path;
use std::process::{Command, Output};

fn sks(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sks"))
        .args(args)
        .env_remove("SKS_EXHAUSTIVE_LIMIT")
        .env_remove("SKS_SA_READS")
        .env_remove("SKS_SA_SWEEPS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines()
        .find_map(|l| l.strip_prefix(key).filter(|r| r.starts_with(' ')).map(str::trim))
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

const K5: &str = "p edge 5 10\ne 1 2\ne 1 3\ne 1 4\ne 1 5\ne 2 3\ne 2 4\ne 2 5\ne 3 4\ne 3 5\ne 4 5\n";
const P3: &str = "p edge 3 2\ne 1 2\ne 2 3\n";

#[test]
fn gen_er_and_bipartite() {
    let dir = tempfile::tempdir().unwrap();
    let er = dir.path().join("er.dimacs");
    let o = sks(&["gen", "er", "--n", "40", "--p", "0.25", "--seed", "1", "-o", p(&er)]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&er).unwrap();
    assert!(text.lines().any(|l| l.starts_with("p edge 40 ")));

    let bg = dir.path().join("bg.dimacs");
    let o = sks(&["gen", "bipartite", "--a", "30", "--b", "30", "--p", "0.8", "--seed", "1", "-o", p(&bg)]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&bg).unwrap();
    for line in text.lines().filter(|l| l.starts_with("e ")) {
        let v: Vec<usize> = line[2..].split_whitespace().map(|t| t.parse().unwrap()).collect();
        assert_ne!(v[0] <= 30, v[1] <= 30, "intra-partition edge {line}");
    }

    let ex = dir.path().join("ex.dimacs");
    let o = sks(&["gen", "extract", "--in", p(&er), "--target-n", "25", "-o", p(&ex)]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("n=25 "));
}

#[test]
fn bounds_on_small_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let k5 = dir.path().join("k5.dimacs");
    write(&k5, K5);
    let o = sks(&["bounds", "-i", p(&k5), "-k", "3", "--exact"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(field(&out, "a_k"), Some("2"));
    assert_eq!(field(&out, "b_k"), Some("3"));

    let p3 = dir.path().join("p3.dimacs");
    write(&p3, P3);
    let out = stdout(&sks(&["bounds", "-i", p(&p3), "-k", "2", "--exact"]));
    assert_eq!(field(&out, "window"), Some("(0, 2)"));

    let out = stdout(&sks(&["bounds", "-i", p(&k5), "-k", "3"]));
    assert!(field(&out, "exact").unwrap().starts_with("unavailable"));
    assert_eq!(field(&out, "mu_lb"), Some("5"));

    let out = stdout(&sks(&["bounds", "-i", p(&k5), "-k", "3", "--csv"]));
    assert!(out.lines().any(|l| l == "mu_lb,5"));
}

#[test]
fn bounds_degrade_above_exhaustive_limit() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.dimacs");
    assert!(sks(&["gen", "er", "--n", "40", "--p", "0.25", "--seed", "1", "-o", p(&g)]).status.success());
    let o = sks(&["bounds", "-i", p(&g), "-k", "10", "--exact"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(field(&out, "exact").unwrap().contains("exceeds exhaustive limit"));
    assert!(field(&out, "mu_lb").is_some());
}

#[test]
fn solve_al_with_oracle_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.dimacs");
    assert!(sks(&["gen", "er", "--n", "12", "--p", "0.5", "--seed", "3", "-o", p(&g)]).status.success());
    let exact = stdout(&sks(&["exact", "-i", p(&g), "-k", "10"]));
    let qubo = dir.path().join("model.txt");
    let row = dir.path().join("row.csv");
    let o = sks(&[
        "solve", "-i", p(&g), "-k", "10", "--relaxation", "al", "--lambda", "4.5", "--mu", "10",
        "--solver", "oracle", "--export-qubo", p(&qubo), "--out", p(&row),
    ]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "value"), field(&exact, "value"));
    assert!(std::fs::read_to_string(&qubo).unwrap().starts_with("qubo 12\n"));
    let csv = std::fs::read_to_string(&row).unwrap();
    assert!(csv.lines().next().unwrap().starts_with("instance,n,m,k,"));
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn densest_sense_uses_complement() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.dimacs");
    assert!(sks(&["gen", "er", "--n", "10", "--p", "0.4", "--seed", "8", "-o", p(&g)]).status.success());
    let sparse_c = {
        let gc = dir.path().join("gc.dimacs");
        // Complement written by hand through the library's reader and writer.
        let graph = sks_core::io::load_graph(&g).unwrap();
        sks_core::io::save_graph(&gc, &graph.complement(), None).unwrap();
        stdout(&sks(&["exact", "-i", p(&gc), "-k", "4"]))
    };
    let dense = stdout(&sks(&["exact", "-i", p(&g), "-k", "4", "--sense", "densest"]));
    let s: usize = field(&sparse_c, "value").unwrap().parse().unwrap();
    let d: usize = field(&dense, "value").unwrap().parse().unwrap();
    assert_eq!(d, 6 - s);
}

#[test]
fn iterate_writes_trace_and_row() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.dimacs");
    assert!(sks(&["gen", "er", "--n", "12", "--p", "0.5", "--seed", "2", "-o", p(&g)]).status.success());
    let trace = dir.path().join("trace.csv");
    let row = dir.path().join("row.csv");
    let o = sks(&[
        "iterate", "-i", p(&g), "-k", "5", "--method", "qpia", "--solver", "oracle", "--trace", p(&trace), "--out",
        p(&row),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(field(&stdout(&o), "iterations"), Some("1"));
    let t = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(t.lines().next(), Some("iter,mu,lambda,value,cardinality,edges"));
    assert!(t.lines().last().unwrap().starts_with("final,"));

    let o = sks(&[
        "iterate", "-i", p(&g), "-k", "5", "--method", "lria", "--solver", "oracle", "--lambda-init", "-5",
        "--max-iters", "2", "--out", p(&row),
    ]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "value"), Some("absent"));
    let csv = std::fs::read_to_string(&row).unwrap();
    let data = csv.lines().nth(1).unwrap();
    assert!(data.contains(",false,,,,absent,"), "{data}");
}

#[test]
fn bench_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("m.toml");
    write(
        &manifest,
        r#"
[settings]
sa_reads = 10
sa_sweeps = 100

[[job]]
generator = { kind = "er", n = 10, p = 0.5, seed = 1 }
k = 4
method = "alia"

[[job]]
generator = { kind = "er", n = 11, p = 0.5, seed = 2 }
k = 5
method = "lria"
seed = 4

[[job]]
generator = { kind = "bipartite", a = 5, b = 6, p = 0.5, seed = 3 }
k = 5
sense = "densest"
method = "qpia"
optimum = 6
"#,
    );
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let o = sks(&["bench", p(&manifest), "-o", p(&a), "--summary"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("qpia"));
    assert!(sks(&["bench", p(&manifest), "-o", p(&b)]).status.success());
    let (a, b) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(a, b);
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 4);
}

#[test]
fn bench_rejects_unknown_method_before_running() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("m.toml");
    write(
        &manifest,
        "[[job]]\ngenerator = { kind = \"er\", n = 8, p = 0.5, seed = 1 }\nk = 3\nmethod = \"alia\"\n\n[[job]]\ngenerator = { kind = \"er\", n = 8, p = 0.5, seed = 1 }\nk = 3\nmethod = \"tabu\"\n",
    );
    let out = dir.path().join("out.csv");
    let o = sks(&["bench", p(&manifest), "-o", p(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("job 2"));
    assert!(!out.exists());
}

#[test]
fn exit_codes() {
    assert_eq!(sks(&[]).status.code(), Some(1));
    assert_eq!(sks(&["solve", "--relaxation", "xx"]).status.code(), Some(1));
    assert_eq!(sks(&["--help"]).status.code(), Some(0));
    assert_eq!(sks(&["exact", "-i", "/definitely/missing.dimacs", "-k", "2"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let k5 = dir.path().join("k5.dimacs");
    write(&k5, K5);
    assert_eq!(sks(&["exact", "-i", p(&k5), "-k", "9"]).status.code(), Some(2));
}

#[test]
fn flag_overrides_env_for_exhaustive_limit() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.dimacs");
    assert!(sks(&["gen", "er", "--n", "12", "--p", "0.5", "--seed", "1", "-o", p(&g)]).status.success());
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_sks"));
        c.args(["exact", "-i", p(&g), "-k", "3"]);
        if let Some(v) = env {
            c.env("SKS_EXHAUSTIVE_LIMIT", v);
        } else {
            c.env_remove("SKS_EXHAUSTIVE_LIMIT");
        }
        if let Some(v) = flag {
            c.args(["--exhaustive-limit", v]);
        }
        c.output().unwrap().status.code()
    };
    assert_eq!(run(None, None), Some(0));
    assert_eq!(run(Some("8"), None), Some(2));
    assert_eq!(run(Some("8"), Some("20")), Some(0));
    let cfg = dir.path().join("cfg.toml");
    write(&cfg, "exhaustive_limit = 8\n");
    let o = Command::new(env!("CARGO_BIN_EXE_sks"))
        .args(["exact", "-i", p(&g), "-k", "3", "--config", p(&cfg)])
        .env_remove("SKS_EXHAUSTIVE_LIMIT")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
