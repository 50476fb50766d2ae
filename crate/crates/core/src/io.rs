//! DIMACS-style edge-list files.
//!
//! ```text
//! c optional comment
//! p edge <n> <m>
//! e <i> <j>
//! ```
//!
//! Labels are 1-based. The writer emits edges sorted with `i < j`; the reader
//! accepts any order and orientation, drops duplicates, and ignores the
//! declared `m` beyond checking that it parses.

use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Result, SksError};
use crate::graph::Graph;

pub fn write_dimacs<W: Write>(g: &Graph, comment: Option<&str>, mut out: W) -> Result<()> {
    if let Some(c) = comment {
        for line in c.lines() {
            writeln!(out, "c {line}")?;
        }
    }
    writeln!(out, "p edge {} {}", g.n(), g.m())?;
    for &(i, j) in g.edges() {
        writeln!(out, "e {} {}", i + 1, j + 1)?;
    }
    Ok(())
}

pub fn dimacs_string(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_dimacs(g, None, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ascii output")
}

pub fn read_dimacs<R: BufRead>(input: R) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut pairs = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let mut tok = line.split_whitespace();
        let parse_err = |msg: String| SksError::Parse { line: lineno, msg };
        match tok.next() {
            None | Some("c") => continue,
            Some("p") => {
                if n.is_some() {
                    return Err(parse_err("duplicate problem line".into()));
                }
                match tok.next() {
                    Some("edge") | Some("edges") | Some("col") => {}
                    other => return Err(parse_err(format!("unsupported problem kind {other:?}"))),
                }
                let vn = parse_usize(tok.next(), "vertex count").map_err(parse_err)?;
                parse_usize(tok.next(), "edge count").map_err(parse_err)?;
                n = Some(vn);
            }
            Some("e") => {
                let vn = n.ok_or_else(|| parse_err("edge before problem line".into()))?;
                let i = parse_usize(tok.next(), "endpoint").map_err(parse_err)?;
                let j = parse_usize(tok.next(), "endpoint").map_err(parse_err)?;
                for v in [i, j] {
                    if v == 0 || v > vn {
                        return Err(parse_err(format!("vertex {v} out of range 1..={vn}")));
                    }
                }
                if i == j {
                    return Err(parse_err(format!("self-loop on vertex {i}")));
                }
                pairs.push((i - 1, j - 1));
            }
            Some(other) => return Err(parse_err(format!("unknown line type {other:?}"))),
        }
    }
    let n = n.ok_or(SksError::Parse {
        line: 0,
        msg: "missing problem line".into(),
    })?;
    Ok(Graph::from_zero_based(n, pairs))
}

fn parse_usize(tok: Option<&str>, what: &str) -> std::result::Result<usize, String> {
    let t = tok.ok_or_else(|| format!("missing {what}"))?;
    t.parse().map_err(|_| format!("bad {what} {t:?}"))
}

pub fn load_graph(path: &Path) -> Result<Graph> {
    let f = fs::File::open(path)?;
    read_dimacs(std::io::BufReader::new(f))
}

pub fn save_graph(path: &Path, g: &Graph, comment: Option<&str>) -> Result<()> {
    let f = fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(f);
    write_dimacs(g, comment, &mut w)?;
    w.flush()?;
    Ok(())
}
