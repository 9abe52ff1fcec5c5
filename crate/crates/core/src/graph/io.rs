//! Graph file formats.
//!
//! DIMACS ascii: `c` comment lines, one `p edge <n> <m>` header, then
//! `e <u> <v>` lines with 1-based endpoints. The reader accepts duplicate and
//! reversed edges and does not hold the header's `m` against the edge lines;
//! the writer emits every edge once as `u < v` in sorted order.
//!
//! JSON: `{"n": 5, "edges": [[0, 1], ...]}` with 0-based endpoints; the writer
//! sorts edges.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

/// Largest vertex count accepted from a file; adjacency is `n²/8` bytes.
pub const MAX_FILE_VERTICES: usize = 1 << 16;

pub fn read_dimacs(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let line = raw.trim();
        let mut tok = line.split_ascii_whitespace();
        match tok.next() {
            None => continue,
            Some(t) if t.starts_with('c') => continue,
            Some("p") => {
                if n.is_some() {
                    return Err(err("second problem line".into()));
                }
                match tok.next() {
                    Some("edge") | Some("col") => {}
                    other => return Err(err(format!("expected `p edge`, found format {other:?}"))),
                }
                let count = parse_count(tok.next(), "vertex count").map_err(err)?;
                parse_count(tok.next(), "edge count").map_err(err)?;
                if tok.next().is_some() {
                    return Err(err("trailing tokens on problem line".into()));
                }
                if count == 0 || count > MAX_FILE_VERTICES {
                    return Err(err(format!("vertex count {count} outside 1..={MAX_FILE_VERTICES}")));
                }
                n = Some(count);
            }
            Some("e") => {
                let Some(nv) = n else {
                    return Err(err("edge line before problem line".into()));
                };
                let u = parse_count(tok.next(), "edge endpoint").map_err(err)?;
                let v = parse_count(tok.next(), "edge endpoint").map_err(err)?;
                if tok.next().is_some() {
                    return Err(err("trailing tokens on edge line".into()));
                }
                if u == 0 || v == 0 || u > nv || v > nv {
                    return Err(err(format!("endpoint out of range 1..={nv} in `e {u} {v}`")));
                }
                if u == v {
                    return Err(err(format!("self-loop on vertex {u}")));
                }
                edges.push((u - 1, v - 1));
            }
            Some(other) => return Err(err(format!("unknown line type `{other}`"))),
        }
    }
    let n = n.ok_or(Error::Parse { line: 0, msg: "missing `p edge` line".into() })?;
    Graph::new(n, &edges)
}

fn parse_count(tok: Option<&str>, what: &str) -> std::result::Result<usize, String> {
    let t = tok.ok_or_else(|| format!("missing {what}"))?;
    t.parse().map_err(|_| format!("bad {what} `{t}`"))
}

pub fn write_dimacs(g: &Graph) -> String {
    let edges = g.edges();
    let mut out = String::with_capacity(16 * edges.len() + 32);
    writeln!(out, "p edge {} {}", g.n(), edges.len()).unwrap();
    for (u, v) in edges {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    n: usize,
    edges: Vec<[usize; 2]>,
}

pub fn read_json(text: &str) -> Result<Graph> {
    let doc: GraphDoc = serde_json::from_str(text)?;
    if doc.n > MAX_FILE_VERTICES {
        return Err(Error::input(format!("vertex count {} exceeds {MAX_FILE_VERTICES}", doc.n)));
    }
    let edges: Vec<_> = doc.edges.iter().map(|e| (e[0], e[1])).collect();
    Graph::new(doc.n, &edges)
}

pub fn write_json(g: &Graph) -> String {
    let doc = GraphDoc { n: g.n(), edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect() };
    let mut s = serde_json::to_string(&doc).expect("graph serializes");
    s.push('\n');
    s
}

/// Picks the reader from the content: JSON documents start with `{`.
pub fn read_auto(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        read_json(text)
    } else {
        read_dimacs(text)
    }
}
