//! Plain-text graph and hypergraph files.
//!
//! Graphs: a header line `n m`, then `m` lines `a b` with `0 <= a < b < n`.
//! Hypergraphs: a header line `n m r`, then `m` lines of `r` strictly
//! increasing vertex indices. Blank lines and lines starting with `#` are
//! ignored. Writers emit edges in lexicographic order.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hypergraph::Hypergraph;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Data lines with their 1-based line numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_fields(line: usize, content: &str, expected: usize) -> Result<Vec<usize>> {
    let fields: Vec<usize> = content
        .split_whitespace()
        .map(|f| f.parse::<usize>().map_err(|_| parse_err(line, format!("not a nonnegative integer: {f:?}"))))
        .collect::<Result<_>>()?;
    if fields.len() != expected {
        return Err(parse_err(line, format!("expected {expected} fields, found {}", fields.len())));
    }
    Ok(fields)
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = data_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header `n m`"))?;
    let h = parse_fields(hline, header, 2)?;
    let (n, m) = (h[0], h[1]);
    let mut g = Graph::empty(n);
    let mut seen = 0usize;
    for (line, content) in lines {
        let f = parse_fields(line, content, 2)?;
        let (a, b) = (f[0], f[1]);
        if a >= b || b >= n {
            return Err(parse_err(line, format!("edge must satisfy 0 <= a < b < {n}, got {a} {b}")));
        }
        if g.has_edge(a, b) {
            return Err(parse_err(line, format!("duplicate edge {a} {b}")));
        }
        g.add_edge(a, b).map_err(|e| parse_err(line, e.to_string()))?;
        seen += 1;
    }
    if seen != m {
        return Err(parse_err(hline, format!("header announces {m} edges, found {seen}")));
    }
    Ok(g)
}

pub fn format_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (a, b) in g.edges() {
        let _ = writeln!(out, "{a} {b}");
    }
    out
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    parse_graph(&fs::read_to_string(path)?)
}

pub fn write_graph(path: impl AsRef<Path>, g: &Graph) -> Result<()> {
    Ok(fs::write(path, format_graph(g))?)
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut lines = data_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header `n m r`"))?;
    let h = parse_fields(hline, header, 3)?;
    let (n, m, r) = (h[0], h[1], h[2]);
    let mut hg = Hypergraph::new(n, r).map_err(|e| parse_err(hline, e.to_string()))?;
    let mut seen = 0usize;
    for (line, content) in lines {
        let edge = parse_fields(line, content, r)?;
        if edge.windows(2).any(|w| w[0] >= w[1]) {
            return Err(parse_err(line, "edge vertices must be strictly increasing"));
        }
        if edge[r - 1] >= n {
            return Err(parse_err(line, format!("vertex {} out of range for n = {n}", edge[r - 1])));
        }
        if !hg.add_edge(&edge).map_err(|e| parse_err(line, e.to_string()))? {
            return Err(parse_err(line, format!("duplicate edge {edge:?}")));
        }
        seen += 1;
    }
    if seen != m {
        return Err(parse_err(hline, format!("header announces {m} edges, found {seen}")));
    }
    Ok(hg)
}

pub fn format_hypergraph(h: &Hypergraph) -> String {
    let mut out = format!("{} {} {}\n", h.n(), h.edge_count(), h.r());
    let mut edges: Vec<&[usize]> = h.edges().collect();
    edges.sort_unstable();
    for e in edges {
        let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

pub fn read_hypergraph(path: impl AsRef<Path>) -> Result<Hypergraph> {
    parse_hypergraph(&fs::read_to_string(path)?)
}

pub fn write_hypergraph(path: impl AsRef<Path>, h: &Hypergraph) -> Result<()> {
    Ok(fs::write(path, format_hypergraph(h))?)
}
