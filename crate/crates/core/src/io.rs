//! Edge-list text format.
//!
//! ```text
//! n m [bipartite]
//! [s_0 s_1 ... s_{n-1}]     (only when bipartite)
//! u v                        (m lines, 0-based, u < v)
//! ```

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::graph::HostGraph;

fn perr<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

fn num(line: usize, tok: &str) -> Result<usize> {
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("expected a non-negative integer, got {tok:?}") })
}

pub fn parse_edge_list(text: &str) -> Result<HostGraph> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let Some((hl, header)) = lines.next() else {
        return perr(1, "missing header");
    };
    let head: Vec<&str> = header.split_whitespace().collect();
    let bipartite = match head.as_slice() {
        [_, _] => false,
        [_, _, "bipartite"] => true,
        _ => return perr(hl + 1, "header must be `n m` or `n m bipartite`"),
    };
    let n = num(hl + 1, head[0])?;
    let m = num(hl + 1, head[1])?;
    let sides = if bipartite {
        let Some((sl, s)) = lines.next() else {
            return perr(hl + 2, "missing side assignment");
        };
        let sides: Vec<u8> = s
            .split_whitespace()
            .map(|t| match t {
                "0" => Ok(0),
                "1" => Ok(1),
                _ => perr(sl + 1, format!("side must be 0 or 1, got {t:?}")),
            })
            .collect::<Result<_>>()?;
        if sides.len() != n {
            return perr(sl + 1, format!("expected {n} sides, got {}", sides.len()));
        }
        Some(sides)
    } else {
        None
    };
    let mut edges = Vec::with_capacity(m);
    for (i, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let [a, b] = toks.as_slice() else {
            return perr(i + 1, "edge line must be `u v`");
        };
        let (u, v) = (num(i + 1, a)?, num(i + 1, b)?);
        if u >= v {
            return perr(i + 1, format!("edge ({u},{v}) must satisfy u < v"));
        }
        if v >= n {
            return perr(i + 1, format!("vertex {v} out of range"));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return perr(hl + 1, format!("header declares {m} edges, found {}", edges.len()));
    }
    let g = HostGraph::from_edges(n, &edges).map_err(|e| Error::Parse { line: 0, msg: e.to_string() })?;
    match sides {
        Some(s) => g.with_bipartition(s).map_err(|e| Error::Parse { line: 0, msg: e.to_string() }),
        None => Ok(g),
    }
}

pub fn format_edge_list(g: &HostGraph) -> String {
    let mut out = String::new();
    match g.sides() {
        Some(s) => {
            writeln!(out, "{} {} bipartite", g.n(), g.edge_count()).unwrap();
            let line: Vec<String> = s.iter().map(u8::to_string).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
        None => writeln!(out, "{} {}", g.n(), g.edge_count()).unwrap(),
    }
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn read_graph(path: &std::path::Path) -> Result<HostGraph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}
