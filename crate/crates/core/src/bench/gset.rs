//! Gset text format: a header `n m` followed by `m` lines `i j w`,
//! 1-indexed and whitespace separated.

use std::fmt::Write as _;

use crate::model::{ModelError, WeightedGraph};

use super::BenchError;

fn parse_fields<const N: usize>(line: &str, line_no: usize) -> Result<[i64; N], BenchError> {
    let mut out = [0i64; N];
    let mut it = line.split_whitespace();
    for slot in out.iter_mut() {
        let tok = it.next().ok_or_else(|| BenchError::Parse {
            line: line_no,
            message: format!("expected {N} integers"),
        })?;
        *slot = tok.parse().map_err(|_| BenchError::Parse { line: line_no, message: format!("not an integer: {tok:?}") })?;
    }
    if let Some(extra) = it.next() {
        return Err(BenchError::Parse { line: line_no, message: format!("unexpected trailing token {extra:?}") });
    }
    Ok(out)
}

/// Parses a Gset file into a 0-indexed graph.
pub fn parse_gset(text: &str) -> Result<WeightedGraph, BenchError> {
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let (header_no, header) = lines.next().ok_or(BenchError::Parse { line: 1, message: "empty input".into() })?;
    let [n, m] = parse_fields::<2>(header, header_no)?;
    if n < 1 || m < 0 {
        return Err(BenchError::Parse { line: header_no, message: "vertex count must be positive".into() });
    }
    let n = n as usize;
    let mut edges = Vec::with_capacity(m as usize);
    for (line_no, line) in lines.by_ref().take(m as usize) {
        let [i, j, w] = parse_fields::<3>(line, line_no)?;
        if i < 1 || j < 1 || i as usize > n || j as usize > n {
            return Err(BenchError::Parse {
                line: line_no,
                message: format!("vertex index out of range 1..={n}"),
            });
        }
        edges.push((i as usize - 1, j as usize - 1, w, line_no));
    }
    if edges.len() != m as usize {
        return Err(BenchError::Parse {
            line: header_no,
            message: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(BenchError::Parse { line: line_no, message: "data after the declared edges".into() });
    }
    // Validate edge by edge to report the offending line.
    let mut seen = std::collections::HashSet::with_capacity(edges.len());
    for &(i, j, _, line_no) in &edges {
        if i == j {
            return Err(BenchError::Parse { line: line_no, message: format!("self-loop on vertex {}", i + 1) });
        }
        if !seen.insert((i.min(j), i.max(j))) {
            return Err(BenchError::Parse {
                line: line_no,
                message: format!("duplicate edge ({}, {})", i.min(j) + 1, i.max(j) + 1),
            });
        }
    }
    WeightedGraph::new(n, edges.into_iter().map(|(i, j, w, _)| (i, j, w))).map_err(|e: ModelError| BenchError::Parse {
        line: header_no,
        message: e.to_string(),
    })
}

/// Writes a graph in Gset format (1-indexed).
pub fn write_gset(g: &WeightedGraph) -> String {
    let mut out = String::with_capacity(16 * (g.edge_count() + 1));
    let _ = writeln!(out, "{} {}", g.n_vertices(), g.edge_count());
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {}", e.i + 1, e.j + 1, e.weight);
    }
    out
}
