//! Line-oriented text format for weighted graphs.
//!
//! ```text
//! pstgraph 1
//! n 3
//! label 0 a
//! edge 0 1 1.0000000000000000e0
//! edge 1 1 2.0000000000000000e0
//! ```
//!
//! Edge lines list each unordered pair once (`u ≤ v`, `u = v` is a loop).
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use pstwalk_core::{Graph, Matrix};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: edge {u}-{v} repeated with weight {second} (first {first})")]
    ConflictingEdge {
        line: usize,
        u: usize,
        v: usize,
        first: f64,
        second: f64,
    },
    #[error("{0}")]
    Graph(#[from] pstwalk_core::Error),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

pub fn write_graph(g: &Graph) -> String {
    let n = g.n();
    let mut out = format!("pstgraph 1\nn {n}\n");
    if let Some(labels) = g.labels() {
        for (i, l) in labels.iter().enumerate() {
            writeln!(out, "label {i} {l}").unwrap();
        }
    }
    for u in 0..n {
        for v in u..n {
            let w = g.weight(u, v);
            if w != 0.0 {
                writeln!(out, "edge {u} {v} {w:.16e}").unwrap();
            }
        }
    }
    out
}

pub fn parse_graph(text: &str) -> Result<Graph, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, "pstgraph 1")) => {}
        Some((line, other)) => {
            return Err(syntax(
                line,
                format!("expected header `pstgraph 1`, found `{other}`"),
            ))
        }
        None => return Err(syntax(1, "empty input")),
    }
    let (line, size) = lines
        .next()
        .ok_or_else(|| syntax(2, "missing `n <count>` line"))?;
    let n = size
        .strip_prefix("n ")
        .and_then(|s| s.trim().parse::<usize>().ok())
        .ok_or_else(|| syntax(line, format!("expected `n <count>`, found `{size}`")))?;
    if n == 0 {
        return Err(syntax(line, "graph must have at least one vertex"));
    }
    let mut adj = Matrix::zeros(n, n);
    let mut seen = vec![false; n * n];
    let mut labels: Vec<Option<String>> = vec![None; n];
    let index = |line: usize, s: Option<&str>| -> Result<usize, FormatError> {
        let s = s.ok_or_else(|| syntax(line, "missing vertex index"))?;
        let i = s
            .parse::<usize>()
            .map_err(|_| syntax(line, format!("bad vertex index `{s}`")))?;
        if i >= n {
            return Err(syntax(line, format!("vertex {i} out of range for n = {n}")));
        }
        Ok(i)
    };
    for (line, text) in lines {
        let mut parts = text.splitn(2, char::is_whitespace);
        let keyword = parts.next().unwrap_or_default();
        let rest = parts.next().unwrap_or_default().trim();
        match keyword {
            "label" => {
                let mut p = rest.splitn(2, char::is_whitespace);
                let i = index(line, p.next())?;
                let name = p.next().map(str::trim).filter(|s| !s.is_empty());
                let name = name.ok_or_else(|| syntax(line, "missing label text"))?;
                if labels[i].replace(name.to_string()).is_some() {
                    return Err(syntax(line, format!("vertex {i} labelled twice")));
                }
            }
            "edge" => {
                let f: Vec<&str> = rest.split_whitespace().collect();
                if f.len() != 3 {
                    return Err(syntax(line, "expected `edge <u> <v> <weight>`"));
                }
                let (a, b) = (index(line, Some(f[0]))?, index(line, Some(f[1]))?);
                let (u, v) = (a.min(b), a.max(b));
                let w: f64 = f[2]
                    .parse()
                    .map_err(|_| syntax(line, format!("bad weight `{}`", f[2])))?;
                if !w.is_finite() {
                    return Err(syntax(line, "weight must be finite"));
                }
                if seen[u * n + v] {
                    let first = adj[(u, v)];
                    if first.to_bits() != w.to_bits() {
                        return Err(FormatError::ConflictingEdge {
                            line,
                            u,
                            v,
                            first,
                            second: w,
                        });
                    }
                }
                seen[u * n + v] = true;
                adj[(u, v)] = w;
                adj[(v, u)] = w;
            }
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }
    let g = Graph::from_matrix(adj)?;
    if labels.iter().all(Option::is_none) {
        return Ok(g);
    }
    let labels = labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.unwrap_or_else(|| i.to_string()))
        .collect();
    Ok(g.with_labels(labels)?)
}
