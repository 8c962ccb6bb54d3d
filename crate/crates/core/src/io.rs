//! Text graph format and number formatting for reports.
//!
//! ```text
//! # comment
//! graph <n_vertices> <n_edges>
//! vertex <id> <mu> [<a>]
//! edge <id1> <id2> <omega>
//! ```
//!
//! Vertex ids are arbitrary whitespace-free labels; vertices are indexed in
//! the order their `vertex` lines appear. A potential may be given inline as
//! the optional last column of every vertex line, or in a separate file of
//! `vertex <id> <a>` lines.

use std::collections::HashMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{Graph, Potential, Vertex};

/// A parsed graph file.
#[derive(Debug, Clone)]
pub struct GraphFile {
    pub graph: Graph,
    pub potential: Option<Potential>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Content lines as `(1-based line number, tokens)`, comments stripped.
fn tokens(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let content = line.split('#').next().unwrap_or("");
        let toks: Vec<&str> = content.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn number(line: usize, tok: &str, what: &str) -> Result<f64> {
    tok.parse::<f64>()
        .map_err(|_| parse_err(line, format!("cannot parse {what} '{tok}'")))
}

fn count(line: usize, tok: &str, what: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| parse_err(line, format!("cannot parse {what} '{tok}'")))
}

pub fn parse_graph(text: &str) -> Result<GraphFile> {
    let mut header: Option<(usize, usize)> = None;
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, Vertex> = HashMap::new();
    let mut measure = Vec::new();
    let mut potential: Vec<Option<f64>> = Vec::new();
    let mut edges = Vec::new();
    let mut last_line = 0;

    for (line, toks) in tokens(text) {
        last_line = line;
        match toks[0] {
            "graph" => {
                if header.is_some() {
                    return Err(parse_err(line, "duplicate graph header"));
                }
                if toks.len() != 3 {
                    return Err(parse_err(line, "expected 'graph <n_vertices> <n_edges>'"));
                }
                header = Some((count(line, toks[1], "vertex count")?, count(line, toks[2], "edge count")?));
            }
            _ if header.is_none() => {
                return Err(parse_err(line, "expected 'graph <n_vertices> <n_edges>' header first"));
            }
            "vertex" => {
                if !(3..=4).contains(&toks.len()) {
                    return Err(parse_err(line, "expected 'vertex <id> <mu> [<a>]'"));
                }
                let label = toks[1].to_string();
                if index.contains_key(&label) {
                    return Err(parse_err(line, format!("vertex '{label}' declared twice")));
                }
                index.insert(label.clone(), labels.len());
                labels.push(label);
                measure.push(number(line, toks[2], "measure")?);
                potential.push(match toks.get(3) {
                    Some(t) => Some(number(line, t, "potential")?),
                    None => None,
                });
            }
            "edge" => {
                if toks.len() != 4 {
                    return Err(parse_err(line, "expected 'edge <id1> <id2> <omega>'"));
                }
                let lookup = |t: &str| {
                    index
                        .get(t)
                        .copied()
                        .ok_or_else(|| parse_err(line, format!("edge refers to undeclared vertex '{t}'")))
                };
                edges.push((lookup(toks[1])?, lookup(toks[2])?, number(line, toks[3], "weight")?));
            }
            other => return Err(parse_err(line, format!("unknown record '{other}'"))),
        }
    }

    let (nv, ne) = header.ok_or_else(|| parse_err(last_line.max(1), "missing graph header"))?;
    if labels.len() != nv {
        return Err(parse_err(
            last_line,
            format!("header declares {nv} vertices, found {}", labels.len()),
        ));
    }
    if edges.len() != ne {
        return Err(parse_err(
            last_line,
            format!("header declares {ne} edges, found {}", edges.len()),
        ));
    }
    let with_a = potential.iter().filter(|a| a.is_some()).count();
    let potential = if with_a == 0 {
        None
    } else if with_a == potential.len() {
        Some(Potential::new(potential.into_iter().flatten().collect())?)
    } else {
        return Err(parse_err(
            last_line,
            "potential column must be given on every vertex line or on none",
        ));
    };
    let graph = Graph::with_labels(labels, measure, &edges)?;
    Ok(GraphFile { graph, potential })
}

/// Parses a separate potential file of `vertex <id> <a>` lines; every vertex
/// of `g` must appear exactly once.
pub fn parse_potential(text: &str, g: &Graph) -> Result<Potential> {
    let mut values: Vec<Option<f64>> = vec![None; g.n_vertices()];
    let mut last_line = 0;
    for (line, toks) in tokens(text) {
        last_line = line;
        if toks[0] != "vertex" || toks.len() != 3 {
            return Err(parse_err(line, "expected 'vertex <id> <a>'"));
        }
        let x = g
            .vertex(toks[1])
            .map_err(|_| parse_err(line, format!("unknown vertex '{}'", toks[1])))?;
        if values[x].is_some() {
            return Err(parse_err(line, format!("vertex '{}' given twice", toks[1])));
        }
        values[x] = Some(number(line, toks[2], "potential")?);
    }
    if let Some(x) = values.iter().position(Option::is_none) {
        return Err(parse_err(
            last_line,
            format!("no potential value for vertex '{}'", g.label(x)),
        ));
    }
    Potential::new(values.into_iter().flatten().collect())
}

/// Writes `g` (and optionally an inline potential) in the text format.
/// Floats use the shortest representation that reads back bit-exactly.
pub fn write_graph(g: &Graph, potential: Option<&Potential>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph {} {}", g.n_vertices(), g.n_edges());
    for x in 0..g.n_vertices() {
        match potential {
            Some(a) => {
                let _ = writeln!(out, "vertex {} {:?} {:?}", g.label(x), g.mu(x), a.values()[x]);
            }
            None => {
                let _ = writeln!(out, "vertex {} {:?}", g.label(x), g.mu(x));
            }
        }
    }
    for (x, y, w) in g.edges() {
        let _ = writeln!(out, "edge {} {} {:?}", g.label(x), g.label(y), w);
    }
    out
}

/// SHA-256 of the canonical text form, hex encoded.
pub fn graph_hash(g: &Graph, potential: Option<&Potential>) -> String {
    hex::encode(Sha256::digest(write_graph(g, potential).as_bytes()))
}

/// `x` rounded to `digits` significant digits, printed in the shortest form
/// that reads back as the rounded value. Very small or large magnitudes use
/// exponent notation.
pub fn format_significant(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .unwrap_or(x);
    let mag = rounded.abs();
    if mag != 0.0 && !(1e-4..1e15).contains(&mag) {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}
