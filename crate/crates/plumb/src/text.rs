//! Text formats: plumbing graphs, lattice subsets and Seifert invariants.
//!
//! Graph files are line oriented UTF-8 with `#` comments:
//!
//! ```text
//! v <id> <weight>
//! e <id> <id>
//! root <id>        # optional, at most one
//! ```
//!
//! Ids are nonempty alphanumeric tokens; weights are decimal integers with
//! an optional sign. Parsing is strict: unknown directives, duplicate ids,
//! dangling edges or repeated roots are errors with line diagnostics.
//!
//! Lattice subset files hold one vector per line as space-separated
//! integers, with `#` comments; all rows must have the same length.
//!
//! Seifert invariants use the syntax `b; (a1,b1) (a2,b2) ...`.

use num_bigint::BigInt;
use thiserror::Error;

use crate::graph::{GraphError, PlumbingGraph, VertexId};
use crate::lattice::{LatticeSubset, LatticeVector};
use crate::seifert::{SeifertError, SeifertInvariants};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {err}")]
    Graph { line: usize, err: GraphError },
    #[error("invalid seifert invariants: {0}")]
    Seifert(#[from] SeifertError),
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn is_valid_id(tok: &str) -> bool {
    !tok.is_empty() && tok.chars().all(|c| c.is_ascii_alphanumeric())
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Parses the graph text format; returns the graph and the optional root.
pub fn parse_graph(input: &str) -> Result<(PlumbingGraph, Option<VertexId>), ParseError> {
    let mut vertices: Vec<(VertexId, i64)> = Vec::new();
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    let mut root: Option<(usize, VertexId)> = None;
    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "v" => {
                if toks.len() != 3 {
                    return Err(syntax(line_no, "expected `v <id> <weight>`"));
                }
                if !is_valid_id(toks[1]) {
                    return Err(syntax(line_no, format!("invalid id `{}`", toks[1])));
                }
                let w: i64 = toks[2]
                    .parse()
                    .map_err(|_| syntax(line_no, format!("invalid weight `{}`", toks[2])))?;
                vertices.push((VertexId::new(toks[1]), w));
            }
            "e" => {
                if toks.len() != 3 {
                    return Err(syntax(line_no, "expected `e <id> <id>`"));
                }
                for t in &toks[1..] {
                    if !is_valid_id(t) {
                        return Err(syntax(line_no, format!("invalid id `{t}`")));
                    }
                }
                edges.push((VertexId::new(toks[1]), VertexId::new(toks[2])));
            }
            "root" => {
                if toks.len() != 2 || !is_valid_id(toks[1]) {
                    return Err(syntax(line_no, "expected `root <id>`"));
                }
                if root.is_some() {
                    return Err(syntax(line_no, "more than one root directive"));
                }
                root = Some((line_no, VertexId::new(toks[1])));
            }
            other => {
                return Err(syntax(line_no, format!("unknown directive `{other}`")));
            }
        }
    }
    let graph = PlumbingGraph::from_parts(vertices, edges)
        .map_err(|err| ParseError::Graph { line: 0, err })?;
    let root = match root {
        Some((line, id)) => {
            if !graph.contains(&id) {
                return Err(syntax(line, format!("root `{id}` is not a vertex")));
            }
            Some(id)
        }
        None => None,
    };
    Ok((graph, root))
}

/// Writes a graph in the text format, vertices and edges in canonical order.
pub fn format_graph(g: &PlumbingGraph, root: Option<&VertexId>) -> String {
    let mut out = String::new();
    for (v, w) in g.vertices() {
        out.push_str(&format!("v {v} {w}\n"));
    }
    for (a, b) in g.edges() {
        out.push_str(&format!("e {a} {b}\n"));
    }
    if let Some(r) = root {
        out.push_str(&format!("root {r}\n"));
    }
    out
}

/// Parses the lattice subset format: one vector per line.
pub fn parse_subset(input: &str) -> Result<LatticeSubset, ParseError> {
    let mut rows: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let mut coords = Vec::new();
        for tok in line.split_whitespace() {
            let v: BigInt = tok
                .parse()
                .map_err(|_| syntax(line_no, format!("invalid integer `{tok}`")))?;
            coords.push(v);
        }
        rows.push((line_no, coords));
    }
    if rows.is_empty() {
        return Err(syntax(0, "empty lattice subset"));
    }
    let ambient = rows[0].1.len();
    for (line_no, r) in &rows {
        if r.len() != ambient {
            return Err(syntax(
                *line_no,
                format!("expected {ambient} coordinates, found {}", r.len()),
            ));
        }
    }
    Ok(LatticeSubset::new(
        ambient,
        rows.into_iter()
            .map(|(_, coords)| LatticeVector::new(coords))
            .collect(),
    ))
}

pub fn format_subset(s: &LatticeSubset) -> String {
    let mut out = String::new();
    for v in s.vectors() {
        let coords: Vec<String> = v.coords().iter().map(|c| c.to_string()).collect();
        out.push_str(&coords.join(" "));
        out.push('\n');
    }
    out
}

/// Parses Seifert invariants: `b; (a1,b1) (a2,b2) ...`.
pub fn parse_seifert(input: &str) -> Result<SeifertInvariants, ParseError> {
    let input = input.trim();
    let (b_part, pairs_part) = match input.split_once(';') {
        Some((b, rest)) => (b.trim(), rest.trim()),
        None => (input, ""),
    };
    let b: i64 = b_part
        .parse()
        .map_err(|_| syntax(1, format!("invalid integer `{b_part}`")))?;
    let mut pairs = Vec::new();
    let mut rest = pairs_part;
    while !rest.is_empty() {
        let open = rest
            .find('(')
            .ok_or_else(|| syntax(1, "expected `(alpha,beta)`"))?;
        if !rest[..open].trim().is_empty() {
            return Err(syntax(1, format!("unexpected text `{}`", &rest[..open])));
        }
        let close = rest
            .find(')')
            .ok_or_else(|| syntax(1, "unterminated `(`"))?;
        let body = &rest[open + 1..close];
        let (a_str, b_str) = body
            .split_once(',')
            .ok_or_else(|| syntax(1, "expected `alpha,beta`"))?;
        let alpha: i64 = a_str
            .trim()
            .parse()
            .map_err(|_| syntax(1, format!("invalid integer `{a_str}`")))?;
        let beta: i64 = b_str
            .trim()
            .parse()
            .map_err(|_| syntax(1, format!("invalid integer `{b_str}`")))?;
        pairs.push((alpha, beta));
        rest = rest[close + 1..].trim_start();
    }
    Ok(SeifertInvariants::new(b, pairs)?)
}
