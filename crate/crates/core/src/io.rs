//! Text formats.
//!
//! Graph files carry a `p tww <n> <m>` header followed by `m` lines `<u> <v>`.
//! Sequence files are lines `<survivor> <merged>`. In both, lines starting with
//! `c ` are comments and blank lines are skipped.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::contraction::ContractionSequence;
use crate::trigraph::{EdgeKind, Trigraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: missing 'p tww <n> <m>' header")]
    MissingHeader { line: usize },
    #[error("line {line}: malformed header")]
    MalformedHeader { line: usize },
    #[error("line {line}: expected two vertex ids")]
    MalformedLine { line: usize },
    #[error("line {line}: declared {declared} edges, found {found}")]
    EdgeCountMismatch { line: usize, declared: usize, found: usize },
    #[error("line {line}: vertex {vertex} out of range 1..={n}")]
    OutOfRange { line: usize, vertex: u64, n: usize },
    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: u32, v: u32 },
    #[error("line {line}: self-loop at {vertex}")]
    SelfLoop { line: usize, vertex: u32 },
    #[error("input is not valid UTF-8")]
    Encoding,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WriteError {
    #[error("red edge {0} {1} cannot be written to a graph file")]
    RedEdge(VertexId, VertexId),
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && *l != "c" && !l.starts_with("c "))
}

fn two_ids(line: usize, text: &str) -> Result<(u64, u64), ParseError> {
    let mut it = text.split_ascii_whitespace();
    let parse = |t: Option<&str>| t.and_then(|t| t.parse::<u64>().ok());
    match (parse(it.next()), parse(it.next()), it.next()) {
        (Some(a), Some(b), None) => Ok((a, b)),
        _ => Err(ParseError::MalformedLine { line }),
    }
}

pub fn parse_graph(bytes: &[u8]) -> Result<Trigraph, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|_| ParseError::Encoding)?;
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(ParseError::MissingHeader { line: 1 })?;
    let fields: Vec<&str> = header.split_ascii_whitespace().collect();
    if fields.first() != Some(&"p") {
        return Err(ParseError::MissingHeader { line: hline });
    }
    let (n, m) = match fields.as_slice() {
        ["p", "tww", n, m] => match (n.parse::<usize>(), m.parse::<usize>()) {
            (Ok(n), Ok(m)) if n <= u32::MAX as usize => (n, m),
            _ => return Err(ParseError::MalformedHeader { line: hline }),
        },
        _ => return Err(ParseError::MalformedHeader { line: hline }),
    };

    let mut g = Trigraph::empty(n);
    let mut found = 0;
    let mut last_line = hline;
    for (line, text) in lines {
        last_line = line;
        let (a, b) = two_ids(line, text)?;
        for v in [a, b] {
            if v == 0 || v > n as u64 {
                return Err(ParseError::OutOfRange { line, vertex: v, n });
            }
        }
        let (u, v) = (a as u32, b as u32);
        if u == v {
            return Err(ParseError::SelfLoop { line, vertex: u });
        }
        found += 1;
        if found > m {
            return Err(ParseError::EdgeCountMismatch { line, declared: m, found });
        }
        if g.edge_kind(VertexId(u), VertexId(v)) != EdgeKind::Absent {
            return Err(ParseError::DuplicateEdge { line, u: u.min(v), v: u.max(v) });
        }
        g.set_edge(VertexId(u), VertexId(v), EdgeKind::Black)
            .expect("ids checked above");
    }
    if found != m {
        return Err(ParseError::EdgeCountMismatch { line: last_line, declared: m, found });
    }
    Ok(g)
}

/// Writes the black edges of `g`. Live vertices are renumbered `1..=n` in
/// ascending id order, so graphs whose ids are already `1..=n` are written as is.
pub fn write_graph(g: &Trigraph) -> Result<String, WriteError> {
    let (c, _) = g.compacted();
    let mut edges = Vec::new();
    for (u, v, k) in c.edges() {
        match k {
            EdgeKind::Black => edges.push((u, v)),
            _ => return Err(WriteError::RedEdge(u, v)),
        }
    }
    let mut out = format!("p tww {} {}\n", c.vertex_count(), edges.len());
    for (u, v) in edges {
        writeln!(out, "{u} {v}").expect("string write");
    }
    Ok(out)
}

pub fn parse_sequence(bytes: &[u8]) -> Result<ContractionSequence, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|_| ParseError::Encoding)?;
    let mut seq = ContractionSequence::default();
    for (line, text) in content_lines(text) {
        let (s, m) = two_ids(line, text)?;
        for v in [s, m] {
            if v == 0 || v > u32::MAX as u64 {
                return Err(ParseError::OutOfRange { line, vertex: v, n: u32::MAX as usize });
            }
        }
        seq.push(VertexId(s as u32), VertexId(m as u32));
    }
    Ok(seq)
}

pub fn write_sequence(seq: &ContractionSequence) -> String {
    let mut out = String::new();
    for s in &seq.steps {
        writeln!(out, "{} {}", s.survivor, s.merged).expect("string write");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad vertex id '{0}' in X list")]
pub struct XListError(pub String);

/// Parses `"1,2,5"`.
pub fn parse_x_list(text: &str) -> Result<BTreeSet<VertexId>, XListError> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<u32>() {
            Ok(v) if v >= 1 => Ok(VertexId(v)),
            _ => Err(XListError(t.to_string())),
        })
        .collect()
}

/// Parses one id per line; `c ` comments and blank lines allowed.
pub fn parse_x_file(text: &str) -> Result<BTreeSet<VertexId>, XListError> {
    content_lines(text)
        .map(|(_, t)| match t.parse::<u32>() {
            Ok(v) if v >= 1 => Ok(VertexId(v)),
            _ => Err(XListError(t.to_string())),
        })
        .collect()
}
