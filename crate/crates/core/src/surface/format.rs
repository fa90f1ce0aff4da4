//! Rotation-system text format: one line per vertex,
//! `<vertex>. (<neighbor> <neighbor> ...)`, with `#` comments.

use std::fmt::Write;

use super::{trace_faces, EmbeddedGraph, VertexId};
use crate::parse::{strip_comment, tokens, ParseError, Span};

pub fn parse_rotations(text: &str) -> Result<EmbeddedGraph, ParseError> {
    let mut rows: Vec<(VertexId, Vec<VertexId>)> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let at = |col: usize, msg: String| ParseError::new(Span::new(no + 1, col + 1), msg);
        let dot = line
            .find('.')
            .ok_or_else(|| at(0, "expected `<vertex>. (...)`".into()))?;
        let name = line[..dot].trim();
        let v: VertexId = name.parse().map_err(|e| at(0, e))?;
        let rest = &line[dot + 1..];
        let open = rest
            .find('(')
            .ok_or_else(|| at(dot + 1, "expected `(`".into()))?;
        let close = rest
            .rfind(')')
            .ok_or_else(|| at(line.len(), "expected `)`".into()))?;
        if close < open || !rest[close + 1..].trim().is_empty() {
            return Err(at(dot + 1 + close, "unexpected text after `)`".into()));
        }
        let body_start = dot + 1 + open + 1;
        let mut nbrs = Vec::new();
        for (off, tok) in tokens(&rest[open + 1..close]) {
            nbrs.push(tok.parse().map_err(|e| at(body_start + off, e))?);
        }
        rows.push((v, nbrs));
    }
    if rows.is_empty() {
        return Err(ParseError::new(Span::new(1, 1), "no vertices".into()));
    }
    EmbeddedGraph::from_adjacency(&rows)
        .map_err(|e| ParseError::new(Span::new(0, 0), e.to_string()))
}

/// Writes every rotation, vertices in name order, each rotation starting at
/// its stored first dart.
pub fn write_rotations(g: &EmbeddedGraph) -> String {
    let mut out = String::new();
    for v in g.sorted_vertices() {
        let nbrs: Vec<String> = g.neighbors(v).map(|w| g.label(w).to_string()).collect();
        let _ = writeln!(out, "{}. ({})", g.label(v), nbrs.join(" "));
    }
    out
}

pub fn write_faces(g: &EmbeddedGraph) -> String {
    let mut out = String::new();
    for f in trace_faces(g) {
        let vs: Vec<String> = f.vertices(g).iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "F: [{}]", vs.join(" "));
    }
    out
}
