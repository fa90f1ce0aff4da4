//! Current-graph text format.
//!
//! ```text
//! group 18
//! case 2
//! P B (e0+ e1+ e2-)
//! e0: P -> Q current 9
//! vortex X label x type V1
//! ```
//!
//! Darts are `<edge>+` (tail to head) and `<edge>-`. Vertex lines marked `W`
//! list their darts clockwise and are reversed on load. Vortex letters name
//! the corners after each stored dart in turn, so a `label bac` on a
//! degree-3 vortex puts `b` after its first dart.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

use super::{CurrentGraph, Vortex, VortexKind};
use crate::parse::{strip_comment, tokens, ParseError, Span};
use crate::surface::{Dart, EmbeddedGraph, Letter, VertexId};

struct VertexLine {
    name: String,
    darts: Vec<(String, bool, Span)>,
    white: bool,
}

struct EdgeLine {
    tail: (String, Span),
    head: (String, Span),
    current: i64,
}

pub fn parse_current_graph(text: &str) -> Result<CurrentGraph, ParseError> {
    let mut modulus = None;
    let mut case = None;
    let mut vertices: Vec<VertexLine> = Vec::new();
    let mut edges: Vec<(String, EdgeLine, Span)> = Vec::new();
    let mut vortex_lines: Vec<(String, Vec<Letter>, Option<VortexKind>, Span)> = Vec::new();

    for (no, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        let toks: Vec<(usize, &str)> = tokens(line).collect();
        let Some(&(_, first)) = toks.first() else { continue };
        let span = |i: usize| Span::new(no + 1, toks.get(i).map_or(line.len(), |t| t.0) + 1);
        let err = |i: usize, msg: String| ParseError::new(span(i), msg);
        let word = |i: usize| toks.get(i).map(|t| t.1).ok_or_else(|| err(i, "line ends early".into()));

        match first {
            "group" => {
                let m: u32 = word(1)?
                    .parse()
                    .map_err(|_| err(1, "expected a modulus".into()))?;
                if m < 2 {
                    return Err(err(1, format!("modulus {m} is too small")));
                }
                modulus = Some(m);
            }
            "case" => {
                case = Some(word(1)?.parse().map_err(|_| err(1, "expected a case number".into()))?);
            }
            "vortex" => {
                let name = word(1)?.to_string();
                if word(2)? != "label" {
                    return Err(err(2, "expected `label`".into()));
                }
                let letters = parse_letters(word(3)?).map_err(|e| err(3, e))?;
                let kind = match toks.get(4).map(|t| t.1) {
                    None => None,
                    Some("type") => Some(match word(5)? {
                        "V1" => VortexKind::V1,
                        "V2" => VortexKind::V2,
                        "V3" => VortexKind::V3,
                        other => return Err(err(5, format!("unknown vortex type `{other}`"))),
                    }),
                    Some(_) => return Err(err(4, "expected `type`".into())),
                };
                if toks.len() > 6 {
                    return Err(err(6, "unexpected text".into()));
                }
                vortex_lines.push((name, letters, kind, span(1)));
            }
            _ if first.ends_with(':') => {
                let id = first.trim_end_matches(':').to_string();
                if word(2)? != "->" {
                    return Err(err(2, "expected `->`".into()));
                }
                if word(4)? != "current" {
                    return Err(err(4, "expected `current`".into()));
                }
                let current = word(5)?
                    .parse()
                    .map_err(|_| err(5, "expected an integer current".into()))?;
                if toks.len() > 6 {
                    return Err(err(6, "unexpected text".into()));
                }
                let e = EdgeLine {
                    tail: (word(1)?.to_string(), span(1)),
                    head: (word(3)?.to_string(), span(3)),
                    current,
                };
                edges.push((id, e, span(0)));
            }
            _ => {
                let white = match word(1)? {
                    "B" => false,
                    "W" => true,
                    other => return Err(err(1, format!("expected B or W, found `{other}`"))),
                };
                let open = line.find('(').ok_or_else(|| err(2, "expected `(`".into()))?;
                let close = line.rfind(')').ok_or_else(|| err(toks.len(), "expected `)`".into()))?;
                if close < open || !line[close + 1..].trim().is_empty() {
                    return Err(ParseError::new(Span::new(no + 1, close + 2), "unexpected text after `)`".into()));
                }
                let mut darts = Vec::new();
                for (off, tok) in tokens(&line[open + 1..close]) {
                    let at = Span::new(no + 1, open + 2 + off);
                    let (edge, forward) = match tok.strip_suffix('+') {
                        Some(e) => (e, true),
                        None => match tok.strip_suffix('-') {
                            Some(e) => (e, false),
                            None => return Err(ParseError::new(at, format!("dart `{tok}` must end in + or -"))),
                        },
                    };
                    darts.push((edge.to_string(), forward, at));
                }
                vertices.push(VertexLine { name: first.to_string(), darts, white });
            }
        }
    }

    let whole = |msg: String| ParseError::new(Span::new(0, 0), msg);
    let modulus = modulus.ok_or_else(|| whole("missing `group` line".into()))?;
    if vertices.is_empty() {
        return Err(whole("no vertices".into()));
    }

    let mut vindex = HashMap::new();
    for (i, v) in vertices.iter().enumerate() {
        if vindex.insert(v.name.clone(), i).is_some() {
            return Err(whole(format!("vertex {} is declared twice", v.name)));
        }
    }
    let mut eindex = HashMap::new();
    let mut tail = vec![0u32; 2 * edges.len()];
    let mut current = vec![0u32; 2 * edges.len()];
    for (i, (id, e, at)) in edges.iter().enumerate() {
        if eindex.insert(id.clone(), i).is_some() {
            return Err(ParseError::new(*at, format!("edge {id} is declared twice")));
        }
        let find = |(n, s): &(String, Span)| {
            vindex
                .get(n)
                .copied()
                .ok_or_else(|| ParseError::new(*s, format!("unknown vertex `{n}`")))
        };
        tail[2 * i] = find(&e.tail)? as u32;
        tail[2 * i + 1] = find(&e.head)? as u32;
        let c = e.current.rem_euclid(modulus as i64) as u32;
        current[2 * i] = c;
        current[2 * i + 1] = (modulus - c) % modulus;
    }

    let mut used = vec![false; 2 * edges.len()];
    let mut rot = Vec::with_capacity(vertices.len());
    for (vi, v) in vertices.iter().enumerate() {
        let mut r = Vec::with_capacity(v.darts.len());
        for (edge, forward, at) in &v.darts {
            let &e = eindex
                .get(edge)
                .ok_or_else(|| ParseError::new(*at, format!("unknown edge `{edge}`")))?;
            let d = Dart(2 * e as u32 + u32::from(!forward));
            if tail[d.0 as usize] as usize != vi {
                return Err(ParseError::new(*at, format!("dart does not leave {}", v.name)));
            }
            if std::mem::replace(&mut used[d.0 as usize], true) {
                return Err(ParseError::new(*at, "dart listed twice".into()));
            }
            r.push(d);
        }
        if v.white {
            r.reverse();
        }
        rot.push(r);
    }
    if let Some(d) = used.iter().position(|u| !u) {
        let (id, _, at) = &edges[d / 2];
        let sign = if d % 2 == 0 { '+' } else { '-' };
        return Err(ParseError::new(*at, format!("dart {id}{sign} is in no rotation")));
    }

    let mut vortices = BTreeMap::new();
    for (name, letters, declared, at) in vortex_lines {
        let &v = vindex
            .get(&name)
            .ok_or_else(|| ParseError::new(at, format!("unknown vertex `{name}`")))?;
        if vortices.insert(v, Vortex { letters, declared }).is_some() {
            return Err(ParseError::new(at, format!("vortex {name} labeled twice")));
        }
    }

    let labels = (0..vertices.len()).map(|i| VertexId::Anonymous(i as u32)).collect();
    let graph = EmbeddedGraph::from_darts(labels, tail, rot).map_err(|e| whole(e.to_string()))?;
    let names = vertices.into_iter().map(|v| v.name).collect();
    CurrentGraph::new(graph, names, modulus, current, vortices, case).map_err(|e| whole(e.to_string()))
}

fn parse_letters(s: &str) -> Result<Vec<Letter>, String> {
    if let Ok(l) = s.parse::<Letter>() {
        return Ok(vec![l]);
    }
    s.chars().map(|c| c.to_string().parse::<Letter>()).collect()
}

/// Writes `g` with every vertex black and edges named `e<k>`.
pub fn write_current_graph(g: &CurrentGraph) -> String {
    let eg = g.graph();
    let mut out = String::new();
    let _ = writeln!(out, "group {}", g.modulus());
    if let Some(c) = g.case() {
        let _ = writeln!(out, "case {c}");
    }
    let dart = |d: Dart| format!("e{}{}", d.0 / 2, if d.0.is_multiple_of(2) { '+' } else { '-' });
    for v in 0..eg.vertex_count() {
        let ds: Vec<String> = eg.rotation(v).iter().map(|&d| dart(d)).collect();
        let _ = writeln!(out, "{} B ({})", g.name(v), ds.join(" "));
    }
    for e in 0..eg.edge_count() {
        let d = Dart(2 * e as u32);
        let _ = writeln!(
            out,
            "e{e}: {} -> {} current {}",
            g.name(eg.tail(d)),
            g.name(eg.head(d)),
            g.current(d)
        );
    }
    for (&v, vx) in g.vortices() {
        let label: String = vx.letters.iter().map(|l| l.as_str()).collect();
        let kind = g.classify_any(v).ok().map(|c| c.kind).or(vx.declared);
        match kind {
            Some(k) => {
                let _ = writeln!(out, "vortex {} label {label} type {k}", g.name(v));
            }
            None => {
                let _ = writeln!(out, "vortex {} label {label}", g.name(v));
            }
        }
    }
    out
}
