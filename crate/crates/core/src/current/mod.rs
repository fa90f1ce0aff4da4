//! Current graphs over the cyclic group Z_m, their logs, and the checks a
//! current graph must pass before it can generate a triangular embedding.

mod format;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::surface::{trace_faces, Dart, EmbedError, EmbeddedGraph, Letter, VertexId};

pub use format::{parse_current_graph, write_current_graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VortexKind {
    V1,
    V2,
    V3,
}

impl fmt::Display for VortexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VortexKind::V1 => "V1",
            VortexKind::V2 => "V2",
            VortexKind::V3 => "V3",
        })
    }
}

/// Letters attached to a vortex. Letter `k` sits at the corner that follows
/// the `k`-th dart of the vortex's rotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vortex {
    pub letters: Vec<Letter>,
    pub declared: Option<VortexKind>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurrentError {
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error("modulus must be at least 2, got {0}")]
    Modulus(u32),
    #[error("current {value} on dart {dart:?} is not reduced mod {modulus}")]
    Unreduced { dart: Dart, value: u32, modulus: u32 },
    #[error("currents on the two darts of edge {0} do not cancel")]
    NotAntisymmetric(u32),
    #[error("vortex {vertex} has {letters} letter(s) but degree {degree}")]
    LetterCount { vertex: String, letters: usize, degree: usize },
    #[error("letter {0} is used twice")]
    RepeatedLetter(Letter),
    #[error("current graph has {0} faces, not 1")]
    Index(usize),
    #[error("vertex {0} is not labeled")]
    NotLabeled(String),
    #[error("vertex {vertex} is not a vortex of any type: {reasons}")]
    Unclassifiable { vertex: String, reasons: String },
    #[error("no vertex named {0}")]
    UnknownVertex(String),
    #[error("current {0} appears on more than one outgoing dart")]
    AmbiguousCurrent(u32),
    #[error("no dart carries current {0}")]
    Unpaired(u32),
}

/// An embedded graph with currents on its darts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurrentGraph {
    graph: EmbeddedGraph,
    names: Vec<String>,
    modulus: u32,
    current: Vec<u32>,
    vortices: BTreeMap<usize, Vortex>,
    case: Option<u32>,
}

/// One vertex given by its outgoing currents in rotation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSpec {
    pub name: String,
    pub currents: Vec<u32>,
    pub letters: Vec<Letter>,
    /// The degree-1 endpoint of the order-2 current.
    pub pendant: bool,
}

impl VertexSpec {
    pub fn plain(name: impl Into<String>, currents: Vec<u32>) -> Self {
        VertexSpec { name: name.into(), currents, letters: Vec::new(), pendant: false }
    }

    pub fn vortex(name: impl Into<String>, currents: Vec<u32>, letters: Vec<Letter>) -> Self {
        VertexSpec { name: name.into(), currents, letters, pendant: false }
    }

    pub fn pendant(name: impl Into<String>, modulus: u32) -> Self {
        VertexSpec { name: name.into(), currents: vec![modulus / 2], letters: Vec::new(), pendant: true }
    }
}

pub(crate) fn reduce(x: i64, m: u32) -> u32 {
    x.rem_euclid(m as i64) as u32
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl CurrentGraph {
    pub fn new(
        graph: EmbeddedGraph,
        names: Vec<String>,
        modulus: u32,
        current: Vec<u32>,
        vortices: BTreeMap<usize, Vortex>,
        case: Option<u32>,
    ) -> Result<Self, CurrentError> {
        if modulus < 2 {
            return Err(CurrentError::Modulus(modulus));
        }
        assert_eq!(current.len(), graph.dart_count());
        assert_eq!(names.len(), graph.vertex_count());
        for (i, &c) in current.iter().enumerate() {
            if c >= modulus {
                return Err(CurrentError::Unreduced { dart: Dart(i as u32), value: c, modulus });
            }
        }
        for e in 0..graph.edge_count() {
            if !(current[2 * e] + current[2 * e + 1]).is_multiple_of(modulus) {
                return Err(CurrentError::NotAntisymmetric(e as u32));
            }
        }
        let mut seen = Vec::new();
        for (&v, vx) in &vortices {
            if vx.letters.len() != graph.degree(v) {
                return Err(CurrentError::LetterCount {
                    vertex: names[v].clone(),
                    letters: vx.letters.len(),
                    degree: graph.degree(v),
                });
            }
            for &l in &vx.letters {
                if seen.contains(&l) {
                    return Err(CurrentError::RepeatedLetter(l));
                }
                seen.push(l);
            }
        }
        Ok(CurrentGraph { graph, names, modulus, current, vortices, case })
    }

    /// Builds a current graph from outgoing currents. The dart carrying `c`
    /// is paired with the dart carrying `-c`; the order-2 current pairs the
    /// pendant with the one other vertex that lists it.
    pub fn from_outgoing(
        modulus: u32,
        specs: &[VertexSpec],
        case: Option<u32>,
    ) -> Result<Self, CurrentError> {
        if modulus < 2 {
            return Err(CurrentError::Modulus(modulus));
        }
        let half = if modulus.is_multiple_of(2) { Some(modulus / 2) } else { None };
        // (vertex, slot) for each outgoing current; pendants tracked apart.
        let mut owner: BTreeMap<u32, (usize, usize)> = BTreeMap::new();
        let mut pendant_slots = Vec::new();
        for (v, spec) in specs.iter().enumerate() {
            for (k, &c) in spec.currents.iter().enumerate() {
                let c = c % modulus;
                if spec.pendant {
                    pendant_slots.push((v, k));
                } else if owner.insert(c, (v, k)).is_some() {
                    return Err(CurrentError::AmbiguousCurrent(c));
                }
            }
        }
        let mut tail = Vec::new();
        let mut current = Vec::new();
        let mut rot: Vec<Vec<Dart>> = specs.iter().map(|s| vec![Dart(0); s.currents.len()]).collect();
        let mut done = vec![false; modulus as usize];
        let mut push_edge = |a: (usize, usize), b: (usize, usize), c: u32, tail: &mut Vec<u32>, current: &mut Vec<u32>| {
            let d = Dart(tail.len() as u32);
            tail.push(a.0 as u32);
            tail.push(b.0 as u32);
            current.push(c);
            current.push((modulus - c) % modulus);
            rot[a.0][a.1] = d;
            rot[b.0][b.1] = d.reverse();
        };
        for (&c, &a) in &owner {
            if done[c as usize] {
                continue;
            }
            if Some(c) == half {
                let Some(&b) = pendant_slots.first() else {
                    return Err(CurrentError::Unpaired(c));
                };
                pendant_slots.remove(0);
                push_edge(a, b, c, &mut tail, &mut current);
                done[c as usize] = true;
                continue;
            }
            let neg = (modulus - c) % modulus;
            let &b = owner.get(&neg).ok_or(CurrentError::Unpaired(neg))?;
            push_edge(a, b, c, &mut tail, &mut current);
            done[c as usize] = true;
            done[neg as usize] = true;
        }
        if let Some(&(v, _)) = pendant_slots.first() {
            return Err(CurrentError::Unpaired(specs[v].currents[0]));
        }
        let labels: Vec<VertexId> = (0..specs.len()).map(|i| VertexId::Anonymous(i as u32)).collect();
        let graph = EmbeddedGraph::from_darts(labels, tail, rot)?;
        let names = specs.iter().map(|s| s.name.clone()).collect();
        let vortices = specs
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.letters.is_empty())
            .map(|(v, s)| (v, Vortex { letters: s.letters.clone(), declared: None }))
            .collect();
        CurrentGraph::new(graph, names, modulus, current, vortices, case)
    }

    pub fn graph(&self) -> &EmbeddedGraph {
        &self.graph
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn case(&self) -> Option<u32> {
        self.case
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex_named(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn current(&self, d: Dart) -> u32 {
        self.current[d.0 as usize]
    }

    pub fn vortices(&self) -> &BTreeMap<usize, Vortex> {
        &self.vortices
    }

    /// Same graph with one edge's current shifted by `delta` (the reverse
    /// dart shifts by `-delta`). Used for perturbation experiments.
    pub fn with_shifted_edge(&self, edge: usize, delta: i64) -> CurrentGraph {
        let mut g = self.clone();
        let m = self.modulus;
        g.current[2 * edge] = reduce(self.current[2 * edge] as i64 + delta, m);
        g.current[2 * edge + 1] = reduce(self.current[2 * edge + 1] as i64 - delta, m);
        g
    }

    /// The mirror image: every rotation reversed.
    pub fn mirrored(&self) -> CurrentGraph {
        let labels = self.graph.labels().to_vec();
        let tail: Vec<u32> = (0..self.graph.dart_count())
            .map(|d| self.graph.tail(Dart(d as u32)) as u32)
            .collect();
        let rot: Vec<Vec<Dart>> = (0..self.graph.vertex_count())
            .map(|v| {
                let r = self.graph.rotation(v);
                // keep dart 0 first, reverse the rest so letter k keeps its dart
                let mut out = vec![r[0]];
                out.extend(r[1..].iter().rev());
                out
            })
            .collect();
        let graph = EmbeddedGraph::from_darts(labels, tail, rot).expect("same darts");
        let vortices = self
            .vortices
            .iter()
            .map(|(&v, vx)| {
                // Dart k moves to slot n-k, so the corner after it is the
                // old corner n-1-k.
                let letters = vx.letters.iter().rev().copied().collect();
                (v, Vortex { letters, declared: vx.declared })
            })
            .collect();
        CurrentGraph { graph, vortices, ..self.clone() }
    }

    fn is_pendant(&self, v: usize) -> bool {
        self.graph.degree(v) == 1
            && !self.vortices.contains_key(&v)
            && self.modulus.is_multiple_of(2)
            && self.current(self.graph.rotation(v)[0]) == self.modulus / 2
    }

    /// Sum of the currents entering `v`.
    pub fn excess(&self, v: usize) -> u32 {
        let m = self.modulus as u64;
        let s: u64 = self
            .graph
            .rotation(v)
            .iter()
            .map(|&d| self.current(d.reverse()) as u64)
            .sum();
        (s % m) as u32
    }

    pub fn classify_vortex(&self, v: usize) -> Result<VortexClassification, CurrentError> {
        let name = self.names.get(v).ok_or_else(|| CurrentError::UnknownVertex(v.to_string()))?;
        if !self.vortices.contains_key(&v) {
            return Err(CurrentError::NotLabeled(name.clone()));
        }
        self.classify_any(v).map_err(|reasons| CurrentError::Unclassifiable {
            vertex: name.clone(),
            reasons: reasons.join("; "),
        })
    }

    pub(crate) fn classify_any(&self, v: usize) -> Result<VortexClassification, Vec<String>> {
        let m = self.modulus;
        let ex = self.excess(v);
        let g = gcd(ex, m);
        let vertex = self.names[v].clone();
        match self.graph.degree(v) {
            1 if g == 1 => Ok(VortexClassification { vertex, kind: VortexKind::V1, excess: ex, residue_class: None }),
            1 if g == 2 => Ok(VortexClassification { vertex, kind: VortexKind::V2, excess: ex, residue_class: None }),
            1 => Err(vec![format!("degree 1 with excess {ex}, gcd(excess, {m}) = {g} is neither 1 nor 2")]),
            3 => {
                let mut reasons = Vec::new();
                if g != 3 {
                    reasons.push(format!("excess {ex} has gcd {g} with {m}, not 3"));
                }
                let classes: Vec<u32> = self
                    .graph
                    .rotation(v)
                    .iter()
                    .map(|&d| self.current(d.reverse()) % 3)
                    .collect();
                let j = classes[0];
                if !m.is_multiple_of(3) || j == 0 || classes.iter().any(|&c| c != j) {
                    reasons.push(format!("incoming currents mod 3 are {classes:?}"));
                }
                if reasons.is_empty() {
                    Ok(VortexClassification { vertex, kind: VortexKind::V3, excess: ex, residue_class: Some(j) })
                } else {
                    Err(reasons)
                }
            }
            d => Err(vec![format!("degree {d}")]),
        }
    }

    /// Checks (C1)–(C5). Failures are reported, never raised.
    pub fn check_principles(&self) -> PrincipleReport {
        let g = &self.graph;
        let m = self.modulus;
        let mut results = Vec::new();

        let bad_degree = (0..g.vertex_count()).find(|&v| !matches!(g.degree(v), 1 | 3));
        results.push(PrincipleResult {
            principle: Principle::C1,
            witness: bad_degree.map(|v| Witness::Degree { vertex: self.names[v].clone(), degree: g.degree(v) }),
        });

        let faces = trace_faces(g).len();
        let c2 = if faces != 1 {
            Some(Witness::Index { faces })
        } else {
            let log = self.raw_log();
            let mut count = vec![0u32; m as usize];
            for &c in &log {
                count[c as usize] += 1;
            }
            let duplicates: Vec<u32> = (1..m).filter(|&c| count[c as usize] > 1).collect();
            let missing: Vec<u32> = (1..m).filter(|&c| count[c as usize] == 0).collect();
            let zero = count[0] > 0;
            if duplicates.is_empty() && missing.is_empty() && !zero {
                None
            } else {
                Some(Witness::Log { duplicates, missing, zero })
            }
        };
        results.push(PrincipleResult { principle: Principle::C2, witness: c2 });

        let c3 = if !m.is_multiple_of(2) {
            Some(Witness::NoOrder2)
        } else {
            let h = m / 2;
            let carriers: Vec<usize> = (0..g.edge_count())
                .filter(|&e| self.current[2 * e] == h)
                .collect();
            let ok = carriers.iter().any(|&e| {
                let (d, r) = (Dart(2 * e as u32), Dart(2 * e as u32 + 1));
                [g.tail(d), g.tail(r)]
                    .iter()
                    .any(|&v| g.degree(v) == 1 && !self.vortices.contains_key(&v))
            });
            if ok && carriers.len() == 1 {
                None
            } else if carriers.is_empty() {
                Some(Witness::NoOrder2)
            } else {
                Some(Witness::Order2NotPendant { edges: carriers.len() })
            }
        };
        results.push(PrincipleResult { principle: Principle::C3, witness: c3 });

        let c4 = (0..g.vertex_count())
            .filter(|v| !self.vortices.contains_key(v) && g.degree(*v) == 3)
            .find(|&v| self.excess(v) != 0)
            .map(|v| Witness::Kirchhoff { vertex: self.names[v].clone(), excess: self.excess(v) });
        results.push(PrincipleResult { principle: Principle::C4, witness: c4 });

        let mut c5 = None;
        for v in 0..g.vertex_count() {
            let why = if let Some(vx) = self.vortices.get(&v) {
                match self.classify_any(v) {
                    Ok(c) if vx.declared.is_some_and(|k| k != c.kind) => {
                        Some(format!("declared {} but classifies as {}", vx.declared.unwrap(), c.kind))
                    }
                    Ok(_) => None,
                    Err(reasons) => Some(reasons.join("; ")),
                }
            } else if g.degree(v) == 1 && !self.is_pendant(v) {
                Some(format!("unlabeled degree-1 vertex with excess {}", self.excess(v)))
            } else {
                None
            };
            if let Some(reason) = why {
                c5 = Some(Witness::Vortex { vertex: self.names[v].clone(), reason });
                break;
            }
        }
        results.push(PrincipleResult { principle: Principle::C5, witness: c5 });

        PrincipleReport { results }
    }

    /// Currents along the face walk, the order-2 current recorded once.
    fn raw_log(&self) -> Vec<u32> {
        self.log_walk()
            .into_iter()
            .filter_map(|e| match e {
                LogEntry::Elem(c) => Some(c),
                LogEntry::Letter(_) => None,
            })
            .collect()
    }

    fn log_walk(&self) -> Vec<LogEntry> {
        let g = &self.graph;
        let face = trace_faces(g).remove(0);
        let mut out = Vec::with_capacity(face.len() + 8);
        for &d in &face.walk {
            if self.is_pendant(g.tail(d)) {
                continue;
            }
            out.push(LogEntry::Elem(self.current(d)));
            let head = g.head(d);
            if let Some(vx) = self.vortices.get(&head) {
                let k = g.position(d.reverse());
                out.push(LogEntry::Letter(vx.letters[k]));
            }
        }
        out
    }

    /// The log of the single face, letters at their vortex corners.
    pub fn trace_log(&self) -> Result<Log, CurrentError> {
        let faces = trace_faces(&self.graph).len();
        if faces != 1 {
            return Err(CurrentError::Index(faces));
        }
        Ok(Log { modulus: self.modulus, entries: self.log_walk() })
    }

    /// Vortex inventory: number of vortices of each kind.
    pub fn vortex_counts(&self) -> BTreeMap<VortexKind, usize> {
        let mut out = BTreeMap::new();
        for &v in self.vortices.keys() {
            if let Ok(c) = self.classify_any(v) {
                *out.entry(c.kind).or_insert(0) += 1;
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VortexClassification {
    pub vertex: String,
    pub kind: VortexKind,
    pub excess: u32,
    /// For (V3): the common residue of the incoming currents mod 3.
    pub residue_class: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Principle {
    C1,
    C2,
    C3,
    C4,
    C5,
}

impl fmt::Display for Principle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Degree { vertex: String, degree: usize },
    Index { faces: usize },
    Log { duplicates: Vec<u32>, missing: Vec<u32>, zero: bool },
    NoOrder2,
    Order2NotPendant { edges: usize },
    Kirchhoff { vertex: String, excess: u32 },
    Vortex { vertex: String, reason: String },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Degree { vertex, degree } => write!(f, "vertex {vertex} has degree {degree}"),
            Witness::Index { faces } => write!(f, "index {faces}"),
            Witness::Log { duplicates, missing, zero } => {
                let list = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
                write!(f, "duplicate [{}] missing [{}]", list(duplicates), list(missing))?;
                if *zero {
                    write!(f, " zero current")?;
                }
                Ok(())
            }
            Witness::NoOrder2 => write!(f, "no edge carries the order-2 element"),
            Witness::Order2NotPendant { edges } => {
                write!(f, "order-2 element on {edges} edge(s), not a single pendant edge")
            }
            Witness::Kirchhoff { vertex, excess } => write!(f, "vertex {vertex} has excess {excess}"),
            Witness::Vortex { vertex, reason } => write!(f, "vertex {vertex}: {reason}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrincipleResult {
    pub principle: Principle,
    pub witness: Option<Witness>,
}

impl PrincipleResult {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrincipleReport {
    pub results: Vec<PrincipleResult>,
}

impl PrincipleReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(PrincipleResult::holds)
    }

    pub fn get(&self, p: Principle) -> &PrincipleResult {
        self.results.iter().find(|r| r.principle == p).expect("every principle is reported")
    }

    /// The earliest failing principle, in checking order.
    pub fn first_failure(&self) -> Option<&PrincipleResult> {
        self.results.iter().find(|r| !r.holds())
    }
}

impl fmt::Display for PrincipleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            match &r.witness {
                None => writeln!(f, "{} PASS", r.principle)?,
                Some(w) => writeln!(f, "{} FAIL {w}", r.principle)?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogEntry {
    Elem(u32),
    Letter(Letter),
}

impl fmt::Display for LogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogEntry::Elem(c) => write!(f, "{c}"),
            LogEntry::Letter(l) => write!(f, "{l}"),
        }
    }
}

/// A cyclic log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Log {
    pub modulus: u32,
    pub entries: Vec<LogEntry>,
}

impl Log {
    pub fn parse(modulus: u32, text: &str) -> Result<Log, String> {
        let entries = text
            .split_whitespace()
            .map(|t| match t.parse::<u32>() {
                Ok(c) if c < modulus => Ok(LogEntry::Elem(c)),
                Ok(c) => Err(format!("{c} is not reduced mod {modulus}")),
                Err(_) => t.parse().map(LogEntry::Letter),
            })
            .collect::<Result<_, _>>()?;
        Ok(Log { modulus, entries })
    }

    /// The group elements, letters dropped.
    pub fn elements(&self) -> Vec<u32> {
        self.entries
            .iter()
            .filter_map(|e| match e {
                LogEntry::Elem(c) => Some(*c),
                LogEntry::Letter(_) => None,
            })
            .collect()
    }

    /// For each letter, the elements just before and after it.
    pub fn letter_corners(&self) -> Vec<(Letter, u32, u32)> {
        let n = self.entries.len();
        let mut out = Vec::new();
        for (i, e) in self.entries.iter().enumerate() {
            if let LogEntry::Letter(l) = e {
                let before = (1..n)
                    .map(|k| self.entries[(i + n - k) % n])
                    .find_map(|e| if let LogEntry::Elem(c) = e { Some(c) } else { None });
                let after = (1..n)
                    .map(|k| self.entries[(i + k) % n])
                    .find_map(|e| if let LogEntry::Elem(c) = e { Some(c) } else { None });
                if let (Some(p), Some(q)) = (before, after) {
                    out.push((*l, p, q));
                }
            }
        }
        out
    }

    /// True if `other` is a cyclic rotation of this log.
    pub fn cyclic_eq(&self, other: &Log) -> bool {
        let n = self.entries.len();
        if n != other.entries.len() || self.modulus != other.modulus {
            return false;
        }
        n == 0
            || (0..n).any(|k| (0..n).all(|i| self.entries[(i + k) % n] == other.entries[i]))
    }

    /// Reversed order with every element negated.
    pub fn reversed_negated(&self) -> Log {
        let m = self.modulus;
        let entries = self
            .entries
            .iter()
            .rev()
            .map(|e| match e {
                LogEntry::Elem(c) => LogEntry::Elem((m - c) % m),
                l => *l,
            })
            .collect();
        Log { modulus: m, entries }
    }
}

impl fmt::Display for Log {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outgoing_pairs_by_negation() {
        // Theta graph over Z_6 with currents 1, 2, 3 leaving A.
        let err = CurrentGraph::from_outgoing(
            6,
            &[VertexSpec::plain("A", vec![1, 2, 3]), VertexSpec::plain("B", vec![5, 4])],
            None,
        )
        .unwrap_err();
        assert_eq!(err, CurrentError::Unpaired(3));
        let g = CurrentGraph::from_outgoing(
            6,
            &[
                VertexSpec::plain("A", vec![1, 2, 3]),
                VertexSpec::plain("B", vec![5, 4]),
                VertexSpec::pendant("H", 6),
            ],
            None,
        )
        .unwrap();
        assert_eq!(g.graph().edge_count(), 3);
        assert_eq!(g.excess(0), 0);
        let total: u32 = (0..3).map(|v| g.excess(v)).sum::<u32>() % 6;
        assert_eq!(total, 0);
    }

    #[test]
    fn classify_rejects_half_excess() {
        // Degree-1 vertex whose excess is m/2: gcd is m/2, no type matches.
        let g = CurrentGraph::from_outgoing(
            18,
            &[
                VertexSpec::vortex("X", vec![9], vec![Letter::X]),
                VertexSpec::pendant("H", 18),
            ],
            None,
        )
        .unwrap();
        let x = g.vertex_named("X").unwrap();
        assert!(matches!(g.classify_vortex(x), Err(CurrentError::Unclassifiable { .. })));
    }

    #[test]
    fn log_parse_and_rotation() {
        let a = Log::parse(18, "9 6 13 u 2").unwrap();
        let b = Log::parse(18, "13 u 2 9 6").unwrap();
        assert!(a.cyclic_eq(&b));
        assert_eq!(a.to_string(), "9 6 13 u 2");
        assert_eq!(a.reversed_negated().to_string(), "16 u 5 12 9");
        assert!(Log::parse(18, "18").is_err());
    }

    const Z18: &str = include_str!("../../data/case2_s1.cg");
    const Z18_LOG: &str = "9 6 13 u 2 y 16 v 8 c 4 7 12 3 14 b 1 x 17 a 10 w 5 11 15";

    #[test]
    fn z18_log_and_principles() {
        let g = parse_current_graph(Z18).unwrap();
        let report = g.check_principles();
        assert!(report.all_pass(), "{report}");
        assert_eq!(g.trace_log().unwrap().to_string(), Z18_LOG);
        let counts = g.vortex_counts();
        assert_eq!(counts[&VortexKind::V1], 1);
        assert_eq!(counts[&VortexKind::V2], 1);
        assert_eq!(counts[&VortexKind::V3], 2);
        let abc = g.classify_vortex(g.vertex_named("ABC").unwrap()).unwrap();
        assert_eq!((abc.kind, abc.excess, abc.residue_class), (VortexKind::V3, 3, Some(2)));
    }

    #[test]
    fn mirror_reverses_and_negates_the_log() {
        let g = parse_current_graph(Z18).unwrap();
        let log = g.trace_log().unwrap();
        let mirror = g.mirrored().trace_log().unwrap();
        assert!(mirror.cyclic_eq(&log.reversed_negated()));
        assert!(!mirror.cyclic_eq(&log));
    }

    #[test]
    fn perturbation_breaks_c2() {
        let g = parse_current_graph(Z18).unwrap();
        let bad = g.with_shifted_edge(1, 1);
        let r = bad.check_principles();
        match &r.get(Principle::C2).witness {
            Some(Witness::Log { duplicates, missing, .. }) => {
                assert_eq!(duplicates, &vec![7, 11]);
                assert_eq!(missing, &vec![6, 12]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn two_faces_is_an_index_error() {
        // Both orientations of a theta graph over Z_8: one has a single
        // face, the other is planar with three.
        let results: Vec<_> = [vec![7, 6, 3], vec![7, 3, 6]]
            .into_iter()
            .map(|b| {
                let specs = [VertexSpec::plain("A", vec![1, 2, 5]), VertexSpec::plain("B", b)];
                CurrentGraph::from_outgoing(8, &specs, None).unwrap().trace_log().map(|l| l.entries.len())
            })
            .collect();
        assert!(results.contains(&Ok(6)));
        assert!(results.contains(&Err(CurrentError::Index(3))));
    }
}
