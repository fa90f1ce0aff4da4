//! Cellular embeddings stored as rotation systems.
//!
//! Every edge owns two darts, `2e` and `2e + 1`, so `reverse` is a bit flip.
//! Faces are traced with a single global rule: after arriving along dart `d`,
//! leave along the rotation successor of `reverse(d)` at the head of `d`.
//! Swapping successor for predecessor would trace the mirror surface, which
//! has the same genus but reversed face walks.

mod format;
mod ops;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use format::{parse_rotations, write_faces, write_rotations};
pub use ops::{
    bridge, cascade_flip, edge_flip, identify_and_contract, insert_chord, insert_parallel_chord,
    replace_rotation, Flip, ParallelPolicy,
};
pub(crate) use ops::{cascade_in_place, insert_at_corners};

/// Names of lettered vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
    C,
    U,
    V,
    W,
    X,
    Y,
    Y0,
    Y1,
}

impl Letter {
    pub const ALL: [Letter; 10] = [
        Letter::A,
        Letter::B,
        Letter::C,
        Letter::U,
        Letter::V,
        Letter::W,
        Letter::X,
        Letter::Y,
        Letter::Y0,
        Letter::Y1,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Letter::A => "a",
            Letter::B => "b",
            Letter::C => "c",
            Letter::U => "u",
            Letter::V => "v",
            Letter::W => "w",
            Letter::X => "x",
            Letter::Y => "y",
            Letter::Y0 => "y0",
            Letter::Y1 => "y1",
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Letter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Letter::ALL
            .iter()
            .copied()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| format!("unknown letter `{s}`"))
    }
}

/// A vertex name. The derived ordering (numbered, lettered, anonymous) is the
/// order used for every listing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexId {
    Numbered(u32),
    Lettered(Letter),
    Anonymous(u32),
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Numbered(n) => write!(f, "{n}"),
            VertexId::Lettered(l) => write!(f, "{l}"),
            VertexId::Anonymous(k) => write!(f, "_{k}"),
        }
    }
}

impl FromStr for VertexId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(rest) = s.strip_prefix('_') {
            return rest
                .parse()
                .map(VertexId::Anonymous)
                .map_err(|_| format!("bad anonymous vertex `{s}`"));
        }
        if s.bytes().all(|b| b.is_ascii_digit()) && !s.is_empty() {
            return s
                .parse()
                .map(VertexId::Numbered)
                .map_err(|_| format!("vertex number out of range `{s}`"));
        }
        s.parse().map(VertexId::Lettered)
    }
}

impl From<Letter> for VertexId {
    fn from(l: Letter) -> Self {
        VertexId::Lettered(l)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u32);

impl EdgeId {
    pub fn darts(self) -> (Dart, Dart) {
        (Dart(2 * self.0), Dart(2 * self.0 + 1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Forward,
    Reverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart(pub u32);

impl Dart {
    pub fn edge(self) -> EdgeId {
        EdgeId(self.0 >> 1)
    }

    pub fn side(self) -> Side {
        if self.0 & 1 == 0 {
            Side::Forward
        } else {
            Side::Reverse
        }
    }

    pub fn reverse(self) -> Dart {
        Dart(self.0 ^ 1)
    }

    fn ix(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbedError {
    #[error("dart {0:?} is missing from every rotation")]
    MissingDart(Dart),
    #[error("dart {0:?} appears more than once in the rotations")]
    DuplicateDart(Dart),
    #[error("dart {dart:?} listed at {listed} but its tail is {tail}")]
    WrongTail { dart: Dart, listed: VertexId, tail: VertexId },
    #[error("odd number of darts ({0})")]
    OddDarts(usize),
    #[error("vertex {0} is listed twice")]
    DuplicateVertex(VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("{u} lists {v} {uv} time(s) but {v} lists {u} {vu} time(s)")]
    Asymmetric { u: VertexId, v: VertexId, uv: usize, vu: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no vertices")]
    Empty,
    #[error("Euler characteristic {0} is odd; not an orientable surface")]
    OddEuler(i64),
    #[error("cannot flip edge {u}-{v}: {reason}")]
    FlipPrecondition { u: VertexId, v: VertexId, reason: &'static str },
    #[error("no edge joins {0} and {1}")]
    NoEdge(VertexId, VertexId),
    #[error("edge {0:?} does not exist")]
    NoSuchEdge(EdgeId),
    #[error("flip cascade did not terminate within {0} flips")]
    Nontermination(usize),
    #[error("flip {step} of cascade failed: {source}")]
    CascadeStep {
        step: usize,
        #[source]
        source: Box<EmbedError>,
    },
    #[error("new order at {0} is not a permutation of its darts")]
    NotAPermutation(VertexId),
    #[error("face is not a face of this embedding")]
    StaleFace,
    #[error("corner position {0} is out of range for a face of length {1}")]
    CornerOutOfRange(usize, usize),
    #[error("both corners lie at {0}; loops are rejected")]
    Loop(VertexId),
    #[error("{0} and {1} are already adjacent")]
    DuplicateEdge(VertexId, VertexId),
    #[error("both corners lie on the same face; use insert_chord")]
    SameFace,
    #[error("corners lie on different faces; use bridge")]
    DifferentFaces,
    #[error("contracting {0}-{1} would create a loop")]
    ContractLoop(VertexId, VertexId),
    #[error("contracting {u}-{v} would duplicate the edge to {w}")]
    ContractParallel { u: VertexId, v: VertexId, w: VertexId },
    #[error("{0} is already a vertex name")]
    NameTaken(VertexId),
    #[error("complete graph genus needs n >= 3, got {0}")]
    Domain(u64),
}

/// An embedded multigraph. Immutable from the outside; every operation in
/// this module returns a new value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedGraph {
    labels: Vec<VertexId>,
    lookup: HashMap<VertexId, usize>,
    tail: Vec<u32>,
    rot: Vec<Vec<Dart>>,
    pos: Vec<u32>,
}

impl EmbeddedGraph {
    /// Builds a graph from explicit darts. `tail[d]` is the vertex index of
    /// dart `d`; `rot[v]` lists the darts leaving `v` in cyclic order.
    pub fn from_darts(
        labels: Vec<VertexId>,
        tail: Vec<u32>,
        rot: Vec<Vec<Dart>>,
    ) -> Result<Self, EmbedError> {
        if !tail.len().is_multiple_of(2) {
            return Err(EmbedError::OddDarts(tail.len()));
        }
        let mut lookup = HashMap::with_capacity(labels.len());
        for (i, &l) in labels.iter().enumerate() {
            if lookup.insert(l, i).is_some() {
                return Err(EmbedError::DuplicateVertex(l));
            }
        }
        let n = labels.len();
        assert_eq!(rot.len(), n, "one rotation per vertex");
        let mut pos = vec![u32::MAX; tail.len()];
        for (v, r) in rot.iter().enumerate() {
            for (i, &d) in r.iter().enumerate() {
                if d.ix() >= tail.len() {
                    return Err(EmbedError::MissingDart(d));
                }
                if pos[d.ix()] != u32::MAX {
                    return Err(EmbedError::DuplicateDart(d));
                }
                let t = tail[d.ix()] as usize;
                if t != v {
                    return Err(EmbedError::WrongTail {
                        dart: d,
                        listed: labels[v],
                        tail: labels.get(t).copied().unwrap_or(VertexId::Anonymous(t as u32)),
                    });
                }
                pos[d.ix()] = i as u32;
            }
        }
        if let Some(d) = pos.iter().position(|&p| p == u32::MAX) {
            return Err(EmbedError::MissingDart(Dart(d as u32)));
        }
        Ok(EmbeddedGraph { labels, lookup, tail, rot, pos })
    }

    /// Builds a graph from neighbor lists. The k-th occurrence of `v` in the
    /// list of `u` is paired with the k-th occurrence of `u` in the list of
    /// `v`, so parallel edges are allowed but loops are not.
    pub fn from_adjacency(rows: &[(VertexId, Vec<VertexId>)]) -> Result<Self, EmbedError> {
        let labels: Vec<VertexId> = rows.iter().map(|r| r.0).collect();
        let mut lookup = HashMap::with_capacity(labels.len());
        for (i, &l) in labels.iter().enumerate() {
            if lookup.insert(l, i).is_some() {
                return Err(EmbedError::DuplicateVertex(l));
            }
        }
        let mut slot: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
        for (u, (_, nbrs)) in rows.iter().enumerate() {
            for (i, w) in nbrs.iter().enumerate() {
                let v = *lookup.get(w).ok_or(EmbedError::UnknownVertex(*w))?;
                if v == u {
                    return Err(EmbedError::Loop(labels[u]));
                }
                slot.entry((u, v)).or_default().push((u, i));
            }
        }
        let mut rot: Vec<Vec<Dart>> = rows.iter().map(|r| vec![Dart(0); r.1.len()]).collect();
        let mut tail = Vec::new();
        let mut keys: Vec<_> = slot.keys().copied().filter(|(u, v)| u < v).collect();
        keys.sort_unstable();
        for (u, v) in keys {
            let a = &slot[&(u, v)];
            let b = slot.get(&(v, u)).map(Vec::as_slice).unwrap_or(&[]);
            if a.len() != b.len() {
                return Err(EmbedError::Asymmetric {
                    u: labels[u],
                    v: labels[v],
                    uv: a.len(),
                    vu: b.len(),
                });
            }
            for (&(_, i), &(_, j)) in a.iter().zip(b) {
                let d = Dart(tail.len() as u32);
                tail.push(u as u32);
                tail.push(v as u32);
                rot[u][i] = d;
                rot[v][j] = d.reverse();
            }
        }
        for ((u, v), a) in &slot {
            if u > v && !slot.contains_key(&(*v, *u)) {
                return Err(EmbedError::Asymmetric {
                    u: labels[*u],
                    v: labels[*v],
                    uv: a.len(),
                    vu: 0,
                });
            }
        }
        EmbeddedGraph::from_darts(labels, tail, rot)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.tail.len() / 2
    }

    pub fn dart_count(&self) -> usize {
        self.tail.len()
    }

    pub fn labels(&self) -> &[VertexId] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> VertexId {
        self.labels[v]
    }

    pub fn index_of(&self, v: &VertexId) -> Option<usize> {
        self.lookup.get(v).copied()
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.lookup.contains_key(v)
    }

    fn require(&self, v: &VertexId) -> Result<usize, EmbedError> {
        self.index_of(v).ok_or(EmbedError::UnknownVertex(*v))
    }

    pub fn tail(&self, d: Dart) -> usize {
        self.tail[d.ix()] as usize
    }

    pub fn head(&self, d: Dart) -> usize {
        self.tail[d.reverse().ix()] as usize
    }

    pub fn tail_label(&self, d: Dart) -> VertexId {
        self.labels[self.tail(d)]
    }

    pub fn head_label(&self, d: Dart) -> VertexId {
        self.labels[self.head(d)]
    }

    pub fn rotation(&self, v: usize) -> &[Dart] {
        &self.rot[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rot[v].len()
    }

    /// The neighbors of `v` in rotation order, with repeats for parallel edges.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.rot[v].iter().map(move |&d| self.head(d))
    }

    pub fn position(&self, d: Dart) -> usize {
        self.pos[d.ix()] as usize
    }

    pub fn succ(&self, d: Dart) -> Dart {
        let r = &self.rot[self.tail(d)];
        r[(self.position(d) + 1) % r.len()]
    }

    pub fn pred(&self, d: Dart) -> Dart {
        let r = &self.rot[self.tail(d)];
        r[(self.position(d) + r.len() - 1) % r.len()]
    }

    /// The dart following `d` on its face.
    pub fn face_next(&self, d: Dart) -> Dart {
        self.succ(d.reverse())
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        let (d, _) = e.darts();
        (self.tail_label(d), self.head_label(d))
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        (2 * e.0 as usize) < self.tail.len()
    }

    /// Darts leaving `u` towards `v`.
    pub fn darts_between(&self, u: usize, v: usize) -> Vec<Dart> {
        self.rot[u].iter().copied().filter(|&d| self.head(d) == v).collect()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.rot[a].iter().any(|&d| self.head(d) == b)
    }

    /// The lowest-numbered edge joining two named vertices.
    pub fn find_edge(&self, u: &VertexId, v: &VertexId) -> Result<EdgeId, EmbedError> {
        let a = self.require(u)?;
        let b = self.require(v)?;
        self.darts_between(a, b)
            .into_iter()
            .map(Dart::edge)
            .min()
            .ok_or(EmbedError::NoEdge(*u, *v))
    }

    /// The dart from `u` to `v`, if exactly determined by the pair.
    pub fn find_dart(&self, u: &VertexId, v: &VertexId) -> Result<Dart, EmbedError> {
        let a = self.require(u)?;
        let b = self.require(v)?;
        self.darts_between(a, b)
            .into_iter()
            .min()
            .ok_or(EmbedError::NoEdge(*u, *v))
    }

    /// Vertex indices sorted by name; the order of every listing.
    pub fn sorted_vertices(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.labels.len()).collect();
        order.sort_by_key(|&v| self.labels[v]);
        order
    }

    pub fn is_connected(&self) -> bool {
        let n = self.labels.len();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    /// First loop or repeated edge found, by sorting endpoint pairs.
    pub fn simplicity_defect(&self) -> Option<(VertexId, VertexId)> {
        let mut pairs: Vec<(usize, usize)> = (0..self.edge_count())
            .map(|e| {
                let (d, r) = EdgeId(e as u32).darts();
                let (a, b) = (self.tail(d), self.tail(r));
                (a.min(b), a.max(b))
            })
            .collect();
        pairs.sort_unstable();
        for (i, &(a, b)) in pairs.iter().enumerate() {
            if a == b || (i > 0 && pairs[i - 1] == (a, b)) {
                return Some((self.labels[a], self.labels[b]));
            }
        }
        None
    }

    pub fn is_simple(&self) -> bool {
        self.simplicity_defect().is_none()
    }

    /// All unordered pairs of distinct nonadjacent vertices, sorted by name.
    pub fn missing_pairs(&self) -> Vec<(VertexId, VertexId)> {
        let n = self.labels.len();
        let order = self.sorted_vertices();
        let mut adj = vec![false; n * n];
        for d in 0..self.tail.len() {
            let d = Dart(d as u32);
            adj[self.tail(d) * n + self.head(d)] = true;
        }
        let mut out = Vec::new();
        for (i, &u) in order.iter().enumerate() {
            for &v in &order[i + 1..] {
                if !adj[u * n + v] {
                    out.push((self.labels[u], self.labels[v]));
                }
            }
        }
        out
    }

    /// The rotation at `v` as neighbor names.
    pub fn rotation_labels(&self, v: &VertexId) -> Option<Vec<VertexId>> {
        let i = self.index_of(v)?;
        Some(self.rot[i].iter().map(|&d| self.head_label(d)).collect())
    }
}

/// One face, given by its boundary walk. Position `i` of the walk is the
/// corner at the tail of `walk[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub walk: Vec<Dart>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.walk.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walk.is_empty()
    }

    pub fn vertices(&self, g: &EmbeddedGraph) -> Vec<VertexId> {
        self.walk.iter().map(|&d| g.tail_label(d)).collect()
    }

    /// `(vertex, position)` for every corner, in walk order.
    pub fn corners(&self, g: &EmbeddedGraph) -> Vec<(VertexId, usize)> {
        self.walk.iter().enumerate().map(|(i, &d)| (g.tail_label(d), i)).collect()
    }

    /// Position of the corner whose outgoing dart is `d`.
    pub fn position_of(&self, d: Dart) -> Option<usize> {
        self.walk.iter().position(|&x| x == d)
    }
}

/// Traces every face. Faces start at the first unused dart in (vertex name,
/// rotation position) order.
pub fn trace_faces(g: &EmbeddedGraph) -> Vec<Face> {
    let mut used = vec![false; g.dart_count()];
    let mut faces = Vec::new();
    for v in g.sorted_vertices() {
        for &start in g.rotation(v) {
            if used[start.ix()] {
                continue;
            }
            let mut walk = Vec::new();
            let mut d = start;
            while !used[d.ix()] {
                used[d.ix()] = true;
                walk.push(d);
                d = g.face_next(d);
            }
            faces.push(Face { walk });
        }
    }
    faces
}

/// Face number of every dart, plus the number of faces.
pub fn face_index(g: &EmbeddedGraph) -> (Vec<u32>, usize) {
    let mut id = vec![u32::MAX; g.dart_count()];
    let mut count = 0u32;
    for v in g.sorted_vertices() {
        for &start in g.rotation(v) {
            if id[start.ix()] != u32::MAX {
                continue;
            }
            let mut d = start;
            while id[d.ix()] == u32::MAX {
                id[d.ix()] = count;
                d = g.face_next(d);
            }
            count += 1;
        }
    }
    (id, count as usize)
}

/// Face containing dart `d`.
pub fn face_of(g: &EmbeddedGraph, d: Dart) -> Face {
    let mut walk = vec![d];
    let mut x = g.face_next(d);
    while x != d {
        walk.push(x);
        x = g.face_next(x);
    }
    Face { walk }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenusReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub genus: u64,
    pub triangular: bool,
    pub simple: bool,
    pub target_genus: Option<u64>,
}

impl fmt::Display for GenusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "V={} E={} F={} genus={} triangular={} simple={}",
            self.vertices, self.edges, self.faces, self.genus, self.triangular, self.simple
        )?;
        if let Some(t) = self.target_genus {
            write!(f, " target={t}")?;
        }
        Ok(())
    }
}

pub fn euler_genus(g: &EmbeddedGraph) -> Result<GenusReport, EmbedError> {
    if g.vertex_count() == 0 {
        return Err(EmbedError::Empty);
    }
    if !g.is_connected() {
        return Err(EmbedError::Disconnected);
    }
    let faces = trace_faces(g);
    let chi = g.vertex_count() as i64 - g.edge_count() as i64 + faces.len() as i64;
    if chi % 2 != 0 || chi > 2 {
        return Err(EmbedError::OddEuler(chi));
    }
    Ok(GenusReport {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        faces: faces.len(),
        genus: ((2 - chi) / 2) as u64,
        triangular: faces.iter().all(|f| f.len() == 3),
        simple: g.is_simple(),
        target_genus: None,
    })
}

/// ⌈(n−3)(n−4)/12⌉, the genus of the complete graph on `n` vertices.
pub fn complete_graph_genus(n: u64) -> Result<u64, EmbedError> {
    if n < 3 {
        return Err(EmbedError::Domain(n));
    }
    Ok(((n - 3) * (n - 4)).div_ceil(12))
}
