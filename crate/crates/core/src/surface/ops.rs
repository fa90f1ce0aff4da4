//! Local surgery on rotation systems.

use std::collections::HashSet;

use super::{face_index, Dart, EdgeId, EmbedError, EmbeddedGraph, Face, VertexId};

/// One executed flip: `removed` was the edge `u→v`, `added` joins the apex
/// of the face left of `u→v` to the apex of the face on its right.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Flip {
    pub removed: (VertexId, VertexId),
    pub added: (VertexId, VertexId),
}

/// What to do when a contraction would create parallel edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParallelPolicy {
    Reject,
    Allow,
}

impl EmbeddedGraph {
    fn reindex(&mut self, v: usize) {
        for (i, &d) in self.rot[v].iter().enumerate() {
            self.pos[d.0 as usize] = i as u32;
        }
    }

    fn detach(&mut self, d: Dart) {
        let v = self.tail(d);
        let i = self.position(d);
        self.rot[v].remove(i);
        self.reindex(v);
    }

    /// Places `d` (already tailed at `v`) immediately before `before` in the
    /// rotation at `v`.
    fn attach_before(&mut self, d: Dart, before: Dart) {
        let v = self.tail(before);
        debug_assert_eq!(self.tail(d), v);
        let i = self.position(before);
        self.rot[v].insert(i, d);
        self.reindex(v);
    }

    fn attach_after(&mut self, d: Dart, after: Dart) {
        let v = self.tail(after);
        debug_assert_eq!(self.tail(d), v);
        let i = self.position(after);
        self.rot[v].insert(i + 1, d);
        self.reindex(v);
    }

    pub(crate) fn flip_in_place(&mut self, e: EdgeId) -> Result<Flip, EmbedError> {
        if !self.has_edge(e) {
            return Err(EmbedError::NoSuchEdge(e));
        }
        let (d, r) = e.darts();
        let (u, v) = (self.tail(d), self.tail(r));
        let fail = |g: &EmbeddedGraph, reason| EmbedError::FlipPrecondition {
            u: g.labels[u],
            v: g.labels[v],
            reason,
        };
        if u == v {
            return Err(fail(self, "edge is a loop"));
        }
        let n1 = self.face_next(d);
        let n2 = self.face_next(n1);
        let m1 = self.face_next(r);
        let m2 = self.face_next(m1);
        if self.face_next(n2) != d || self.face_next(m2) != r {
            return Err(fail(self, "incident face is not a triangle"));
        }
        if [n1, n2].contains(&r) {
            return Err(fail(self, "both sides lie on the same face"));
        }
        let x = self.head(n1);
        let y = self.head(m1);
        if x == y {
            return Err(fail(self, "both apexes are the same vertex"));
        }
        if x == u || x == v || y == u || y == v {
            return Err(fail(self, "degenerate quadrangle"));
        }
        self.detach(d);
        self.detach(r);
        self.tail[d.0 as usize] = x as u32;
        self.tail[r.0 as usize] = y as u32;
        // n1 is v→x and m1 is u→y; the new darts sit in the quadrangle corners.
        self.attach_after(d, n1.reverse());
        self.attach_after(r, m1.reverse());
        Ok(Flip {
            removed: (self.labels[u], self.labels[v]),
            added: (self.labels[x], self.labels[y]),
        })
    }

    fn check_face(&self, f: &Face) -> Result<(), EmbedError> {
        if f.walk.is_empty() {
            return Err(EmbedError::StaleFace);
        }
        for (i, &d) in f.walk.iter().enumerate() {
            if (d.0 as usize) >= self.dart_count() {
                return Err(EmbedError::StaleFace);
            }
            let next = f.walk[(i + 1) % f.walk.len()];
            if self.face_next(d) != next {
                return Err(EmbedError::StaleFace);
            }
        }
        Ok(())
    }

    /// Adds an edge whose ends occupy the corners just before `a` and `b`.
    fn add_edge_before(&mut self, a: Dart, b: Dart) -> EdgeId {
        let e = EdgeId(self.edge_count() as u32);
        let (d, r) = e.darts();
        self.tail.push(self.tail(a) as u32);
        self.tail.push(self.tail(b) as u32);
        self.pos.push(0);
        self.pos.push(0);
        self.attach_before(d, a);
        self.attach_before(r, b);
        e
    }

    fn corner_dart(f: &Face, i: usize) -> Result<Dart, EmbedError> {
        f.walk
            .get(i)
            .copied()
            .ok_or(EmbedError::CornerOutOfRange(i, f.walk.len()))
    }
}

/// Replaces an edge shared by two triangles with the other diagonal of their
/// union. The edge keeps its identifier.
pub fn edge_flip(g: &EmbeddedGraph, e: EdgeId) -> Result<(EmbeddedGraph, EdgeId), EmbedError> {
    let mut h = g.clone();
    h.flip_in_place(e)?;
    Ok((h, e))
}

/// Flips `start`; while the new diagonal duplicates an older edge, flips
/// that older edge next.
pub fn cascade_flip(
    g: &EmbeddedGraph,
    start: EdgeId,
) -> Result<(EmbeddedGraph, Vec<Flip>), EmbedError> {
    let mut h = g.clone();
    let flips = cascade_in_place(&mut h, start)?;
    Ok((h, flips))
}

pub(crate) fn cascade_in_place(h: &mut EmbeddedGraph, start: EdgeId) -> Result<Vec<Flip>, EmbedError> {
    let limit = h.edge_count();
    let mut flips = Vec::new();
    let mut e = start;
    loop {
        if flips.len() >= limit {
            return Err(EmbedError::Nontermination(limit));
        }
        let flip = h.flip_in_place(e).map_err(|source| EmbedError::CascadeStep {
            step: flips.len(),
            source: Box::new(source),
        })?;
        flips.push(flip);
        let (d, _) = e.darts();
        let (x, y) = (h.tail(d), h.head(d));
        let older = h
            .darts_between(x, y)
            .into_iter()
            .map(Dart::edge)
            .filter(|&f| f != e)
            .min();
        match older {
            Some(f) => e = f,
            None => return Ok(flips),
        }
    }
}

/// Replaces the rotation at `v` with `order`, which must be a permutation of
/// the darts already there.
pub fn replace_rotation(
    g: &EmbeddedGraph,
    v: &VertexId,
    order: &[Dart],
) -> Result<EmbeddedGraph, EmbedError> {
    let i = g.index_of(v).ok_or(EmbedError::UnknownVertex(*v))?;
    let old: HashSet<Dart> = g.rotation(i).iter().copied().collect();
    let new: HashSet<Dart> = order.iter().copied().collect();
    if order.len() != g.degree(i) || old != new {
        return Err(EmbedError::NotAPermutation(*v));
    }
    let mut h = g.clone();
    h.rot[i] = order.to_vec();
    h.reindex(i);
    Ok(h)
}

/// Draws a new edge inside face `f` between its corners `i` and `j`,
/// splitting the face in two.
pub fn insert_chord(
    g: &EmbeddedGraph,
    f: &Face,
    i: usize,
    j: usize,
) -> Result<(EmbeddedGraph, EdgeId), EmbedError> {
    chord(g, f, i, j, false)
}

/// Like [`insert_chord`], but the endpoints may already be adjacent. Used to
/// seed a flip cascade.
pub fn insert_parallel_chord(
    g: &EmbeddedGraph,
    f: &Face,
    i: usize,
    j: usize,
) -> Result<(EmbeddedGraph, EdgeId), EmbedError> {
    chord(g, f, i, j, true)
}

fn chord(
    g: &EmbeddedGraph,
    f: &Face,
    i: usize,
    j: usize,
    parallel: bool,
) -> Result<(EmbeddedGraph, EdgeId), EmbedError> {
    g.check_face(f)?;
    let a = EmbeddedGraph::corner_dart(f, i)?;
    let b = EmbeddedGraph::corner_dart(f, j)?;
    let (u, v) = (g.tail(a), g.tail(b));
    if u == v {
        return Err(EmbedError::Loop(g.labels[u]));
    }
    if !parallel && g.adjacent(u, v) {
        return Err(EmbedError::DuplicateEdge(g.labels[u], g.labels[v]));
    }
    let mut h = g.clone();
    let e = h.add_edge_before(a, b);
    Ok((h, e))
}

/// Adds an edge between corners of two different faces, merging them and
/// adding one handle.
pub fn bridge(
    g: &EmbeddedGraph,
    f1: &Face,
    c1: usize,
    f2: &Face,
    c2: usize,
) -> Result<(EmbeddedGraph, EdgeId), EmbedError> {
    g.check_face(f1)?;
    g.check_face(f2)?;
    let a = EmbeddedGraph::corner_dart(f1, c1)?;
    let b = EmbeddedGraph::corner_dart(f2, c2)?;
    if f1.walk.contains(&b) {
        return Err(EmbedError::SameFace);
    }
    let (u, v) = (g.tail(a), g.tail(b));
    if u == v {
        return Err(EmbedError::Loop(g.labels[u]));
    }
    if g.adjacent(u, v) {
        return Err(EmbedError::DuplicateEdge(g.labels[u], g.labels[v]));
    }
    let mut h = g.clone();
    let e = h.add_edge_before(a, b);
    Ok((h, e))
}

/// Inserts an edge between the corners just before darts `a` and `b`,
/// choosing chord or bridge from the face structure. Returns whether the
/// corners shared a face.
pub(crate) fn insert_at_corners(
    g: &EmbeddedGraph,
    a: Dart,
    b: Dart,
    parallel: ParallelPolicy,
) -> Result<(EmbeddedGraph, EdgeId, bool), EmbedError> {
    let (id, _) = face_index(g);
    let same = id[a.0 as usize] == id[b.0 as usize];
    let fa = super::face_of(g, a);
    if same {
        let j = fa.position_of(b).expect("same face");
        let (h, e) = chord(g, &fa, 0, j, parallel == ParallelPolicy::Allow)?;
        Ok((h, e, true))
    } else {
        let fb = super::face_of(g, b);
        let (h, e) = bridge(g, &fa, 0, &fb, 0)?;
        Ok((h, e, false))
    }
}

/// Contracts the edge `u`–`v` into a single vertex called `merged`. The
/// rotation at `v` is spliced into the rotation at `u` where the contracted
/// dart used to be.
pub fn identify_and_contract(
    g: &EmbeddedGraph,
    u: &VertexId,
    v: &VertexId,
    merged: VertexId,
    policy: ParallelPolicy,
) -> Result<EmbeddedGraph, EmbedError> {
    let ui = g.index_of(u).ok_or(EmbedError::UnknownVertex(*u))?;
    let vi = g.index_of(v).ok_or(EmbedError::UnknownVertex(*v))?;
    let between = g.darts_between(ui, vi);
    let Some(&d) = between.first() else {
        return Err(EmbedError::NoEdge(*u, *v));
    };
    if between.len() > 1 || ui == vi {
        return Err(EmbedError::ContractLoop(*u, *v));
    }
    if merged != *u && merged != *v && g.contains(&merged) {
        return Err(EmbedError::NameTaken(merged));
    }
    if policy == ParallelPolicy::Reject {
        let nu: HashSet<usize> = g.neighbors(ui).collect();
        let mut common: Vec<VertexId> = g
            .neighbors(vi)
            .filter(|w| *w != ui && nu.contains(w))
            .map(|w| g.labels[w])
            .collect();
        common.sort();
        if let Some(&w) = common.first() {
            return Err(EmbedError::ContractParallel { u: *u, v: *v, w });
        }
    }
    let r = d.reverse();
    let mut spliced = Vec::with_capacity(g.degree(ui) + g.degree(vi) - 2);
    for &x in g.rotation(ui) {
        if x == d {
            let rv = g.rotation(vi);
            let k = g.position(r);
            for t in 1..rv.len() {
                spliced.push(rv[(k + t) % rv.len()]);
            }
        } else {
            spliced.push(x);
        }
    }
    // Renumber: drop edge d.edge() and vertex vi, keep everything else in order.
    let gone = d.edge().0;
    let remap_dart = |x: Dart| -> Dart {
        let e = x.edge().0;
        let e = if e > gone { e - 1 } else { e };
        Dart(2 * e + (x.0 & 1))
    };
    let remap_vertex = |w: usize| -> u32 {
        let w = if w == vi { ui } else { w };
        (if w > vi { w - 1 } else { w }) as u32
    };
    let mut labels = Vec::with_capacity(g.vertex_count() - 1);
    let mut rot = Vec::with_capacity(g.vertex_count() - 1);
    for w in 0..g.vertex_count() {
        if w == vi {
            continue;
        }
        if w == ui {
            labels.push(merged);
            rot.push(spliced.iter().map(|&x| remap_dart(x)).collect());
        } else {
            labels.push(g.labels[w]);
            rot.push(g.rotation(w).iter().map(|&x| remap_dart(x)).collect());
        }
    }
    let mut tail = Vec::with_capacity(g.dart_count() - 2);
    for e in 0..g.edge_count() as u32 {
        if e == gone {
            continue;
        }
        let (a, b) = EdgeId(e).darts();
        tail.push(remap_vertex(g.tail(a)));
        tail.push(remap_vertex(g.tail(b)));
    }
    EmbeddedGraph::from_darts(labels, tail, rot)
}
