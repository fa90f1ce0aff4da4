//! Random rotation systems and the invariants every embedding must satisfy.
//! Shared by the property tests and the acceptance suite.

#![allow(dead_code)]

use embedkit::surface::{
    bridge, cascade_flip, edge_flip, euler_genus, face_of, insert_parallel_chord, trace_faces, EdgeId, EmbedError,
    EmbeddedGraph, VertexId,
};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const MAX_VERTICES: usize = 12;

/// A connected graph with an arbitrary rotation at every vertex.
#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: EmbeddedGraph,
    /// Free choices for the property under test.
    pub picks: [usize; 4],
}

fn build(n: usize, edges: &[(usize, usize)], keys: &[u32]) -> EmbeddedGraph {
    let mut around: Vec<Vec<(u32, usize)>> = vec![Vec::new(); n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        around[u].push((keys[(2 * i) % keys.len()], v));
        around[v].push((keys[(2 * i + 1) % keys.len()], u));
    }
    let rows: Vec<(VertexId, Vec<VertexId>)> = around
        .into_iter()
        .enumerate()
        .map(|(v, mut ns)| {
            ns.sort();
            (VertexId::Numbered(v as u32), ns.into_iter().map(|(_, w)| VertexId::Numbered(w as u32)).collect())
        })
        .collect();
    EmbeddedGraph::from_adjacency(&rows).expect("symmetric rows")
}

/// Random simple connected graphs, from trees up to nearly complete, with
/// random rotations.
pub fn rotation_system() -> impl Strategy<Value = Instance> {
    (3..=MAX_VERTICES)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(any::<prop::sample::Index>(), n - 1),
                proptest::collection::vec((0..n, 0..n), 0..n * (n - 1) / 2),
                proptest::collection::vec(any::<u32>(), n * n),
                any::<[usize; 4]>(),
            )
        })
        .prop_map(|(n, parents, extra, keys, picks)| {
            let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (parents[v - 1].index(v), v)).collect();
            for (u, v) in extra {
                let (u, v) = (u.min(v), u.max(v));
                if u != v && !edges.iter().any(|&(a, b)| (a.min(b), a.max(b)) == (u, v)) {
                    edges.push((u, v));
                }
            }
            Instance { graph: build(n, &edges, &keys), picks }
        })
}

/// Planar triangulations grown by repeatedly placing a vertex inside a face,
/// then scrambled by random flips. Flips apply to most of their edges.
pub fn triangulation() -> impl Strategy<Value = Instance> {
    (
        proptest::collection::vec(any::<prop::sample::Index>(), 0..=MAX_VERTICES - 4),
        proptest::collection::vec(any::<prop::sample::Index>(), 0..12),
        any::<[usize; 4]>(),
    )
        .prop_map(|(grow, scramble, picks)| {
            let num = |i: usize| VertexId::Numbered(i as u32);
            let mut rows: Vec<(VertexId, Vec<VertexId>)> =
                vec![(num(0), vec![num(1), num(2), num(3)]), (num(1), vec![num(0), num(3), num(2)])];
            rows.push((num(2), vec![num(0), num(1), num(3)]));
            rows.push((num(3), vec![num(0), num(2), num(1)]));
            for pick in grow {
                let g = EmbeddedGraph::from_adjacency(&rows).expect("valid");
                let faces = trace_faces(&g);
                let face = &faces[pick.index(faces.len())];
                let x = num(rows.len());
                for &d in &face.walk {
                    let (from, to) = (g.tail_label(d), g.head_label(d));
                    let row = &mut rows.iter_mut().find(|r| r.0 == to).unwrap().1;
                    let at = row.iter().position(|w| *w == from).unwrap();
                    row.insert(at + 1, x);
                }
                rows.push((x, face.walk.iter().rev().map(|&d| g.tail_label(d)).collect()));
            }
            let mut graph = EmbeddedGraph::from_adjacency(&rows).expect("valid");
            for pick in scramble {
                let e = EdgeId(pick.index(graph.edge_count()) as u32);
                if let Ok((h, _)) = edge_flip(&graph, e) {
                    if h.is_simple() {
                        graph = h;
                    }
                }
            }
            Instance { graph, picks }
        })
}

/// Each face as its vertex cycle, rotated to start at its least dart, sorted.
pub fn face_set(g: &EmbeddedGraph) -> Vec<Vec<VertexId>> {
    let mut out: Vec<Vec<VertexId>> = trace_faces(g)
        .into_iter()
        .map(|f| {
            let vs = f.vertices(g);
            (0..vs.len())
                .map(|k| vs[k..].iter().chain(&vs[..k]).copied().collect::<Vec<_>>())
                .min()
                .unwrap()
        })
        .collect();
    out.sort();
    out
}

pub fn dart_partition(i: &Instance) -> Result<(), TestCaseError> {
    let g = &i.graph;
    let mut seen = vec![0u32; g.dart_count()];
    for f in trace_faces(g) {
        for d in f.walk {
            seen[d.0 as usize] += 1;
        }
    }
    prop_assert!(seen.iter().all(|&c| c == 1), "dart counts {:?}", seen);
    Ok(())
}

pub fn even_euler(i: &Instance) -> Result<(), TestCaseError> {
    let g = &i.graph;
    let chi = g.vertex_count() as i64 - g.edge_count() as i64 + trace_faces(g).len() as i64;
    prop_assert_eq!(chi.rem_euclid(2), 0);
    let r = euler_genus(g).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(chi, 2 - 2 * r.genus as i64);
    Ok(())
}

/// Whether `e` borders two distinct triangles with distinct apexes, traced
/// without the library's flip code.
fn flippable(g: &EmbeddedGraph, e: EdgeId) -> bool {
    let (d, r) = e.darts();
    let (f, h) = (face_of(g, d), face_of(g, r));
    if f.len() != 3 || h.len() != 3 || f.walk.contains(&r) {
        return false;
    }
    let apex = |face: &embedkit::surface::Face| g.tail(face.walk[2]);
    g.tail(d) != g.tail(r) && apex(&f) != apex(&h)
}

pub fn flip_involution(i: &Instance) -> Result<(), TestCaseError> {
    let g = &i.graph;
    for k in 0..g.edge_count() {
        let e = EdgeId(((i.picks[0] + k) % g.edge_count()) as u32);
        let flipped = edge_flip(g, e);
        prop_assert_eq!(flipped.is_ok(), flippable(g, e), "edge {:?}", e);
        if let Ok((h, new)) = flipped {
            let r = euler_genus(&h).unwrap();
            prop_assert_eq!(r.genus, euler_genus(g).unwrap().genus);
            let (back, _) = edge_flip(&h, new).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(face_set(&back), face_set(g));
        }
    }
    Ok(())
}

pub fn chord_keeps_genus(i: &Instance) -> Result<(), TestCaseError> {
    let g = &i.graph;
    let before = euler_genus(g).unwrap();
    let faces = trace_faces(g);
    let f = &faces[i.picks[0] % faces.len()];
    let a = i.picks[1] % f.len();
    let Some(b) = (0..f.len()).map(|k| (a + 1 + k) % f.len()).find(|&b| g.tail(f.walk[b]) != g.tail(f.walk[a]))
    else {
        prop_assert!(insert_parallel_chord(g, f, a, (a + 1) % f.len()).is_err());
        return Ok(());
    };
    let (h, _) = insert_parallel_chord(g, f, a, b).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let after = euler_genus(&h).unwrap();
    prop_assert_eq!(after.genus, before.genus);
    prop_assert_eq!(after.faces, before.faces + 1);
    prop_assert_eq!(after.edges, before.edges + 1);
    Ok(())
}

pub fn bridge_adds_handle(i: &Instance) -> Result<(), TestCaseError> {
    let g = &i.graph;
    let before = euler_genus(g).unwrap();
    let faces = trace_faces(g);
    let mut candidates = Vec::new();
    for (x, f1) in faces.iter().enumerate() {
        for f2 in &faces[x + 1..] {
            for c1 in 0..f1.len() {
                for c2 in 0..f2.len() {
                    let (u, v) = (g.tail(f1.walk[c1]), g.tail(f2.walk[c2]));
                    if u != v && !g.adjacent(u, v) {
                        candidates.push((f1, c1, f2, c2));
                    }
                }
            }
        }
    }
    if candidates.is_empty() {
        return Ok(());
    }
    let (f1, c1, f2, c2) = candidates[i.picks[2] % candidates.len()];
    let (h, _) = bridge(g, f1, c1, f2, c2).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let after = euler_genus(&h).unwrap();
    prop_assert_eq!(after.genus, before.genus + 1);
    prop_assert_eq!(after.faces + 1, before.faces);
    prop_assert!(matches!(bridge(g, f1, c1, f1, (c1 + 1) % f1.len()), Err(EmbedError::SameFace | EmbedError::Loop(_) | EmbedError::DuplicateEdge(..))));
    Ok(())
}

pub fn cascade_terminates(i: &Instance) -> Result<(), TestCaseError> {
    let g = &i.graph;
    let e = EdgeId((i.picks[3] % g.edge_count()) as u32);
    match cascade_flip(g, e) {
        Ok((h, flips)) => {
            prop_assert!(!flips.is_empty() && flips.len() <= g.edge_count());
            prop_assert_eq!(h.is_simple(), g.is_simple());
            let last = flips.last().unwrap().added;
            let (x, y) = (h.index_of(&last.0).unwrap(), h.index_of(&last.1).unwrap());
            prop_assert_eq!(h.darts_between(x, y).len(), 1);
        }
        Err(EmbedError::Nontermination(limit)) => prop_assert_eq!(limit, g.edge_count()),
        Err(EmbedError::FlipPrecondition { .. } | EmbedError::CascadeStep { .. }) => {}
        Err(other) => return Err(TestCaseError::fail(other.to_string())),
    }
    Ok(())
}
