//! Derived embeddings: rotations generated from a log, long faces
//! subdivided by lettered vertices.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::current::{CurrentError, CurrentGraph, VortexKind};
use crate::surface::{face_of, trace_faces, EmbedError, EmbeddedGraph, Letter, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeriveError {
    #[error("current graph fails {principle}: {witness}")]
    Principles { principle: String, witness: String },
    #[error(transparent)]
    Current(#[from] CurrentError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error("face {0:?} is not a triangle after subdivision")]
    NonTriangular(Vec<VertexId>),
    #[error("expected {expected} long faces from the vortices, found {found}")]
    Accounting { expected: usize, found: usize },
    #[error("letter {letter} lands on a face of length {len}, expected {expected}")]
    LetterFace { letter: Letter, len: usize, expected: usize },
    #[error("two letters land on the same face")]
    SharedFace,
    #[error("more than one vortex of type V2")]
    SecondV2,
    #[error("numbered vertices {0} and {1} are not adjacent")]
    MissingNumberedPair(u32, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedEmbedding {
    pub emb: EmbeddedGraph,
    pub modulus: u32,
    /// Lettered vertex and the name of the vortex it came from.
    pub provenance: BTreeMap<Letter, String>,
}

pub fn derive(cg: &CurrentGraph) -> Result<DerivedEmbedding, DeriveError> {
    let report = cg.check_principles();
    if let Some(r) = report.first_failure() {
        return Err(DeriveError::Principles {
            principle: r.principle.to_string(),
            witness: r.witness.as_ref().map(ToString::to_string).unwrap_or_default(),
        });
    }
    let m = cg.modulus();
    let log = cg.trace_log()?;
    let elems = log.elements();

    let num = VertexId::Numbered;
    let mut rows: Vec<(VertexId, Vec<VertexId>)> = (0..m)
        .map(|i| (num(i), elems.iter().map(|&c| num((c + i) % m)).collect()))
        .collect();
    let base = EmbeddedGraph::from_adjacency(&rows)?;

    let kinds: BTreeMap<Letter, (VortexKind, String)> = cg
        .vortices()
        .iter()
        .flat_map(|(&v, vx)| {
            let kind = cg.classify_vortex(v).map(|c| c.kind);
            vx.letters.iter().map(move |&l| (l, kind.clone(), cg.name(v).to_string()))
        })
        .map(|(l, k, n)| k.map(|k| (l, (k, n))))
        .collect::<Result<_, _>>()?;

    // (letter placed, face darts) for every long face
    let mut placements = Vec::new();
    let mut v2_seen = false;
    for (letter, p, q) in log.letter_corners() {
        let (kind, _) = &kinds[&letter];
        let d = base.find_dart(&num(0), &num(q))?;
        debug_assert_eq!(base.head(base.pred(d)), base.index_of(&num(p)).unwrap());
        let face = face_of(&base, d);
        match kind {
            VortexKind::V1 | VortexKind::V3 => {
                if face.len() != m as usize {
                    return Err(DeriveError::LetterFace { letter, len: face.len(), expected: m as usize });
                }
                placements.push((letter, face));
            }
            VortexKind::V2 => {
                if std::mem::replace(&mut v2_seen, true) {
                    return Err(DeriveError::SecondV2);
                }
                let half = m as usize / 2;
                if face.len() != half {
                    return Err(DeriveError::LetterFace { letter, len: face.len(), expected: half });
                }
                placements.push((Letter::Y0, face));
                let d1 = base.find_dart(&num(1), &num((q + 1) % m))?;
                placements.push((Letter::Y1, face_of(&base, d1)));
            }
        }
    }

    let long = trace_faces(&base).iter().filter(|f| f.len() > 3).count();
    if long != placements.len() {
        return Err(DeriveError::Accounting { expected: placements.len(), found: long });
    }
    let mut claimed = vec![false; base.dart_count()];
    for (_, f) in &placements {
        for d in &f.walk {
            if std::mem::replace(&mut claimed[d.0 as usize], true) {
                return Err(DeriveError::SharedFace);
            }
        }
    }

    for (letter, face) in &placements {
        let x = VertexId::Lettered(*letter);
        for &d in &face.walk {
            let (from, to) = (base.tail(d), base.head(d));
            let row = &mut rows[to].1;
            let at = row
                .iter()
                .position(|w| *w == num(from as u32))
                .expect("face walk follows the rotation");
            row.insert(at + 1, x);
        }
        let around: Vec<VertexId> = face.walk.iter().rev().map(|&d| base.tail_label(d)).collect();
        rows.push((x, around));
    }
    let emb = EmbeddedGraph::from_adjacency(&rows)?;
    if let Some(f) = trace_faces(&emb).into_iter().find(|f| f.len() != 3) {
        return Err(DeriveError::NonTriangular(f.vertices(&emb)));
    }

    let provenance = placements
        .iter()
        .map(|(l, _)| {
            let source = match l {
                Letter::Y0 | Letter::Y1 => Letter::Y,
                other => *other,
            };
            (*l, kinds[&source].1.clone())
        })
        .collect();
    Ok(DerivedEmbedding { emb, modulus: m, provenance })
}

/// Every nonadjacent pair of vertices, sorted.
pub fn missing_edge_inventory(d: &DerivedEmbedding) -> Result<Vec<(VertexId, VertexId)>, DeriveError> {
    let missing = d.emb.missing_pairs();
    for (u, v) in &missing {
        if let (VertexId::Numbered(a), VertexId::Numbered(b)) = (u, v) {
            return Err(DeriveError::MissingNumberedPair(*a, *b));
        }
    }
    Ok(missing)
}
