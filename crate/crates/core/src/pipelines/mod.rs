//! End-to-end constructions: derive, then run a surgery script that adds the
//! missing adjacencies, then verify the result is a minimum-genus embedding
//! of the complete graph.

mod script;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::derived::{derive, missing_edge_inventory, DeriveError};
use crate::families::{build, parameters, Case, FamilyError, FamilyParameters};
use crate::surface::{
    cascade_in_place, complete_graph_genus, euler_genus, face_index, face_of, identify_and_contract,
    insert_at_corners, write_rotations, Dart, EmbedError, EmbeddedGraph, Flip, GenusReport,
    ParallelPolicy, VertexId,
};

pub use script::{
    parse_script, Corner, FaceSlot, Gap, JoinKind, Script, ScriptLine, Slot, Step, Sym,
};

const CASE11_SCRIPT: &str = include_str!("../../data/case11.script");
const CASE2_SCRIPT: &str = include_str!("../../data/case2.script");

/// The surgery script shipped for a family.
pub fn builtin_script(case: Case) -> Script {
    let text = match case {
        Case::Two => CASE2_SCRIPT,
        Case::Eleven => CASE11_SCRIPT,
    };
    parse_script(text).expect("shipped scripts parse")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StepError {
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error("no binding named ${0}")]
    Unbound(String),
    #[error("{neighbor} is not a neighbor of {at}")]
    NotANeighbor { at: VertexId, neighbor: VertexId },
    #[error("{neighbor} is joined to {at} more than once")]
    AmbiguousNeighbor { at: VertexId, neighbor: VertexId },
    #[error("at {at}, {after} is followed by {found}, not {expected}")]
    GapMismatch { at: VertexId, after: VertexId, expected: VertexId, found: VertexId },
    #[error("expected to add ({0}, {1}), added ({2}, {3})")]
    WrongOutcome(VertexId, VertexId, VertexId, VertexId),
    #[error("face is [{found}], expected [{expected}]")]
    FaceMismatch { expected: String, found: String },
    #[error("no face named {0}")]
    UnknownFace(String),
    #[error("face position {0} is out of range")]
    Position(usize),
    #[error("{0} occurs {1} times on the face")]
    FaceVertex(VertexId, usize),
    #[error("no face contains both corners")]
    NoCommonFace,
    #[error("the corners lie on {}", if *.0 { "one face; use chord" } else { "different faces; use bridge" })]
    WrongJoin(bool),
    #[error("face at {0} -> {1} has length {2}, not 3")]
    NotATriangle(VertexId, VertexId, usize),
    #[error("cut corners at {0} repeat")]
    RepeatedCut(VertexId),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("derive: {0}")]
    Derive(#[from] DeriveError),
    #[error("step {step} (line {line}: `{text}`): {source}")]
    Step {
        step: usize,
        line: usize,
        text: String,
        source: StepError,
        /// Rotation system just before the failing step.
        snapshot: Box<String>,
    },
    #[error("genus ledger: derived {derived} + {bridges} bridge(s) + {surgery} from rotation surgery != {fin}")]
    Ledger { derived: u64, bridges: u64, surgery: u64, fin: u64 },
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

impl PipelineError {
    /// Index of the failing step, if a step failed.
    pub fn step(&self) -> Option<usize> {
        match self {
            PipelineError::Step { step, .. } => Some(*step),
            _ => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error("parallel edge or loop at ({0}, {1})")]
    NotSimple(VertexId, VertexId),
    #[error("expected {expected} vertices, found {found}")]
    Order { expected: u64, found: usize },
    #[error("({0}, {1}) is not an edge")]
    Missing(VertexId, VertexId),
    #[error("genus {found}, target {target}")]
    Genus { found: u64, target: u64 },
}

/// Checks that `emb` is a simple complete graph on `n` vertices with the
/// minimum genus of K_n.
pub fn verify_final(emb: &EmbeddedGraph, n: u64) -> Result<GenusReport, VerifyError> {
    if let Some((u, v)) = emb.simplicity_defect() {
        return Err(VerifyError::NotSimple(u, v));
    }
    if emb.vertex_count() as u64 != n {
        return Err(VerifyError::Order { expected: n, found: emb.vertex_count() });
    }
    if let Some(&(u, v)) = emb.missing_pairs().first() {
        return Err(VerifyError::Missing(u, v));
    }
    let mut report = euler_genus(emb)?;
    let target = complete_graph_genus(n)?;
    report.target_genus = Some(target);
    if report.genus != target {
        return Err(VerifyError::Genus { found: report.genus, target });
    }
    Ok(report)
}

/// One executed step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub line: usize,
    pub text: String,
    /// The step with every vertex resolved.
    pub resolved: String,
    pub flips: Vec<Flip>,
    pub added: Option<(VertexId, VertexId)>,
    pub bridges: u64,
    /// Faces removed by a rotation surgery.
    pub face_deficit: u64,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub genus: u64,
}

impl fmt::Display for StepRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:>3} {} | V={} E={} F={} genus={}",
            self.line, self.resolved, self.vertices, self.edges, self.faces, self.genus
        )
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Keep the rotation system after every step.
    pub snapshots: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineResult {
    pub params: FamilyParameters,
    pub n: u64,
    pub derived: GenusReport,
    /// Nonadjacent pairs of the derived embedding.
    pub derived_missing: Vec<(VertexId, VertexId)>,
    pub steps: Vec<StepRecord>,
    pub bindings: BTreeMap<String, VertexId>,
    pub final_graph: EmbeddedGraph,
    pub report: GenusReport,
    pub snapshots: Vec<String>,
}

impl PipelineResult {
    pub fn verdict(&self) -> String {
        verdict_line(self.params.case, self.params.s, Some(self.report.genus), true)
    }

    /// The step trace, one line per step.
    pub fn trace(&self) -> String {
        self.steps.iter().map(|s| format!("{s}\n")).collect()
    }
}

/// `CASE <k> s=<s> n=<n> genus=<g> target=<g*> PASS|FAIL`.
pub fn verdict_line(case: Case, s: u32, genus: Option<u64>, pass: bool) -> String {
    let n = case.order(s);
    let target = complete_graph_genus(n).map(|g| g.to_string()).unwrap_or_else(|_| "?".into());
    let genus = genus.map(|g| g.to_string()).unwrap_or_else(|| "?".into());
    let status = if pass { "PASS" } else { "FAIL" };
    format!("CASE {case} s={s} n={n} genus={genus} target={target} {status}")
}

struct Captured {
    /// Per face position: the vertex and the darts bounding its corner.
    corners: Vec<(usize, Dart, Dart)>,
}

struct Surgery<'a> {
    g: EmbeddedGraph,
    params: &'a FamilyParameters,
    bindings: BTreeMap<String, VertexId>,
    faces: HashMap<String, Captured>,
}

impl Surgery<'_> {
    fn resolve(&self, s: &Sym) -> Result<VertexId, StepError> {
        let m = self.params.modulus as i64;
        let num = |x: i64| VertexId::Numbered(x.rem_euclid(m) as u32);
        Ok(match s {
            Sym::Fixed(v) => *v,
            Sym::Bound(n) => *self.bindings.get(n).ok_or_else(|| StepError::Unbound(n.clone()))?,
            Sym::Param { coef, param } => {
                let p = match param {
                    'g' => self.params.gamma,
                    'd' => self.params.delta,
                    _ => self.params.epsilon,
                };
                num(coef * p as i64)
            }
            Sym::Affine(a) => num(a.eval(self.params.s as i64)),
        })
    }

    fn index(&self, v: VertexId) -> Result<usize, StepError> {
        self.g.index_of(&v).ok_or(StepError::Embed(EmbedError::UnknownVertex(v)))
    }

    /// The unique dart from `p` to `q`.
    fn dart(&self, p: usize, q: VertexId) -> Result<Dart, StepError> {
        let qi = self.index(q)?;
        let ds = self.g.darts_between(p, qi);
        match ds.as_slice() {
            [d] => Ok(*d),
            [] => Err(StepError::NotANeighbor { at: self.g.label(p), neighbor: q }),
            _ => Err(StepError::AmbiguousNeighbor { at: self.g.label(p), neighbor: q }),
        }
    }

    /// The dart leaving the corner `gap` at `p`; a new edge in that corner
    /// goes just before it.
    fn gap_dart(&self, p: usize, gap: &Gap) -> Result<Dart, StepError> {
        match (&gap.0, &gap.1) {
            (Slot::Vertex(a), b) => {
                let da = self.dart(p, self.resolve(a)?)?;
                let next = self.g.succ(da);
                if let Slot::Vertex(b) = b {
                    let want = self.resolve(b)?;
                    if self.g.head_label(next) != want {
                        return Err(StepError::GapMismatch {
                            at: self.g.label(p),
                            after: self.g.head_label(da),
                            expected: want,
                            found: self.g.head_label(next),
                        });
                    }
                }
                Ok(next)
            }
            (Slot::Any, Slot::Vertex(b)) => self.dart(p, self.resolve(b)?),
            (Slot::Any, Slot::Any) => unreachable!("rejected by the parser"),
        }
    }

    fn corner_dart(&self, c: &Corner) -> Result<Dart, StepError> {
        let p = self.index(self.resolve(&c.at)?)?;
        self.gap_dart(p, &c.gap)
    }

    fn edge_pair(&self, e: &(Sym, Sym)) -> Result<(VertexId, VertexId), StepError> {
        Ok((self.resolve(&e.0)?, self.resolve(&e.1)?))
    }

    fn check_outcome(&self, expect: &Option<(Sym, Sym)>, got: (VertexId, VertexId)) -> Result<(), StepError> {
        if let Some(e) = expect {
            let (x, y) = self.edge_pair(e)?;
            if (x, y) != got && (y, x) != got {
                return Err(StepError::WrongOutcome(x, y, got.0, got.1));
            }
        }
        Ok(())
    }

    fn cascade(&mut self, start: crate::surface::EdgeId, expect: &Option<(Sym, Sym)>) -> Result<Vec<Flip>, StepError> {
        let flips = cascade_in_place(&mut self.g, start)?;
        let last = flips.last().expect("a cascade flips at least once").added;
        self.check_outcome(expect, last)?;
        Ok(flips)
    }

    /// Candidate darts for face position `i`: every sub-corner the original
    /// corner has been split into by later insertions.
    fn sub_corners(&self, corner: (usize, Dart, Dart)) -> Vec<Dart> {
        let (_, from, to) = corner;
        let mut out = Vec::new();
        let mut d = from;
        loop {
            d = self.g.succ(d);
            out.push(d);
            if d == to || d == from {
                break;
            }
        }
        out
    }

    fn face_slot(&self, face: &Captured, slot: &FaceSlot) -> Result<usize, StepError> {
        match slot {
            FaceSlot::Position(i) => {
                if *i < face.corners.len() {
                    Ok(*i)
                } else {
                    Err(StepError::Position(*i))
                }
            }
            FaceSlot::Vertex(s) => {
                let v = self.index(self.resolve(s)?)?;
                let hits: Vec<usize> = (0..face.corners.len()).filter(|&i| face.corners[i].0 == v).collect();
                match hits.as_slice() {
                    [i] => Ok(*i),
                    _ => Err(StepError::FaceVertex(self.g.label(v), hits.len())),
                }
            }
        }
    }

    fn run(&mut self, step: &Step) -> Result<StepRecord, StepError> {
        let before = euler_genus(&self.g)?;
        let mut rec = StepRecord {
            line: 0,
            text: String::new(),
            resolved: String::new(),
            flips: Vec::new(),
            added: None,
            bridges: 0,
            face_deficit: 0,
            vertices: 0,
            edges: 0,
            faces: 0,
            genus: 0,
        };
        match step {
            Step::Flip { edge, expect } => {
                let (u, v) = self.edge_pair(edge)?;
                let e = self.g.find_edge(&u, &v)?;
                let flip = self.g.flip_in_place(e)?;
                self.check_outcome(expect, flip.added)?;
                rec.resolved = format!("flip {u} {v} -> ({}, {})", flip.added.0, flip.added.1);
                rec.added = Some(flip.added);
                rec.flips.push(flip);
            }
            Step::Cascade { edge, expect } => {
                let (u, v) = self.edge_pair(edge)?;
                let e = self.g.find_edge(&u, &v)?;
                rec.flips = self.cascade(e, expect)?;
                let last = rec.flips.last().unwrap().added;
                rec.resolved = format!("cascade {u} {v}: {} flips -> ({}, {})", rec.flips.len(), last.0, last.1);
                rec.added = Some(last);
            }
            Step::ReverseBlocks { at, cuts } => {
                let v = self.resolve(at)?;
                let p = self.index(v)?;
                let mut at_pos: Vec<usize> = cuts
                    .iter()
                    .map(|c| self.gap_dart(p, c).map(|d| self.g.position(d)))
                    .collect::<Result<_, _>>()?;
                at_pos.sort_unstable();
                if at_pos.windows(2).any(|w| w[0] == w[1]) {
                    return Err(StepError::RepeatedCut(v));
                }
                let rot = self.g.rotation(p).to_vec();
                let mut blocks: Vec<Vec<Dart>> = Vec::new();
                for (k, &start) in at_pos.iter().enumerate() {
                    let end = if k + 1 < at_pos.len() { at_pos[k + 1] } else { at_pos[0] + rot.len() };
                    blocks.push((start..end).map(|i| rot[i % rot.len()]).collect());
                }
                blocks.reverse();
                let order: Vec<Dart> = blocks.concat();
                self.g = crate::surface::replace_rotation(&self.g, &v, &order)?;
                rec.resolved = format!("reverse-blocks {v}: {} blocks", blocks.len());
            }
            Step::Face { name, corner, expect } => {
                let y = self.corner_dart(corner)?;
                let f = face_of(&self.g, y);
                let n = f.walk.len();
                let corners: Vec<(usize, Dart, Dart)> = (0..n)
                    .map(|i| (self.g.tail(f.walk[i]), f.walk[(i + n - 1) % n].reverse(), f.walk[i]))
                    .collect();
                let found: Vec<VertexId> = f.vertices(&self.g);
                let show = |vs: &[VertexId]| vs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
                if let Some(exp) = expect {
                    let want: Vec<VertexId> = exp.iter().map(|s| self.resolve(s)).collect::<Result<_, _>>()?;
                    if want != found {
                        return Err(StepError::FaceMismatch { expected: show(&want), found: show(&found) });
                    }
                }
                rec.resolved = format!("face {name} = [{}]", show(&found));
                self.faces.insert(name.clone(), Captured { corners });
            }
            Step::FaceChord { name, ends, cascade } => {
                let face = self.faces.get(name).ok_or_else(|| StepError::UnknownFace(name.clone()))?;
                let (i, j) = (self.face_slot(face, &ends.0)?, self.face_slot(face, &ends.1)?);
                let (ci, cj) = (face.corners[i], face.corners[j]);
                let (id, _) = face_index(&self.g);
                let (di, dj) = self
                    .sub_corners(ci)
                    .into_iter()
                    .flat_map(|a| self.sub_corners(cj).into_iter().map(move |b| (a, b)))
                    .find(|(a, b)| id[a.0 as usize] == id[b.0 as usize])
                    .ok_or(StepError::NoCommonFace)?;
                let policy = if cascade.is_some() { ParallelPolicy::Allow } else { ParallelPolicy::Reject };
                let (g, e, _) = insert_at_corners(&self.g, di, dj, policy)?;
                self.g = g;
                let (u, v) = self.g.endpoints(e);
                rec.added = Some((u, v));
                rec.resolved = format!("chord {name} @{i} @{j} ({u}, {v})");
                if let Some(expect) = cascade {
                    let (ui, vi) = (self.index(u)?, self.index(v)?);
                    let older = self
                        .g
                        .darts_between(ui, vi)
                        .into_iter()
                        .map(Dart::edge)
                        .filter(|&f| f != e)
                        .min()
                        .ok_or(StepError::Embed(EmbedError::NoEdge(u, v)))?;
                    rec.flips = self.cascade(older, &Some(expect.clone()))?;
                    let last = rec.flips.last().unwrap().added;
                    rec.resolved += &format!(", cascade: {} flips -> ({}, {})", rec.flips.len(), last.0, last.1);
                }
            }
            Step::Join { kind, ends } => {
                let a = self.corner_dart(&ends.0)?;
                let b = self.corner_dart(&ends.1)?;
                let (g, e, same) = insert_at_corners(&self.g, a, b, ParallelPolicy::Reject)?;
                if same != (*kind == JoinKind::Chord) {
                    return Err(StepError::WrongJoin(same));
                }
                self.g = g;
                let (u, v) = self.g.endpoints(e);
                rec.added = Some((u, v));
                if *kind == JoinKind::Bridge {
                    rec.bridges = 1;
                }
                let verb = if same { "chord" } else { "bridge" };
                rec.resolved = format!("{verb} ({u}, {v})");
            }
            Step::Locate { name, edge } => {
                let (p, q) = self.edge_pair(edge)?;
                let d = self.g.find_dart(&p, &q)?;
                let f = face_of(&self.g, d);
                if f.len() != 3 {
                    return Err(StepError::NotATriangle(p, q, f.len()));
                }
                let apex = self.g.head_label(self.g.face_next(d));
                self.bindings.insert(name.clone(), apex);
                rec.resolved = format!("locate ${name} = {apex} on [{apex} {p} {q}]");
            }
            Step::Contract { u, v, into } => {
                let (a, b, c) = (self.resolve(u)?, self.resolve(v)?, self.resolve(into)?);
                self.g = identify_and_contract(&self.g, &a, &b, c, ParallelPolicy::Reject)?;
                rec.resolved = format!("contract ({a}, {b}) into {c}");
            }
        }
        let after = euler_genus(&self.g)?;
        if matches!(step, Step::Flip { .. } | Step::Cascade { .. })
            && (before.vertices, before.edges, before.faces) != (after.vertices, after.edges, after.faces)
        {
            unreachable!("flips preserve V, E and F");
        }
        if let Step::ReverseBlocks { .. } = step {
            rec.face_deficit = (before.faces - after.faces) as u64;
        }
        rec.vertices = after.vertices;
        rec.edges = after.edges;
        rec.faces = after.faces;
        rec.genus = after.genus;
        Ok(rec)
    }
}

/// Runs `script` on the derived embedding of the family member.
pub fn run_script(case: Case, s: u32, script: &Script, options: RunOptions) -> Result<PipelineResult, PipelineError> {
    let params = parameters(case, s)?;
    let cg = build(case, s)?;
    let d = derive(&cg)?;
    let derived = euler_genus(&d.emb).map_err(DeriveError::from)?;
    let derived_missing = missing_edge_inventory(&d)?;
    let mut sg = Surgery { g: d.emb, params: &params, bindings: BTreeMap::new(), faces: HashMap::new() };
    let mut steps = Vec::with_capacity(script.lines.len());
    let mut snapshots = Vec::new();
    for (k, line) in script.lines.iter().enumerate() {
        let mut rec = sg.run(&line.step).map_err(|source| PipelineError::Step {
            step: k + 1,
            line: line.line,
            text: line.text.clone(),
            source,
            snapshot: Box::new(write_rotations(&sg.g)),
        })?;
        rec.line = line.line;
        rec.text = line.text.clone();
        if options.snapshots {
            snapshots.push(write_rotations(&sg.g));
        }
        steps.push(rec);
    }
    let fin = euler_genus(&sg.g).map_err(VerifyError::from)?;
    let bridges: u64 = steps.iter().map(|r| r.bridges).sum();
    let surgery: u64 = steps.iter().map(|r| r.face_deficit).sum::<u64>() / 2;
    if derived.genus + bridges + surgery != fin.genus {
        return Err(PipelineError::Ledger { derived: derived.genus, bridges, surgery, fin: fin.genus });
    }
    let n = case.order(s);
    let report = verify_final(&sg.g, n)?;
    Ok(PipelineResult {
        params,
        n,
        derived,
        derived_missing,
        steps,
        bindings: sg.bindings,
        final_graph: sg.g,
        report,
        snapshots,
    })
}

pub fn run_case11(s: u32) -> Result<PipelineResult, PipelineError> {
    run_script(Case::Eleven, s, &builtin_script(Case::Eleven), RunOptions::default())
}

pub fn run_case2(s: u32) -> Result<PipelineResult, PipelineError> {
    run_script(Case::Two, s, &builtin_script(Case::Two), RunOptions::default())
}

pub fn run(case: Case, s: u32, options: RunOptions) -> Result<PipelineResult, PipelineError> {
    run_script(case, s, &builtin_script(case), options)
}

/// One member of a sweep: `s` and how its run went.
pub type SweepRun = (u32, Result<PipelineResult, PipelineError>);

/// Runs every `s` in `from..=to` in parallel, in order of `s`.
pub fn sweep(
    case: Case,
    from: u32,
    to: u32,
    options: RunOptions,
) -> Result<Vec<SweepRun>, FamilyError> {
    parameters(case, from)?;
    let script = builtin_script(case);
    Ok((from..=to)
        .into_par_iter()
        .map(|s| (s, run_script(case, s, &script, options)))
        .collect())
}
