//! The two infinite families of index-1 current graphs: a ladder generated
//! per `s`, plus a constant fragment read from `data/`.

mod fragment;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::current::{parse_current_graph, CurrentError, CurrentGraph, VertexSpec};
use crate::parse::ParseError;

pub use fragment::{parse_fragment, Affine, Fragment, FragmentVertex, LadderSpec};

const Z18: &str = include_str!("../../data/case2_s1.cg");
const CASE11_S2: &str = include_str!("../../data/case11_s2.cg");
const CASE2: &str = include_str!("../../data/case2.fam");
const CASE11: &str = include_str!("../../data/case11.fam");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Case {
    Two,
    Eleven,
}

impl Case {
    pub fn number(self) -> u32 {
        match self {
            Case::Two => 2,
            Case::Eleven => 11,
        }
    }

    /// Smallest `s` the family covers.
    pub fn first(self) -> u32 {
        match self {
            Case::Two => 1,
            Case::Eleven => 2,
        }
    }

    /// Order of the complete graph embedded at parameter `s`.
    pub fn order(self, s: u32) -> u64 {
        let s = s as u64;
        match self {
            Case::Two => 12 * s + 14,
            Case::Eleven => 12 * s + 11,
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

impl FromStr for Case {
    type Err = String;

    fn from_str(t: &str) -> Result<Self, String> {
        match t {
            "2" => Ok(Case::Two),
            "11" => Ok(Case::Eleven),
            _ => Err(format!("unknown case `{t}` (expected 2 or 11)")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("case {case} starts at s = {first}, got s = {s}")]
    Range { case: Case, s: u32, first: u32 },
    #[error("fixture: {0}")]
    Fixture(#[from] ParseError),
    #[error(transparent)]
    Current(#[from] CurrentError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyParameters {
    pub case: Case,
    pub s: u32,
    pub modulus: u32,
    pub gamma: u32,
    pub delta: u32,
    pub epsilon: u32,
}

pub fn parameters(case: Case, s: u32) -> Result<FamilyParameters, FamilyError> {
    check_range(case, s, case.first())?;
    let modulus = 12 * s + 6;
    let (gamma, delta, epsilon) = match case {
        Case::Eleven => (6 * s - 2, 1, 6 * s + 5),
        Case::Two => (3 * s + 5, 2, 1),
    };
    Ok(FamilyParameters { case, s, modulus, gamma, delta, epsilon })
}

fn check_range(case: Case, s: u32, first: u32) -> Result<(), FamilyError> {
    if s < first {
        Err(FamilyError::Range { case, s, first })
    } else {
        Ok(())
    }
}

/// Ladder vertices with integer currents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderFragment {
    /// Signed rung currents, top to bottom, in ladder order.
    pub rungs: Vec<i64>,
    /// Outgoing currents of each top vertex, in rotation order.
    pub top: Vec<Vec<i64>>,
    pub bottom: Vec<Vec<i64>>,
    /// Rail currents entering the first pair and leaving the last pair.
    pub top_rail: (i64, i64),
    pub bottom_rail: (i64, i64),
}

impl LadderFragment {
    pub fn new(spec: &LadderSpec, s: i64) -> Self {
        let (first, last) = (spec.first_rung.eval(s), spec.last_rung.eval(s));
        let (t0, b0) = (spec.top.eval(s), spec.bottom.eval(s));
        let (mut t, mut b) = (t0, b0);
        let mut out = LadderFragment {
            rungs: Vec::new(),
            top: Vec::new(),
            bottom: Vec::new(),
            top_rail: (t0, t0),
            bottom_rail: (b0, b0),
        };
        for (i, r) in (first..=last).step_by(3).enumerate() {
            let rho = if i % 2 == 0 { r } else { -r };
            let (tn, bn) = (t - rho, b + rho);
            let mut top = vec![-t, tn, rho];
            let mut bottom = vec![-b, bn, -rho];
            if spec.reverse[(i % 2) * 2 + 1] {
                top.reverse();
            }
            if spec.reverse[(i % 2) * 2] {
                bottom.reverse();
            }
            out.rungs.push(rho);
            out.top.push(top);
            out.bottom.push(bottom);
            (t, b) = (tn, bn);
        }
        out.top_rail.1 = t;
        out.bottom_rail.1 = b;
        out
    }

    pub fn len(&self) -> usize {
        self.rungs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rungs.is_empty()
    }

    /// Vertices whose outgoing currents do not sum to zero over the integers.
    pub fn kirchhoff_defects(&self) -> Vec<usize> {
        self.top
            .iter()
            .chain(&self.bottom)
            .enumerate()
            .filter(|(_, v)| v.iter().sum::<i64>() != 0)
            .map(|(i, _)| i)
            .collect()
    }
}

fn fragment(case: Case) -> Result<Fragment, FamilyError> {
    Ok(parse_fragment(match case {
        Case::Two => CASE2,
        Case::Eleven => CASE11,
    })?)
}

/// The ladder of a family member. Case 11 uses a ladder from s = 3 on.
pub fn generate_ladder(case: Case, s: u32) -> Result<LadderFragment, FamilyError> {
    let f = fragment(case)?;
    let first = match case {
        Case::Two => 1,
        Case::Eleven => f.from as u32,
    };
    check_range(case, s, first)?;
    let spec = f.ladder.as_ref().expect("family fragments carry a ladder");
    Ok(LadderFragment::new(spec, s as i64))
}

/// Expands a fragment at `s` into a current graph.
pub fn instantiate(f: &Fragment, s: u32) -> Result<CurrentGraph, FamilyError> {
    let m = f.group.eval(s as i64);
    let modulus = m as u32;
    let reduce = |x: i64| x.rem_euclid(m) as u32;
    let mut specs = Vec::new();
    if let Some(spec) = &f.ladder {
        let ladder = LadderFragment::new(spec, s as i64);
        for (i, (t, b)) in ladder.top.iter().zip(&ladder.bottom).enumerate() {
            specs.push(VertexSpec::plain(format!("T{i}"), t.iter().map(|&c| reduce(c)).collect()));
            specs.push(VertexSpec::plain(format!("B{i}"), b.iter().map(|&c| reduce(c)).collect()));
        }
    }
    for v in &f.vertices {
        if v.pendant {
            specs.push(VertexSpec::pendant(v.name.clone(), modulus));
        } else {
            let currents = v.currents.iter().map(|c| reduce(c.eval(s as i64))).collect();
            specs.push(VertexSpec::vortex(v.name.clone(), currents, v.letters.clone()));
        }
    }
    Ok(CurrentGraph::from_outgoing(modulus, &specs, Some(f.case))?)
}

pub fn build_case2(s: u32) -> Result<CurrentGraph, FamilyError> {
    check_range(Case::Two, s, 1)?;
    if s == 1 {
        return Ok(parse_current_graph(Z18)?);
    }
    instantiate(&fragment(Case::Two)?, s)
}

pub fn build_case11(s: u32) -> Result<CurrentGraph, FamilyError> {
    check_range(Case::Eleven, s, 2)?;
    if s == 2 {
        return Ok(parse_current_graph(CASE11_S2)?);
    }
    instantiate(&fragment(Case::Eleven)?, s)
}

pub fn build(case: Case, s: u32) -> Result<CurrentGraph, FamilyError> {
    match case {
        Case::Two => build_case2(s),
        Case::Eleven => build_case11(s),
    }
}
