//! Surgery scripts. One step per line; vertices are written symbolically so
//! a single script serves every `s`.
//!
//! Vertex tokens: letters (`a`, `y0`, ...), multiples of the family
//! parameters (`g`, `-g`, `2e`, `d`), plain residues (`0`), affine forms
//! (`9s+10`) and names bound by `locate` (`$v`).
//!
//! A corner `p:A|B` is the corner at `p` between consecutive neighbors `A`
//! and `B`; either neighbor may be `*` to mean "whatever is there".
//!
//! ```text
//! cascade g b expect a y
//! flip 0 -e expect b y
//! reverse-blocks 0 y|b b|-g g|c x|-d 2e|a
//! face F 0:2e|c expect 0 c g 0 b y 0 -d x 0 -g b 0 a 2e
//! chord F @1 @13
//! chord-cascade F @10 @8 expect 0 -e
//! chord u:y0|x b:x|y0
//! bridge u:y0|b v:c|w
//! locate $v -g d
//! contract y0 y1 as y
//! ```

use std::fmt;

use crate::families::Affine;
use crate::parse::{strip_comment, tokens, ParseError, Span};
use crate::surface::{Letter, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sym {
    Fixed(VertexId),
    Bound(String),
    /// `coef` times one of the family parameters `g`, `d`, `e`.
    Param { coef: i64, param: char },
    Affine(Affine),
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sym::Fixed(v) => write!(f, "{v}"),
            Sym::Bound(n) => write!(f, "${n}"),
            Sym::Param { coef: 1, param } => write!(f, "{param}"),
            Sym::Param { coef: -1, param } => write!(f, "-{param}"),
            Sym::Param { coef, param } => write!(f, "{coef}{param}"),
            Sym::Affine(a) => write!(f, "{a}"),
        }
    }
}

fn parse_sym(t: &str) -> Result<Sym, String> {
    if let Some(name) = t.strip_prefix('$') {
        if name.is_empty() {
            return Err("empty binding name".into());
        }
        return Ok(Sym::Bound(name.to_string()));
    }
    if let Ok(l) = t.parse::<Letter>() {
        return Ok(Sym::Fixed(VertexId::Lettered(l)));
    }
    if let Ok(n) = t.parse::<u32>() {
        return Ok(Sym::Fixed(VertexId::Numbered(n)));
    }
    if let Some(param) = t.chars().last().filter(|c| matches!(c, 'g' | 'd' | 'e')) {
        let coef = match &t[..t.len() - 1] {
            "" => 1,
            "-" => -1,
            c => c.parse().map_err(|_| format!("bad multiple `{t}`"))?,
        };
        return Ok(Sym::Param { coef, param });
    }
    if t.contains('s') {
        return t.parse().map(Sym::Affine);
    }
    Err(format!("`{t}` is not a vertex"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slot {
    Any,
    Vertex(Sym),
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Any => write!(f, "*"),
            Slot::Vertex(s) => write!(f, "{s}"),
        }
    }
}

fn parse_slot(t: &str) -> Result<Slot, String> {
    if t == "*" {
        Ok(Slot::Any)
    } else {
        parse_sym(t).map(Slot::Vertex)
    }
}

/// The gap between two consecutive neighbors in a rotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gap(pub Slot, pub Slot);

fn parse_gap(t: &str) -> Result<Gap, String> {
    let (a, b) = t.split_once('|').ok_or_else(|| format!("`{t}` is not of the form A|B"))?;
    let gap = Gap(parse_slot(a)?, parse_slot(b)?);
    if gap.0 == Slot::Any && gap.1 == Slot::Any {
        return Err("at least one side of a corner must be named".into());
    }
    Ok(gap)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corner {
    pub at: Sym,
    pub gap: Gap,
}

fn parse_corner(t: &str) -> Result<Corner, String> {
    let (p, gap) = t.split_once(':').ok_or_else(|| format!("`{t}` is not of the form p:A|B"))?;
    Ok(Corner { at: parse_sym(p)?, gap: parse_gap(gap)? })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FaceSlot {
    Position(usize),
    Vertex(Sym),
}

fn parse_face_slot(t: &str) -> Result<FaceSlot, String> {
    match t.strip_prefix('@') {
        Some(n) => n.parse().map(FaceSlot::Position).map_err(|_| format!("bad position `{t}`")),
        None => parse_sym(t).map(FaceSlot::Vertex),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JoinKind {
    Chord,
    Bridge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Flip { edge: (Sym, Sym), expect: Option<(Sym, Sym)> },
    Cascade { edge: (Sym, Sym), expect: Option<(Sym, Sym)> },
    ReverseBlocks { at: Sym, cuts: Vec<Gap> },
    Face { name: String, corner: Corner, expect: Option<Vec<Sym>> },
    FaceChord { name: String, ends: (FaceSlot, FaceSlot), cascade: Option<(Sym, Sym)> },
    Join { kind: JoinKind, ends: (Corner, Corner) },
    Locate { name: String, edge: (Sym, Sym) },
    Contract { u: Sym, v: Sym, into: Sym },
}

impl Step {
    pub fn verb(&self) -> &'static str {
        match self {
            Step::Flip { .. } => "flip",
            Step::Cascade { .. } => "cascade",
            Step::ReverseBlocks { .. } => "reverse-blocks",
            Step::Face { .. } => "face",
            Step::FaceChord { cascade: None, .. } => "chord",
            Step::FaceChord { .. } => "chord-cascade",
            Step::Join { kind: JoinKind::Chord, .. } => "chord",
            Step::Join { kind: JoinKind::Bridge, .. } => "bridge",
            Step::Locate { .. } => "locate",
            Step::Contract { .. } => "contract",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptLine {
    pub line: usize,
    pub text: String,
    pub step: Step,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Script {
    pub lines: Vec<ScriptLine>,
}

pub fn parse_script(text: &str) -> Result<Script, ParseError> {
    let mut lines = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        let toks: Vec<(usize, &str)> = tokens(line).collect();
        if toks.is_empty() {
            continue;
        }
        let err = |i: usize, msg: String| {
            ParseError::new(Span::new(no + 1, toks.get(i).map_or(line.len(), |t| t.0) + 1), msg)
        };
        let word = |i: usize| toks.get(i).map(|t| t.1).ok_or_else(|| err(i, "line ends early".into()));
        let sym = |i: usize| word(i).and_then(|t| parse_sym(t).map_err(|e| err(i, e)));
        let pair = |i: usize| Ok::<_, ParseError>((sym(i)?, sym(i + 1)?));
        let expect_at = |i: usize| -> Result<Option<(Sym, Sym)>, ParseError> {
            match toks.get(i) {
                None => Ok(None),
                Some((_, "expect")) => Ok(Some(pair(i + 1)?)),
                Some(_) => Err(err(i, "expected `expect`".into())),
            }
        };
        let arity = |n: usize| {
            if toks.len() > n {
                Err(err(n, "unexpected text".into()))
            } else {
                Ok(())
            }
        };
        let step = match toks[0].1 {
            "flip" | "cascade" => {
                let edge = pair(1)?;
                let expect = expect_at(3)?;
                arity(if expect.is_some() { 6 } else { 3 })?;
                if toks[0].1 == "flip" {
                    Step::Flip { edge, expect }
                } else {
                    Step::Cascade { edge, expect }
                }
            }
            "reverse-blocks" => {
                let at = sym(1)?;
                let cuts = (2..toks.len())
                    .map(|i| parse_gap(toks[i].1).map_err(|e| err(i, e)))
                    .collect::<Result<Vec<_>, _>>()?;
                if cuts.len() < 2 {
                    return Err(err(toks.len(), "need at least two cuts".into()));
                }
                Step::ReverseBlocks { at, cuts }
            }
            "face" => {
                let name = word(1)?.to_string();
                let corner = parse_corner(word(2)?).map_err(|e| err(2, e))?;
                let expect = match toks.get(3) {
                    None => None,
                    Some((_, "expect")) => Some((4..toks.len()).map(sym).collect::<Result<Vec<_>, _>>()?),
                    Some(_) => return Err(err(3, "expected `expect`".into())),
                };
                Step::Face { name, corner, expect }
            }
            "chord" | "chord-cascade" | "bridge" if toks.len() >= 3 && word(1)?.contains(':') => {
                if toks[0].1 == "chord-cascade" {
                    return Err(err(1, "chord-cascade needs a captured face".into()));
                }
                arity(3)?;
                let a = parse_corner(word(1)?).map_err(|e| err(1, e))?;
                let b = parse_corner(word(2)?).map_err(|e| err(2, e))?;
                let kind = if toks[0].1 == "bridge" { JoinKind::Bridge } else { JoinKind::Chord };
                Step::Join { kind, ends: (a, b) }
            }
            "chord" | "chord-cascade" => {
                let name = word(1)?.to_string();
                let slot = |i: usize| word(i).and_then(|t| parse_face_slot(t).map_err(|e| err(i, e)));
                let ends = (slot(2)?, slot(3)?);
                let cascade = if toks[0].1 == "chord-cascade" {
                    let e = expect_at(4)?.ok_or_else(|| err(4, "chord-cascade needs `expect X Y`".into()))?;
                    arity(7)?;
                    Some(e)
                } else {
                    arity(4)?;
                    None
                };
                Step::FaceChord { name, ends, cascade }
            }
            "locate" => {
                let name = word(1)?;
                let name = name.strip_prefix('$').ok_or_else(|| err(1, "binding names start with `$`".into()))?;
                arity(4)?;
                Step::Locate { name: name.to_string(), edge: pair(2)? }
            }
            "contract" => {
                if word(3)? != "as" {
                    return Err(err(3, "expected `as`".into()));
                }
                arity(5)?;
                Step::Contract { u: sym(1)?, v: sym(2)?, into: sym(4)? }
            }
            other => return Err(err(0, format!("unknown step `{other}`"))),
        };
        lines.push(ScriptLine { line: no + 1, text: line.trim().to_string(), step });
    }
    Ok(Script { lines })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbols() {
        assert_eq!(parse_sym("-g").unwrap(), Sym::Param { coef: -1, param: 'g' });
        assert_eq!(parse_sym("2e").unwrap(), Sym::Param { coef: 2, param: 'e' });
        assert_eq!(parse_sym("y0").unwrap(), Sym::Fixed(VertexId::Lettered(Letter::Y0)));
        assert_eq!(parse_sym("0").unwrap(), Sym::Fixed(VertexId::Numbered(0)));
        assert_eq!(parse_sym("9s+10").unwrap(), Sym::Affine(Affine::new(9, 10)));
        assert_eq!(parse_sym("$v").unwrap(), Sym::Bound("v".into()));
        assert!(parse_sym("q").is_err());
        assert_eq!(parse_sym("-2e").unwrap().to_string(), "-2e");
    }

    #[test]
    fn steps() {
        let s = parse_script(
            "cascade g b expect a y\nreverse-blocks 0 y|b *|-g\nface F 0:2e|c expect 0 c\n\
             chord F @1 a\nchord-cascade F @10 @8 expect 0 -e\nbridge u:y0|b v:c|w\ncontract y0 y1 as y\n",
        )
        .unwrap();
        let verbs: Vec<&str> = s.lines.iter().map(|l| l.step.verb()).collect();
        assert_eq!(verbs, ["cascade", "reverse-blocks", "face", "chord", "chord-cascade", "bridge", "contract"]);
        assert_eq!(s.lines[3].line, 4);
    }

    #[test]
    fn errors() {
        let e = parse_script("flip 0 q\n").unwrap_err();
        assert_eq!(e.span, Span::new(1, 8));
        assert!(parse_script("chord-cascade F @1 @2\n").is_err());
        assert!(parse_script("reverse-blocks 0 *|*\n").is_err());
        assert!(parse_script("twist 0\n").is_err());
    }
}
