//! Family fragments: current-graph vertices whose currents are affine in `s`.
//!
//! ```text
//! group 12s+6
//! case 2
//! from 2
//! ladder top 3s+8 bottom 3s-2 rungs 9 6s-3 reverse even-top odd-top
//! vertex ABC (3s+1 1 -3s-5) label bac
//! pendant H
//! ```
//!
//! `rungs a b` lists the rung magnitudes `a, a+3, ..., b`; the range may be
//! empty. Each vertex line gives outgoing currents in rotation order; edges
//! come from pairing every current with its negative.

use std::fmt;
use std::str::FromStr;

use crate::parse::{strip_comment, tokens, ParseError, Span};
use crate::surface::Letter;

/// `a*s + b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Affine {
    pub a: i64,
    pub b: i64,
}

impl Affine {
    pub const fn new(a: i64, b: i64) -> Self {
        Affine { a, b }
    }

    pub fn eval(self, s: i64) -> i64 {
        self.a * s + self.b
    }
}

impl FromStr for Affine {
    type Err = String;

    fn from_str(t: &str) -> Result<Self, String> {
        let bad = || format!("`{t}` is not of the form a*s+b");
        let Some(at) = t.find('s') else {
            return t.parse().map(|b| Affine::new(0, b)).map_err(|_| bad());
        };
        let a = match &t[..at] {
            "" | "+" => 1,
            "-" => -1,
            c => c.parse().map_err(|_| bad())?,
        };
        let rest = &t[at + 1..];
        let b = match rest.chars().next() {
            None => 0,
            Some('+') => rest[1..].parse().map_err(|_| bad())?,
            Some('-') => rest.parse().map_err(|_| bad())?,
            Some(_) => return Err(bad()),
        };
        Ok(Affine::new(a, b))
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (0, b) => write!(f, "{b}"),
            (a, b) => {
                match a {
                    1 => write!(f, "s")?,
                    -1 => write!(f, "-s")?,
                    a => write!(f, "{a}s")?,
                }
                match b {
                    0 => Ok(()),
                    b if b > 0 => write!(f, "+{b}"),
                    b => write!(f, "{b}"),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderSpec {
    pub top: Affine,
    pub bottom: Affine,
    pub first_rung: Affine,
    pub last_rung: Affine,
    /// Indexed by `(rung parity) * 2 + (1 if top)`.
    pub reverse: [bool; 4],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FragmentVertex {
    pub name: String,
    pub currents: Vec<Affine>,
    pub letters: Vec<Letter>,
    pub pendant: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fragment {
    pub group: Affine,
    pub case: u32,
    pub from: i64,
    pub ladder: Option<LadderSpec>,
    pub vertices: Vec<FragmentVertex>,
}

pub fn parse_fragment(text: &str) -> Result<Fragment, ParseError> {
    let mut group = None;
    let mut case = None;
    let mut from = 1;
    let mut ladder = None;
    let mut vertices = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        let toks: Vec<(usize, &str)> = tokens(line).collect();
        let Some(&(_, first)) = toks.first() else { continue };
        let err = |i: usize, msg: String| {
            ParseError::new(Span::new(no + 1, toks.get(i).map_or(line.len(), |t| t.0) + 1), msg)
        };
        let word = |i: usize| toks.get(i).map(|t| t.1).ok_or_else(|| err(i, "line ends early".into()));
        let affine = |i: usize| -> Result<Affine, ParseError> { word(i)?.parse().map_err(|e| err(i, e)) };
        let keyword = |i: usize, k: &str| -> Result<(), ParseError> {
            if word(i)? == k {
                Ok(())
            } else {
                Err(err(i, format!("expected `{k}`")))
            }
        };
        match first {
            "group" => group = Some(affine(1)?),
            "case" => case = Some(word(1)?.parse().map_err(|_| err(1, "expected a case number".into()))?),
            "from" => from = word(1)?.parse().map_err(|_| err(1, "expected an integer".into()))?,
            "ladder" => {
                keyword(1, "top")?;
                keyword(3, "bottom")?;
                keyword(5, "rungs")?;
                let mut reverse = [false; 4];
                if toks.len() > 8 {
                    keyword(8, "reverse")?;
                    for (i, &(_, class)) in toks.iter().enumerate().skip(9) {
                        let slot = match class {
                            "even-bottom" => 0,
                            "even-top" => 1,
                            "odd-bottom" => 2,
                            "odd-top" => 3,
                            other => return Err(err(i, format!("unknown rail class `{other}`"))),
                        };
                        reverse[slot] = true;
                    }
                }
                ladder = Some(LadderSpec {
                    top: affine(2)?,
                    bottom: affine(4)?,
                    first_rung: affine(6)?,
                    last_rung: affine(7)?,
                    reverse,
                });
            }
            "vertex" | "pendant" => {
                let name = word(1)?.to_string();
                if first == "pendant" {
                    vertices.push(FragmentVertex { name, currents: Vec::new(), letters: Vec::new(), pendant: true });
                    continue;
                }
                let open = line.find('(').ok_or_else(|| err(2, "expected `(`".into()))?;
                let close = line.find(')').ok_or_else(|| err(toks.len(), "expected `)`".into()))?;
                let mut currents = Vec::new();
                for (off, tok) in tokens(&line[open + 1..close]) {
                    let at = Span::new(no + 1, open + 2 + off);
                    currents.push(tok.parse().map_err(|e| ParseError::new(at, e))?);
                }
                let rest: Vec<(usize, &str)> = tokens(&line[close + 1..]).collect();
                let letters = match rest.as_slice() {
                    [] => Vec::new(),
                    [(_, "label"), (off, l)] => l
                        .chars()
                        .map(|c| c.to_string().parse::<Letter>())
                        .collect::<Result<_, _>>()
                        .map_err(|e| ParseError::new(Span::new(no + 1, close + 2 + off), e))?,
                    _ => return Err(ParseError::new(Span::new(no + 1, close + 2), "expected `label <letters>`".into())),
                };
                vertices.push(FragmentVertex { name, currents, letters, pendant: false });
            }
            other => return Err(err(0, format!("unknown directive `{other}`"))),
        }
    }
    let whole = |m: &str| ParseError::new(Span::new(0, 0), m.to_string());
    Ok(Fragment {
        group: group.ok_or_else(|| whole("missing `group` line"))?,
        case: case.ok_or_else(|| whole("missing `case` line"))?,
        from,
        ladder,
        vertices,
    })
}
