//! Acceptance criteria. Each test prints one `CRITERION <k> PASS|FAIL` line
//! and fails if the criterion does.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::collections::{HashMap, HashSet};
use std::process::Command;
use std::time::{Duration, Instant};

use embedkit::current::parse_current_graph;
use embedkit::derived::derive;
use embedkit::families::{build, parameters, Case};
use embedkit::pipelines::{sweep, PipelineResult, RunOptions};
use embedkit::surface::{face_of, EmbeddedGraph, Letter, VertexId};
use proptest::strategy::{BoxedStrategy, Strategy};
use proptest::test_runner::{Config, TestRunner};

const Z18: &str = include_str!("../../core/data/case2_s1.cg");

const LOG: &str = "9 6 13 u 2 y 16 v 8 c 4 7 12 3 14 b 1 x 17 a 10 w 5 11 15";

/// Rotations at vertices 0 to 4 of the derived embedding of the Z_18 example.
const ROWS: [&str; 5] = [
    "0. (9 6 13 u 2 y0 16 v 8 c 4 7 12 3 14 b 1 x 17 a 10 w 5 11 15)",
    "1. (10 7 14 v 3 y1 17 w 9 a 5 8 13 4 15 c 2 x 0 b 11 u 6 12 16)",
    "2. (11 8 15 w 4 y0 0 u 10 b 6 9 14 5 16 a 3 x 1 c 12 v 7 13 17)",
    "3. (12 9 16 u 5 y1 1 v 11 c 7 10 15 6 17 b 4 x 2 a 13 w 8 14 0)",
    "4. (13 10 17 v 6 y0 2 w 12 a 8 11 16 7 0 c 5 x 3 b 14 u 9 15 1)",
];

fn report(k: u32, pass: bool, detail: &str) {
    println!("CRITERION {k} {} {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {k}: {detail}");
}

fn embedkit(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_embedkit")).args(args).output().expect("binary runs");
    assert!(out.status.success(), "embedkit {args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn target_genus(n: u64) -> u64 {
    ((n - 3) * (n - 4)).div_ceil(12)
}

/// Facts about an embedding computed from its rotation lists alone.
struct Scan {
    vertices: usize,
    edges: usize,
    faces: usize,
    face_lengths: HashSet<usize>,
    simple: bool,
    missing: Vec<(String, String)>,
}

impl Scan {
    fn genus(&self) -> i64 {
        (2 - self.vertices as i64 + self.edges as i64 - self.faces as i64) / 2
    }
}

fn scan(g: &EmbeddedGraph) -> Scan {
    let rot: HashMap<String, Vec<String>> = g
        .labels()
        .iter()
        .map(|v| (v.to_string(), g.rotation_labels(v).unwrap().iter().map(ToString::to_string).collect()))
        .collect();
    let simple = rot.iter().all(|(v, ns)| ns.len() == ns.iter().collect::<HashSet<_>>().len() && !ns.contains(v));
    let edges = rot.values().map(Vec::len).sum::<usize>() / 2;
    let mut names: Vec<&String> = rot.keys().collect();
    names.sort();
    let mut missing = Vec::new();
    for (i, u) in names.iter().enumerate() {
        for v in &names[i + 1..] {
            if !rot[*u].contains(*v) {
                missing.push(((*u).clone(), (*v).clone()));
            }
        }
    }
    // next(u -> v) = v -> (the neighbor after u in the rotation at v)
    let mut used: HashSet<(String, String)> = HashSet::new();
    let mut faces = 0;
    let mut face_lengths = HashSet::new();
    if simple {
        for (u, ns) in &rot {
            for v in ns {
                if used.contains(&(u.clone(), v.clone())) {
                    continue;
                }
                faces += 1;
                let mut len = 0;
                let (mut a, mut b) = (u.clone(), v.clone());
                while used.insert((a.clone(), b.clone())) {
                    len += 1;
                    let around = &rot[&b];
                    let at = around.iter().position(|w| *w == a).unwrap();
                    let next = around[(at + 1) % around.len()].clone();
                    (a, b) = (b, next);
                }
                face_lengths.insert(len);
            }
        }
    }
    Scan { vertices: rot.len(), edges, faces, face_lengths, simple, missing }
}

fn cyclic_match(got: &str, want: &str) -> bool {
    let g: Vec<&str> = got.split_whitespace().collect();
    let w: Vec<&str> = want.split_whitespace().collect();
    g.len() == w.len() && (0..g.len()).any(|k| g[k..].iter().chain(&g[..k]).eq(w.iter()))
}

#[test]
fn criterion_1_log_reproduction() {
    let dir = tempfile::TempDir::new().unwrap();
    let path = dir.path().join("case2_s1.cg");
    let t = Instant::now();
    embedkit(&["construct", "--case", "2", "--s", "1", "-o", path.to_str().unwrap()]);
    let log = embedkit(&["log", path.to_str().unwrap()]);
    let took = t.elapsed();
    let pass = cyclic_match(log.trim(), LOG) && took < Duration::from_secs(1);
    report(1, pass, &format!("log `{}` in {took:.2?}", log.trim()));
}

#[test]
fn criterion_2_derived_rotations() {
    let dir = tempfile::TempDir::new().unwrap();
    let path = dir.path().join("case2_s1.cg");
    std::fs::write(&path, Z18).unwrap();
    let t = Instant::now();
    let rot = embedkit(&["derive", path.to_str().unwrap()]);
    let took = t.elapsed();
    let lines: Vec<&str> = rot.lines().collect();
    let wrong: Vec<&str> = ROWS.iter().filter(|r| !lines.contains(r)).copied().collect();
    let pass = wrong.is_empty() && took < Duration::from_secs(1);
    report(2, pass, &format!("rows 0-4, {} differ, in {took:.2?}", wrong.len()));
}

/// Checks a finished family member against the scan oracle. Returns the
/// derived embedding's genus alongside any complaint.
fn audit(case: Case, s: u32, r: &PipelineResult) -> Result<i64, String> {
    let n = case.order(s);
    let fin = scan(&r.final_graph);
    if !fin.simple || fin.vertices as u64 != n || !fin.missing.is_empty() {
        return Err(format!("s={s}: final graph is not a simple K_{n} ({} missing)", fin.missing.len()));
    }
    if fin.genus() != target_genus(n) as i64 {
        return Err(format!("s={s}: genus {} != {}", fin.genus(), target_genus(n)));
    }
    let d = derive(&build(case, s).unwrap()).unwrap();
    let der = scan(&d.emb);
    if der.face_lengths != HashSet::from([3]) {
        return Err(format!("s={s}: derived embedding is not triangular"));
    }
    Ok(der.genus())
}

#[test]
fn criterion_3_case11_sweep() {
    let t = Instant::now();
    let runs = sweep(Case::Eleven, 2, 25, RunOptions::default()).unwrap();
    let took = t.elapsed();
    let mut problems = Vec::new();
    for (s, run) in &runs {
        let r = match run {
            Ok(r) => r,
            Err(e) => {
                problems.push(format!("s={s}: {e}"));
                continue;
            }
        };
        match audit(Case::Eleven, *s, r) {
            Ok(derived) => {
                let n = Case::Eleven.order(*s);
                let d = derive(&build(Case::Eleven, *s).unwrap()).unwrap();
                let sc = scan(&d.emb);
                let letters: Vec<_> = sc.missing.iter().filter(|(a, b)| a.parse::<u32>().is_err() && b.parse::<u32>().is_err()).collect();
                if sc.vertices as u64 != n || sc.missing.len() != 10 || letters.len() != 10 {
                    problems.push(format!("s={s}: derived graph is not K_{n} - K_5"));
                }
                if derived + 2 != target_genus(n) as i64 {
                    problems.push(format!("s={s}: derived genus {derived} is not 2 below the final genus"));
                }
            }
            Err(e) => problems.push(e),
        }
    }
    let pass = problems.is_empty() && runs.len() == 24 && took < Duration::from_secs(60);
    report(3, pass, &format!("s=2..25 in {took:.2?} {problems:?}"));
}

#[test]
fn criterion_4_case2_sweep() {
    let t = Instant::now();
    let runs = sweep(Case::Two, 1, 25, RunOptions::default()).unwrap();
    let took = t.elapsed();
    let mut problems = Vec::new();
    for (s, run) in &runs {
        match run {
            Ok(r) => {
                if let Err(e) = audit(Case::Two, *s, r) {
                    problems.push(e);
                }
            }
            Err(e) => problems.push(format!("s={s}: {e}")),
        }
    }
    let pass = problems.is_empty() && runs.len() == 25 && took < Duration::from_secs(60);
    report(4, pass, &format!("s=1..25 in {took:.2?} {problems:?}"));
}

#[test]
fn criterion_5_cascade_anchors() {
    let a = VertexId::Lettered(Letter::A);
    let y = VertexId::Lettered(Letter::Y);
    let same = |p: (VertexId, VertexId), q: (VertexId, VertexId)| p == q || p == (q.1, q.0);
    let mut problems = Vec::new();
    let mut at_two = String::new();
    for (s, run) in sweep(Case::Eleven, 2, 25, RunOptions::default()).unwrap() {
        let r = match run {
            Ok(r) => r,
            Err(e) => {
                problems.push(format!("s={s}: {e}"));
                continue;
            }
        };
        let p = r.params;
        let minus_eps = VertexId::Numbered(p.modulus - p.epsilon);
        let cascades: Vec<_> = r.steps.iter().filter(|st| st.flips.len() > 1 || st.text.starts_with("cascade")).collect();
        let first = r.steps.iter().find(|st| st.text.starts_with("cascade"));
        let last = r.steps.iter().find(|st| st.text.starts_with("chord-cascade"));
        match (first, last) {
            (Some(f), Some(l)) => {
                let fa = f.flips.last().unwrap().added;
                let la = l.flips.last().unwrap().added;
                if !same(fa, (a, y)) {
                    problems.push(format!("s={s}: first cascade ends with ({}, {})", fa.0, fa.1));
                }
                if !same(la, (VertexId::Numbered(0), minus_eps)) {
                    problems.push(format!("s={s}: second cascade ends with ({}, {})", la.0, la.1));
                }
                let gamma = VertexId::Numbered(p.gamma);
                let b = VertexId::Lettered(Letter::B);
                if !same(f.flips[0].removed, (gamma, b)) {
                    problems.push(format!("s={s}: first cascade does not start at (gamma, b)"));
                }
                let x = VertexId::Lettered(Letter::X);
                let minus_gamma = VertexId::Numbered(p.modulus - p.gamma);
                if !same(l.flips[0].removed, (minus_gamma, x)) {
                    problems.push(format!("s={s}: second cascade does not start at (-gamma, x)"));
                }
                if s == 2 {
                    at_two = format!("s=2 flips {}+{}", f.flips.len(), l.flips.len());
                }
            }
            _ => problems.push(format!("s={s}: {} cascades", cascades.len())),
        }
    }
    report(5, problems.is_empty() && !at_two.is_empty(), &format!("{at_two} {problems:?}"));
}

#[test]
fn criterion_6_triangle_location() {
    let mut found = Vec::new();
    let mut wrong = Vec::new();
    for s in 1..=25u32 {
        let p = parameters(Case::Two, s).unwrap();
        let d = derive(&build(Case::Two, s).unwrap()).unwrap();
        let g = &d.emb;
        let m = p.modulus;
        let minus_gamma = VertexId::Numbered(m - p.gamma);
        let delta = VertexId::Numbered(p.delta);
        // the face [v, -gamma, delta] contains the dart -gamma -> delta
        let dart = g.find_dart(&minus_gamma, &delta).unwrap();
        let face = face_of(g, dart);
        let apex = (face.len() == 3).then(|| g.head_label(g.face_next(dart)));
        let want = if s == 1 { VertexId::Lettered(Letter::C) } else { VertexId::Numbered((9 * s + 10) % m) };
        if apex != Some(want) {
            wrong.push(format!("s={s}: apex {} expected {want}", apex.map_or("none".into(), |v| v.to_string())));
        }
        if s <= 3 {
            found.push(format!("s={s}:{}", apex.map_or("none".into(), |v| v.to_string())));
        }
    }
    report(6, wrong.is_empty(), &format!("{} {wrong:?}", found.join(" ")));
}

#[test]
fn criterion_7_property_suites() {
    const CASES: u32 = 10_000;
    type Check = fn(&support::Instance) -> Result<(), proptest::test_runner::TestCaseError>;
    let checks: [(&str, Check, bool); 6] = [
        ("dart partition", support::dart_partition, false),
        ("even Euler characteristic", support::even_euler, false),
        ("flip involution", support::flip_involution, true),
        ("chord keeps genus", support::chord_keeps_genus, false),
        ("bridge adds a handle", support::bridge_adds_handle, false),
        ("cascade terminates", support::cascade_terminates, true),
    ];
    let suite = |strategy: BoxedStrategy<support::Instance>, check: Check| {
        TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() })
            .run(&strategy, |i| check(&i))
            .map_err(|e| e.to_string())
    };
    let t = Instant::now();
    let mut failures = Vec::new();
    for (name, check, triangulated) in checks {
        let mut outcome = suite(support::rotation_system().boxed(), check);
        if triangulated {
            outcome = outcome.and_then(|_| suite(support::triangulation().boxed(), check));
        }
        if let Err(e) = outcome {
            failures.push(format!("{name}: {e}"));
        }
    }
    let took = t.elapsed();
    let pass = failures.is_empty() && took < Duration::from_secs(30);
    report(7, pass, &format!("6 properties x {CASES} instances in {took:.2?} {failures:?}"));
}

#[test]
fn criterion_8_negative_controls() {
    let m = 18u32;
    // (line index, tail, head, current) of every edge line `id: T -> H current k`
    let edges: Vec<(usize, String, String, u32)> = Z18
        .lines()
        .enumerate()
        .filter_map(|(i, l)| {
            let t: Vec<&str> = l.split_whitespace().collect();
            match t.as_slice() {
                [_, tail, "->", head, "current", k] => Some((i, tail.to_string(), head.to_string(), k.parse().ok()?)),
                _ => None,
            }
        })
        .collect();
    let mut checked = 0;
    let mut problems = Vec::new();
    for (k, (line, _, _, cur)) in edges.iter().enumerate() {
        for delta in [1, m - 1] {
            let new = (cur + delta) % m;
            let text: String = Z18
                .lines()
                .enumerate()
                .map(|(i, l)| if i == *line { l.replace(&format!("current {cur}"), &format!("current {new}")) } else { l.to_string() })
                .collect::<Vec<_>>()
                .join("\n");
            checked += 1;
            let cg = parse_current_graph(&text).unwrap();
            let report = cg.check_principles();
            if report.all_pass() {
                problems.push(format!("edge {k} {cur}->{new} accepted"));
                continue;
            }
            // Oracle for the log: every edge contributes both of its currents,
            // except an edge to the pendant vertex carrying the order-2
            // element, which is recorded once.
            let currents: Vec<(&str, u32)> =
                edges.iter().enumerate().map(|(j, (_, _, h, c))| (h.as_str(), if j == k { new } else { *c })).collect();
            let mut count = vec![0u32; m as usize];
            for &(h, c) in &currents {
                count[c as usize] += 1;
                if !(h == "H" && c == m / 2) {
                    count[((m - c) % m) as usize] += 1;
                }
            }
            let dup: Vec<u32> = (1..m).filter(|&c| count[c as usize] > 1).collect();
            let miss: Vec<u32> = (1..m).filter(|&c| count[c as usize] == 0).collect();
            let got = report.results[1].witness.as_ref().map(ToString::to_string);
            let mut want = format!("duplicate [{}] missing [{}]", join(&dup), join(&miss));
            if count[0] > 0 {
                want += " zero current";
            }
            if got.as_deref() != Some(want.as_str()) {
                problems.push(format!("edge {k} {cur}->{new}: C2 witness {got:?}, expected {want}"));
            }
            // the order-2 element must sit on exactly one edge, the pendant one
            let carriers: Vec<&str> = currents.iter().filter(|(_, c)| *c == m / 2).map(|(h, _)| *h).collect();
            let c3_holds = carriers == ["H"];
            if report.results[2].witness.is_none() != c3_holds {
                problems.push(format!("edge {k} {cur}->{new}: C3 verdict disagrees with {carriers:?}"));
            }
        }
    }
    report(8, problems.is_empty(), &format!("{checked} perturbations (the fixture has {} edges) {problems:?}", edges.len()));
}

fn join(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}
