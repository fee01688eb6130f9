//! Built-in example problems with their expected outcomes.

use serde::Serialize;
use serde_json::{json, Value};

use crate::cli::{execute, Command, Options, Outcome};
use crate::error::{Error, Result};
use crate::problem::ProblemFile;

#[derive(Debug, Clone)]
pub struct GalleryCase {
    pub label: &'static str,
    pub command: Command,
    pub weak: bool,
    pub file: ProblemFile,
    /// Expected outcome label.
    pub expected: &'static str,
}

#[derive(Debug, Clone)]
pub struct GalleryEntry {
    pub name: &'static str,
    pub summary: &'static str,
    /// The first case decides the exit status of `examples run`.
    pub cases: Vec<GalleryCase>,
}

pub const NAMES: [&str; 9] = [
    "saddle-x2-y2",
    "saddle-x2-y3",
    "sin-inv-x",
    "x3-sin-inv-x",
    "arctan-sector",
    "vector-2x-x",
    "vector-pair-saddle",
    "cardioid-tangent",
    "set-curve-halfplane",
];

fn file(v: Value) -> ProblemFile {
    serde_json::from_value(v).expect("gallery problems are well formed")
}

fn case(label: &'static str, command: Command, expected: &'static str, v: Value) -> GalleryCase {
    GalleryCase {
        label,
        command,
        weak: false,
        file: file(v),
        expected,
    }
}

fn scalar(name: &str, dim: usize, l: Value) -> Value {
    json!({
        "dim": dim,
        "objective": {"builtin": {"name": name}},
        "l": l,
        "point": vec![0.0; dim],
    })
}

const X_AXIS: [[f64; 2]; 2] = [[1.0, 0.0], [-1.0, 0.0]];
const PI: f64 = std::f64::consts::PI;

fn cardioid() -> Value {
    json!({
        "kind": "curve",
        "x": "-2*cos(x0) + cos(2*x0) + 1",
        "y": "2*sin(x0) - sin(2*x0)",
        "t_start": 0.0,
        "t_end": 2.0 * PI,
        "segments": 4096,
        "cluster_at": [0.0],
    })
}

fn curve_halfplane() -> Value {
    json!({
        "kind": "union",
        "sets": [
            {"kind": "polyhedron", "rows": [[1.0, 1.0]], "offsets": [0.0]},
            {"kind": "intersection", "sets": [
                {
                    "kind": "curve",
                    "x": "2 + 2*cos(x0)*(1 - sin(x0))",
                    "y": "sin(x0)*(1 - cos(x0))",
                    "t_start": 0.0,
                    "t_end": 2.0 * PI,
                    "segments": 4096,
                    "cluster_at": [PI],
                },
                {"kind": "polyhedron", "rows": [[-1.0, -1.0]], "offsets": [0.0]},
            ]},
        ],
    })
}

pub fn entries() -> Vec<GalleryEntry> {
    use Command::{Certify, CertifySet, Tangent};
    let vec2x = |l: Value| {
        json!({
            "dim": 1,
            "objective": {"builtin": {"name": "vector-2x-x"}},
            "k": [[0.0, 1.0], [1.0, -1.0]],
            "l": l,
            "point": [0.0],
        })
    };
    let pair = |l: Value| {
        json!({
            "dim": 2,
            "objective": {"builtin": {"name": "vector-pair-saddle"}},
            "l": l,
            "point": [0.0, 0.0],
        })
    };
    let sector = |l: Value| {
        json!({
            "dim": 2,
            "objective": {"builtin": {"name": "arctan-sector", "theta1": PI / 6.0, "theta2": PI / 3.0}},
            "l": l,
            "point": [0.0, 0.0],
        })
    };
    let tangent = |l: Value| {
        json!({
            "dim": 2,
            "set": cardioid(),
            "l": l,
            "direction": [-1.0, 0.0],
            "point": [0.0, 0.0],
        })
    };
    let set_min = |l: Value| {
        json!({
            "dim": 2,
            "set": curve_halfplane(),
            "l": l,
            "point": [0.0, 0.0],
        })
    };
    vec![
        GalleryEntry {
            name: "saddle-x2-y2",
            summary: "x² − y² at the origin: minimal along the x-axis, not overall",
            cases: vec![
                case("x-axis", Certify, "certified_on_grid", scalar("saddle-x2-y2", 2, json!({"finite": X_AXIS}))),
                case("full-circle", Certify, "refuted", scalar("saddle-x2-y2", 2, json!("full_sphere"))),
            ],
        },
        GalleryEntry {
            name: "saddle-x2-y3",
            summary: "x² − y³ at the origin: minimal along the x-axis and along (0, −1)",
            cases: vec![
                case("x-axis", Certify, "certified_on_grid", scalar("saddle-x2-y3", 2, json!({"finite": X_AXIS}))),
                case("down", Certify, "certified_on_grid", scalar("saddle-x2-y3", 2, json!({"finite": [[0.0, -1.0]]}))),
            ],
        },
        GalleryEntry {
            name: "sin-inv-x",
            summary: "sin(1/x) at 0: not minimal in either direction",
            cases: vec![
                case("right", Certify, "refuted", scalar("sin-inv-x", 1, json!({"finite": [[1.0]]}))),
                case("left", Certify, "refuted", scalar("sin-inv-x", 1, json!({"finite": [[-1.0]]}))),
            ],
        },
        GalleryEntry {
            name: "x3-sin-inv-x",
            summary: "x³ sin(1/x) at 0: differentiable with zero derivative, not minimal",
            cases: vec![
                case("right", Certify, "refuted", scalar("x3-sin-inv-x", 1, json!({"finite": [[1.0]]}))),
                case("left", Certify, "refuted", scalar("x3-sin-inv-x", 1, json!({"finite": [[-1.0]]}))),
            ],
        },
        GalleryEntry {
            name: "arctan-sector",
            summary: "angular sector function: minimal along the sector arc between π/6 and π/3",
            cases: vec![
                case(
                    "sector-arc",
                    Certify,
                    "certified_on_grid",
                    sector(json!({"arc": {"from": PI / 6.0, "to": PI / 3.0, "count": 128}})),
                ),
                case("full-circle", Certify, "refuted", sector(json!("full_sphere"))),
            ],
        },
        GalleryEntry {
            name: "vector-2x-x",
            summary: "(2x, x) under the cone spanned by (1,0) and (1,1): minimal to the right only",
            cases: vec![
                case("right", Certify, "certified_on_grid", vec2x(json!({"finite": [[1.0]]}))),
                case("both", Certify, "refuted", vec2x(json!({"finite": [[-1.0], [1.0]]}))),
            ],
        },
        GalleryEntry {
            name: "vector-pair-saddle",
            summary: "(x² − y², x² − y³) under the orthant: minimal along (1, 0)",
            cases: vec![
                case("right", Certify, "certified_on_grid", pair(json!({"finite": [[1.0, 0.0]]}))),
                case("full-circle", Certify, "refuted", pair(json!("full_sphere"))),
            ],
        },
        GalleryEntry {
            name: "cardioid-tangent",
            summary: "cardioid cusp: (−1, 0) is tangent, but not through the cone it spans",
            cases: vec![
                case("restricted", Tangent, "nonmember", tangent(json!({"finite": [[-1.0, 0.0]]}))),
                case("unrestricted", Tangent, "member", tangent(json!("full_sphere"))),
            ],
        },
        GalleryEntry {
            name: "set-curve-halfplane",
            summary: "half-plane joined with a curve lobe: minimal through a narrow arc, not overall",
            cases: vec![
                case(
                    "arc",
                    CertifySet,
                    "certified_on_grid",
                    set_min(json!({"arc": {"from": PI, "to": 1.25 * PI, "count": 64, "open": true}})),
                ),
                case("full-circle", CertifySet, "refuted", set_min(json!("full_sphere"))),
            ],
        },
    ]
}

pub fn entry(name: &str) -> Option<GalleryEntry> {
    entries().into_iter().find(|e| e.name == name)
}

#[derive(Debug, Serialize)]
struct CaseResult<'a> {
    label: &'a str,
    command: &'a str,
    weak: bool,
    problem: &'a ProblemFile,
    expected: &'a str,
    outcome: String,
    matches_expected: bool,
    result: Value,
}

/// Runs every case of the named entry. The report lists all cases; the
/// outcome, exit class and plots come from the first one.
pub fn run(name: &str, opts: &Options) -> Result<Outcome> {
    let e = entry(name).ok_or_else(|| {
        Error::Invalid(format!("unknown example '{name}'; try `examples list`"))
    })?;
    let mut results = Vec::new();
    let mut primary: Option<Outcome> = None;
    for c in &e.cases {
        let o = Options {
            weak: opts.weak || c.weak,
            ..opts.clone()
        };
        let out = execute(c.command, &c.file, &o)?;
        results.push(serde_json::to_value(CaseResult {
            label: c.label,
            command: c.command.name(),
            weak: o.weak,
            problem: &c.file,
            expected: c.expected,
            outcome: out.label.clone(),
            matches_expected: out.label == c.expected,
            result: out.result.clone(),
        })?);
        primary.get_or_insert(out);
    }
    let p = primary.expect("gallery entries have cases");
    Ok(Outcome {
        command: "examples".into(),
        label: p.label,
        class: p.class,
        result: json!({ "name": e.name, "summary": e.summary, "cases": results }),
        points: p.points,
        svg: p.svg,
    })
}

/// The whole gallery as one JSON document, in `NAMES` order.
pub fn run_all(opts: &Options) -> Result<String> {
    let mut docs = Vec::new();
    for name in NAMES {
        docs.push(run(name, opts)?.report_json()?);
    }
    Ok(docs.concat())
}
