//! Report envelopes and file output (JSON, CSV point dumps, SVG).

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

/// Serializes non-finite floats as the strings `"+inf"`, `"-inf"`, `"nan"`.
pub mod inf_f64 {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("+inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "+inf" | "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(de::Error::custom(format!("expected a number, got '{other}'"))),
            },
        }
    }
}

/// Top-level JSON document written for every command.
#[derive(Debug, Clone, Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub schema_version: u32,
    pub command: &'a str,
    pub outcome: &'a str,
    pub result: &'a T,
}

pub fn to_json<T: Serialize>(command: &str, outcome: &str, result: &T) -> Result<String> {
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        command,
        outcome,
        result,
    };
    let mut s = serde_json::to_string_pretty(&env)?;
    s.push('\n');
    Ok(s)
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, text)?;
    Ok(path)
}

/// CSV with a header row; floats use Rust's shortest round-trip format.
pub fn points_csv(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        let line: Vec<String> = r.iter().map(|v| format!("{v}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Minimal 2-D scatter/outline plot.
#[derive(Debug, Default)]
pub struct Svg {
    polylines: Vec<(Vec<[f64; 2]>, &'static str)>,
    points: Vec<([f64; 2], &'static str)>,
}

impl Svg {
    pub fn polyline(&mut self, pts: Vec<[f64; 2]>, color: &'static str) {
        if pts.len() >= 2 {
            self.polylines.push((pts, color));
        }
    }

    pub fn point(&mut self, p: [f64; 2], color: &'static str) {
        self.points.push((p, color));
    }

    pub fn render(&self) -> String {
        let all = self
            .polylines
            .iter()
            .flat_map(|(p, _)| p.iter())
            .chain(self.points.iter().map(|(p, _)| p));
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for p in all {
            x0 = x0.min(p[0]);
            x1 = x1.max(p[0]);
            y0 = y0.min(p[1]);
            y1 = y1.max(p[1]);
        }
        if !x0.is_finite() {
            (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
        }
        let span = (x1 - x0).max(y1 - y0).max(1e-12);
        let size = 480.0;
        let pad = 16.0;
        let scale = (size - 2.0 * pad) / span;
        let map = |p: &[f64; 2]| (pad + (p[0] - x0) * scale, size - pad - (p[1] - y0) * scale);
        let mut s = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n"
        );
        s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        for (pts, color) in &self.polylines {
            let coords: Vec<String> = pts
                .iter()
                .map(|p| {
                    let (x, y) = map(p);
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            s.push_str(&format!(
                "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1\" points=\"{}\"/>\n",
                coords.join(" ")
            ));
        }
        for (p, color) in &self.points {
            let (x, y) = map(p);
            s.push_str(&format!("<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"1.5\" fill=\"{color}\"/>\n"));
        }
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, serde::Deserialize, PartialEq, Debug)]
    struct Wrap {
        #[serde(with = "inf_f64")]
        v: f64,
    }

    #[test]
    fn infinite_values_round_trip() {
        let s = serde_json::to_string(&Wrap { v: f64::INFINITY }).unwrap();
        assert_eq!(s, r#"{"v":"+inf"}"#);
        let w: Wrap = serde_json::from_str(&s).unwrap();
        assert_eq!(w.v, f64::INFINITY);
        let w: Wrap = serde_json::from_str(r#"{"v":2.5}"#).unwrap();
        assert_eq!(w.v, 2.5);
        assert!(serde_json::from_str::<Wrap>(r#"{"v":"big"}"#).is_err());
    }

    #[test]
    fn csv_and_svg_render() {
        let csv = points_csv(&["x", "y"], &[vec![1.0, 0.5]]);
        assert_eq!(csv, "x,y\n1,0.5\n");
        let mut svg = Svg::default();
        svg.polyline(vec![[0.0, 0.0], [1.0, 1.0]], "black");
        svg.point([0.5, 0.5], "red");
        let out = svg.render();
        assert!(out.starts_with("<svg") && out.contains("circle") && out.contains("polyline"));
    }
}
