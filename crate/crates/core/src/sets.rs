//! Membership oracles for the sets `A`, `M`, `D`, `E` and constraint regions.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::expr::Expression;
use crate::geometry::{Vector, TOL};
use crate::multipliers::lp::{lp_feasible, LpProblem};

/// `{x : a_i·x ≥ b_i}` with a stored feasible point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolyhedronData", into = "PolyhedronData")]
pub struct PolyhedralSet {
    dim: usize,
    rows: Vec<Vector>,
    offsets: Vec<f64>,
    witness: Vector,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyhedronData {
    pub rows: Vec<Vec<f64>>,
    pub offsets: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
}

impl TryFrom<PolyhedronData> for PolyhedralSet {
    type Error = Error;
    fn try_from(d: PolyhedronData) -> Result<Self> {
        let dim = match (d.dim, d.rows.first()) {
            (Some(n), _) => n,
            (None, Some(r)) => r.len(),
            (None, None) => {
                return Err(Error::Invalid(
                    "polyhedron without rows needs an explicit dim".into(),
                ))
            }
        };
        let rows = d
            .rows
            .into_iter()
            .map(Vector::new)
            .collect::<Result<Vec<_>>>()?;
        PolyhedralSet::new(dim, rows, d.offsets)
    }
}

impl From<PolyhedralSet> for PolyhedronData {
    fn from(p: PolyhedralSet) -> Self {
        PolyhedronData {
            dim: p.rows.is_empty().then_some(p.dim),
            rows: p.rows.into_iter().map(Vector::into_vec).collect(),
            offsets: p.offsets,
        }
    }
}

impl PolyhedralSet {
    /// Fails if the inequalities have no common solution.
    pub fn new(dim: usize, rows: Vec<Vector>, offsets: Vec<f64>) -> Result<Self> {
        check_dim(rows.len(), offsets.len())?;
        for r in &rows {
            check_dim(dim, r.dim())?;
            if r.is_zero(0.0) {
                return Err(Error::ZeroVector);
            }
        }
        if offsets.iter().any(|b| !b.is_finite()) {
            return Err(Error::NonFinite("polyhedron offsets".into()));
        }
        let mut lp = LpProblem::new(dim);
        for (r, b) in rows.iter().zip(&offsets) {
            lp.geq(r.as_slice().to_vec(), *b);
        }
        let witness = lp_feasible(&lp)?
            .ok_or_else(|| Error::Invalid("polyhedron is empty".into()))?;
        Ok(PolyhedralSet {
            dim,
            rows,
            offsets,
            witness,
        })
    }

    pub fn whole_space(dim: usize) -> Self {
        PolyhedralSet {
            dim,
            rows: Vec::new(),
            offsets: Vec::new(),
            witness: Vector::zeros(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn witness(&self) -> &Vector {
        &self.witness
    }

    pub fn contains(&self, x: &Vector) -> Result<bool> {
        check_dim(self.dim, x.dim())?;
        Ok(self
            .rows
            .iter()
            .zip(&self.offsets)
            .all(|(a, b)| a.dot(x) >= b - TOL))
    }

    /// Indices with `a_i·x = b_i` within `tol`.
    pub fn active(&self, x: &Vector, tol: f64) -> Result<Vec<usize>> {
        check_dim(self.dim, x.dim())?;
        Ok(self
            .rows
            .iter()
            .zip(&self.offsets)
            .enumerate()
            .filter(|(_, (a, b))| (a.dot(x) - *b).abs() <= tol)
            .map(|(i, _)| i)
            .collect())
    }

    pub fn intersect(&self, other: &PolyhedralSet) -> Result<PolyhedralSet> {
        check_dim(self.dim, other.dim)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        let mut offsets = self.offsets.clone();
        offsets.extend(other.offsets.iter().copied());
        PolyhedralSet::new(self.dim, rows, offsets)
    }
}

/// Serializable description of a set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetSpec {
    Polyhedron(PolyhedralSet),
    /// Closed region bounded by a simple polygon in the plane.
    Polygon { vertices: Vec<[f64; 2]> },
    /// Closed region bounded by the closed curve `t ↦ (x(t), y(t))` on
    /// `[t_start, t_end]`, where `x0` stands for `t`. The boundary is
    /// approximated by a polygon with about `segments` vertices, refined
    /// geometrically around the parameters in `cluster_at`.
    Curve {
        x: Expression,
        y: Expression,
        t_start: f64,
        t_end: f64,
        segments: usize,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        cluster_at: Vec<f64>,
    },
    Ball { center: Vec<f64>, radius: f64 },
    /// `{x : g(x) ≤ 0}`
    Implicit { dim: usize, expr: Expression },
    Union { sets: Vec<SetSpec> },
    Intersection { sets: Vec<SetSpec> },
    WholeSpace { dim: usize },
}

impl SetSpec {
    pub fn dim(&self) -> usize {
        match self {
            SetSpec::Polyhedron(p) => p.dim(),
            SetSpec::Polygon { .. } | SetSpec::Curve { .. } => 2,
            SetSpec::Ball { center, .. } => center.len(),
            SetSpec::Implicit { dim, .. } | SetSpec::WholeSpace { dim } => *dim,
            SetSpec::Union { sets } | SetSpec::Intersection { sets } => {
                sets.first().map_or(0, SetSpec::dim)
            }
        }
    }

    pub fn as_polyhedron(&self) -> Option<PolyhedralSet> {
        match self {
            SetSpec::Polyhedron(p) => Some(p.clone()),
            SetSpec::WholeSpace { dim } => Some(PolyhedralSet::whole_space(*dim)),
            _ => None,
        }
    }

    /// Builds the membership oracle (polygonizing curves once).
    pub fn compile(&self) -> Result<SetOracle> {
        Ok(match self {
            SetSpec::Polyhedron(p) => SetOracle::Polyhedron(p.clone()),
            SetSpec::Polygon { vertices } => SetOracle::Polygon(Polygon::new(vertices.clone())?),
            SetSpec::Curve {
                x,
                y,
                t_start,
                t_end,
                segments,
                cluster_at,
            } => {
                let ts = curve_parameters(*t_start, *t_end, *segments, cluster_at)?;
                let mut verts = Vec::with_capacity(ts.len());
                for t in ts {
                    verts.push([x.eval(&[t])?, y.eval(&[t])?]);
                }
                SetOracle::Polygon(Polygon::new(verts)?)
            }
            SetSpec::Ball { center, radius } => {
                if center.is_empty() || !(*radius >= 0.0) {
                    return Err(Error::Invalid("ball needs a center and radius ≥ 0".into()));
                }
                SetOracle::Ball {
                    center: Vector::new(center.clone())?,
                    radius: *radius,
                }
            }
            SetSpec::Implicit { dim, expr } => {
                if expr.arity() > *dim {
                    return Err(Error::Invalid(format!(
                        "implicit set expression uses more than {dim} variables"
                    )));
                }
                SetOracle::Implicit {
                    dim: *dim,
                    expr: expr.clone(),
                }
            }
            SetSpec::Union { sets } | SetSpec::Intersection { sets } => {
                let parts = sets
                    .iter()
                    .map(SetSpec::compile)
                    .collect::<Result<Vec<_>>>()?;
                let dim = parts
                    .first()
                    .ok_or_else(|| Error::Invalid("union/intersection of no sets".into()))?
                    .dim();
                for p in &parts {
                    check_dim(dim, p.dim())?;
                }
                if matches!(self, SetSpec::Union { .. }) {
                    SetOracle::Union(parts)
                } else {
                    SetOracle::Intersection(parts)
                }
            }
            SetSpec::WholeSpace { dim } => SetOracle::WholeSpace(*dim),
        })
    }
}

/// Parameters for polygonizing a closed curve: a uniform base grid plus
/// geometric refinement on both sides of each clustering parameter.
fn curve_parameters(t0: f64, t1: f64, segments: usize, cluster: &[f64]) -> Result<Vec<f64>> {
    let span = t1 - t0;
    if !(span > 0.0) || segments < 3 {
        return Err(Error::Invalid(
            "curve needs t_end > t_start and at least 3 segments".into(),
        ));
    }
    let wrap = |t: f64| t0 + (t - t0).rem_euclid(span);
    let mut ts = Vec::with_capacity(segments + 1);
    if cluster.is_empty() {
        ts.extend((0..segments).map(|j| t0 + span * j as f64 / segments as f64));
        return Ok(ts);
    }
    let base = segments / 2;
    ts.extend((0..base).map(|j| t0 + span * j as f64 / base as f64));
    let per_side = ((segments - base) / (2 * cluster.len())).max(2);
    let (lo, hi) = (1e-6 * span, 0.1 * span);
    for &c in cluster {
        ts.push(wrap(c));
        for j in 0..per_side {
            let d = lo * (hi / lo).powf(j as f64 / (per_side - 1) as f64);
            ts.push(wrap(c + d));
            ts.push(wrap(c - d));
        }
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * span);
    Ok(ts)
}

/// Closed polygonal region; boundary points count as members.
///
/// Edges are bucketed into horizontal slabs between consecutive vertex
/// heights, so a query only visits the edges crossing its scanline.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<[f64; 2]>,
    bbox: [f64; 4],
    /// Sorted distinct vertex heights.
    heights: Vec<f64>,
    /// `slabs[i]`: non-horizontal edges covering `[heights[i], heights[i+1])`.
    slabs: Vec<Vec<u32>>,
    /// Horizontal edges by height index.
    flat: Vec<Vec<u32>>,
}

impl Polygon {
    pub fn new(vertices: Vec<[f64; 2]>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::Invalid("polygon needs at least 3 vertices".into()));
        }
        if vertices.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("polygon vertex".into()));
        }
        let mut bbox = [f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY];
        for v in &vertices {
            bbox[0] = bbox[0].min(v[0]);
            bbox[1] = bbox[1].max(v[0]);
            bbox[2] = bbox[2].min(v[1]);
            bbox[3] = bbox[3].max(v[1]);
        }
        let mut heights: Vec<f64> = vertices.iter().map(|v| v[1]).collect();
        heights.sort_by(f64::total_cmp);
        heights.dedup();
        let index = |y: f64| heights.partition_point(|h| *h < y);
        let n = vertices.len();
        let mut slabs = vec![Vec::new(); heights.len().saturating_sub(1)];
        let mut flat = vec![Vec::new(); heights.len()];
        for i in 0..n {
            let (a, b) = (vertices[i][1], vertices[(i + 1) % n][1]);
            if a == b {
                flat[index(a)].push(i as u32);
                continue;
            }
            let (lo, hi) = (index(a.min(b)), index(a.max(b)));
            for slab in &mut slabs[lo..hi] {
                slab.push(i as u32);
            }
        }
        Ok(Polygon {
            vertices,
            bbox,
            heights,
            slabs,
            flat,
        })
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    fn edge(&self, i: u32) -> ([f64; 2], [f64; 2]) {
        let i = i as usize;
        (self.vertices[i], self.vertices[(i + 1) % self.vertices.len()])
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        let [x, y] = p;
        let [x0, x1, y0, y1] = self.bbox;
        if x < x0 - TOL || x > x1 + TOL || y < y0 - TOL || y > y1 + TOL {
            return false;
        }
        // Slab containing y, and the one below when y is a vertex height.
        let j = self.heights.partition_point(|h| *h <= y);
        let here = j.checked_sub(1).filter(|&s| s < self.slabs.len());
        let below = (j >= 2 && self.heights[j - 1] == y).then(|| j - 2);
        let mut candidates = here
            .into_iter()
            .chain(below)
            .flat_map(|s| self.slabs[s].iter().copied());
        if candidates.any(|i| {
            let (a, b) = self.edge(i);
            on_segment(p, a, b)
        }) {
            return true;
        }
        if j >= 1
            && self.heights[j - 1] == y
            && self.flat[j - 1].iter().any(|&i| {
                let (a, b) = self.edge(i);
                on_segment(p, a, b)
            })
        {
            return true;
        }
        let Some(s) = here else {
            return false;
        };
        let mut inside = false;
        for &i in &self.slabs[s] {
            let ([ax, ay], [bx, by]) = self.edge(i);
            let xc = ax + (y - ay) * (bx - ax) / (by - ay);
            if x < xc {
                inside = !inside;
            }
        }
        inside
    }
}

fn on_segment(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> bool {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let s = if len2 > 0.0 {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let (qx, qy) = (a[0] + s * dx - p[0], a[1] + s * dy - p[1]);
    qx * qx + qy * qy <= 1e-28
}

/// Compiled membership oracle.
#[derive(Debug, Clone, PartialEq)]
pub enum SetOracle {
    Polyhedron(PolyhedralSet),
    Polygon(Polygon),
    Ball { center: Vector, radius: f64 },
    Implicit { dim: usize, expr: Expression },
    Union(Vec<SetOracle>),
    Intersection(Vec<SetOracle>),
    WholeSpace(usize),
}

impl SetOracle {
    pub fn dim(&self) -> usize {
        match self {
            SetOracle::Polyhedron(p) => p.dim(),
            SetOracle::Polygon(_) => 2,
            SetOracle::Ball { center, .. } => center.dim(),
            SetOracle::Implicit { dim, .. } | SetOracle::WholeSpace(dim) => *dim,
            SetOracle::Union(s) | SetOracle::Intersection(s) => s[0].dim(),
        }
    }

    pub fn contains(&self, x: &Vector) -> Result<bool> {
        check_dim(self.dim(), x.dim())?;
        Ok(match self {
            SetOracle::Polyhedron(p) => p.contains(x)?,
            SetOracle::Polygon(p) => p.contains([x[0], x[1]]),
            SetOracle::Ball { center, radius } => x.dist(center) <= radius + TOL,
            SetOracle::Implicit { expr, .. } => expr.eval(x.as_slice())? <= TOL,
            SetOracle::Union(parts) => {
                for p in parts {
                    if p.contains(x)? {
                        return Ok(true);
                    }
                }
                false
            }
            SetOracle::Intersection(parts) => {
                for p in parts {
                    if !p.contains(x)? {
                        return Ok(false);
                    }
                }
                true
            }
            SetOracle::WholeSpace(_) => true,
        })
    }

    /// Polygons inside this oracle, for plotting.
    pub fn polygons(&self) -> Vec<&Polygon> {
        match self {
            SetOracle::Polygon(p) => vec![p],
            SetOracle::Union(s) | SetOracle::Intersection(s) => {
                s.iter().flat_map(SetOracle::polygons).collect()
            }
            _ => Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn polyhedron_membership_and_activity() {
        let p = PolyhedralSet::new(2, vec![v(&[1.0, 0.0]), v(&[0.0, 1.0])], vec![0.0, 1.0]).unwrap();
        assert!(p.contains(&v(&[0.0, 1.0])).unwrap());
        assert!(!p.contains(&v(&[-0.1, 2.0])).unwrap());
        assert_eq!(p.active(&v(&[0.0, 3.0]), 1e-9).unwrap(), vec![0]);
        let empty = PolyhedralSet::new(1, vec![v(&[1.0]), v(&[-1.0])], vec![1.0, 0.0]);
        assert!(empty.is_err());
    }

    #[test]
    fn polyhedron_serde_round_trip() {
        let s = r#"{"kind":"polyhedron","rows":[[1.0,0.0]],"offsets":[2.0]}"#;
        let spec: SetSpec = serde_json::from_str(s).unwrap();
        assert_eq!(serde_json::to_string(&spec).unwrap(), s);
        let bad = r#"{"kind":"polyhedron","rows":[[1.0],[-1.0]],"offsets":[1.0,0.0]}"#;
        assert!(serde_json::from_str::<SetSpec>(bad).is_err());
    }

    #[test]
    fn square_polygon_is_closed() {
        let sq = Polygon::new(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert!(sq.contains([0.5, 0.5]));
        assert!(sq.contains([0.0, 0.3]));
        assert!(sq.contains([1.0, 1.0]));
        assert!(!sq.contains([1.1, 0.5]));
        assert!(!sq.contains([0.5, -1e-6]));
    }

    #[test]
    fn unit_circle_curve() {
        let spec = SetSpec::Curve {
            x: parse_expression("cos(x0)").unwrap(),
            y: parse_expression("sin(x0)").unwrap(),
            t_start: 0.0,
            t_end: 2.0 * std::f64::consts::PI,
            segments: 512,
            cluster_at: vec![0.0],
        };
        let o = spec.compile().unwrap();
        assert!(o.contains(&v(&[0.0, 0.0])).unwrap());
        assert!(o.contains(&v(&[0.99, 0.0])).unwrap());
        assert!(!o.contains(&v(&[0.7, 0.72])).unwrap());
        assert_eq!(o.polygons().len(), 1);
    }

    #[test]
    fn cluster_parameters_are_sorted_and_wrapped() {
        let ts = curve_parameters(0.0, 1.0, 64, &[0.0]).unwrap();
        assert!(ts.windows(2).all(|w| w[0] < w[1]));
        assert!(ts.iter().all(|t| (0.0..1.0).contains(t)));
        assert!(ts[1] < 1e-5 && *ts.last().unwrap() > 1.0 - 1e-5);
    }

    #[test]
    fn boolean_combinations() {
        let ball = SetSpec::Ball {
            center: vec![0.0, 0.0],
            radius: 1.0,
        };
        let half = SetSpec::Implicit {
            dim: 2,
            expr: parse_expression("-x0").unwrap(),
        };
        let inter = SetSpec::Intersection {
            sets: vec![ball.clone(), half.clone()],
        }
        .compile()
        .unwrap();
        assert!(inter.contains(&v(&[0.5, 0.0])).unwrap());
        assert!(!inter.contains(&v(&[-0.5, 0.0])).unwrap());
        assert!(!inter.contains(&v(&[2.0, 0.0])).unwrap());
        let uni = SetSpec::Union {
            sets: vec![ball, half],
        }
        .compile()
        .unwrap();
        assert!(uni.contains(&v(&[-0.5, 0.0])).unwrap());
        assert!(uni.contains(&v(&[5.0, 0.0])).unwrap());
        assert!(!uni.contains(&v(&[-5.0, 0.0])).unwrap());
    }
}
