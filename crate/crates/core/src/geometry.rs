//! Polyhedral cones, direction sets, and the vector type shared by every
//! other module.
//!
//! Ordering and constraint cones are kept in H-representation
//! `{y : a_i·y ≥ 0}`; finitely generated cones (duals, polars, conic hulls
//! of finite direction sets) in V-representation. Membership in a
//! V-representation cone is an LP feasibility question.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::multipliers::lp::{lp_feasible, LpProblem};

/// Absolute tolerance applied to each cone inequality.
pub const TOL: f64 = 1e-9;

/// Two unit directions closer than this are the same direction.
pub const DIR_TOL: f64 = 1e-12;

/// Finite point or direction in `R^n`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Invalid("vector must have dimension ≥ 1".into()));
        }
        if !coords.iter().all(|c| c.is_finite()) {
            return Err(Error::NonFinite("vector coordinates".into()));
        }
        Ok(Vector(coords))
    }

    /// Skips validation; callers guarantee finite, nonempty coordinates.
    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        Vector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![0.0; dim])
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[axis] = 1.0;
        Vector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        dot(&self.0, &other.0)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn norm_l1(&self) -> f64 {
        self.0.iter().map(|v| v.abs()).sum()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.norm_inf() <= tol
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, t: f64) -> Vector {
        Vector(self.0.iter().map(|a| a * t).collect())
    }

    /// `self + t·dir`
    pub fn axpy(&self, t: f64, dir: &Vector) -> Vector {
        Vector(self.0.iter().zip(&dir.0).map(|(a, d)| a + t * d).collect())
    }

    pub fn neg(&self) -> Vector {
        self.scale(-1.0)
    }

    pub fn normalized(&self) -> Result<Vector> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(self.scale(1.0 / n))
    }

    pub fn dist(&self, other: &Vector) -> f64 {
        self.sub(other).norm()
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Vector::new(v)
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Vec<f64> {
        v.0
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Polyhedral cone `{y : a_i·y ≥ 0 for every row a_i}`.
///
/// An empty row list denotes the whole space; it is only produced by
/// [`HalfspaceCone::whole_space`] and is rejected wherever a proper cone is
/// required.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfspaceCone {
    dim: usize,
    rows: Vec<Vector>,
}

impl HalfspaceCone {
    pub fn new(rows: Vec<Vector>) -> Result<Self> {
        let first = rows
            .first()
            .ok_or_else(|| Error::Invalid("halfspace cone needs at least one row".into()))?;
        let dim = first.dim();
        for r in &rows {
            check_dim(dim, r.dim())?;
            if r.is_zero(0.0) {
                return Err(Error::ZeroVector);
            }
        }
        Ok(HalfspaceCone { dim, rows })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        HalfspaceCone::new(rows.into_iter().map(Vector::new).collect::<Result<_>>()?)
    }

    pub fn whole_space(dim: usize) -> Self {
        HalfspaceCone { dim, rows: Vec::new() }
    }

    /// `R^n_+`
    pub fn orthant(dim: usize) -> Self {
        HalfspaceCone {
            dim,
            rows: (0..dim).map(|i| Vector::unit(dim, i)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn is_whole_space(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains(&self, v: &Vector, strict: bool) -> Result<bool> {
        check_dim(self.dim, v.dim())?;
        Ok(if strict {
            self.rows.iter().all(|a| a.dot(v) > TOL)
        } else {
            self.rows.iter().all(|a| a.dot(v) >= -TOL)
        })
    }

    /// Intersection of two cones in the same space.
    pub fn intersect(&self, other: &HalfspaceCone) -> Result<HalfspaceCone> {
        check_dim(self.dim, other.dim)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(HalfspaceCone { dim: self.dim, rows })
    }

    /// `-K`
    pub fn negated(&self) -> HalfspaceCone {
        HalfspaceCone {
            dim: self.dim,
            rows: self.rows.iter().map(Vector::neg).collect(),
        }
    }

    /// Rank of the row matrix. The cone is pointed iff the rank equals `dim`.
    pub fn row_rank(&self) -> usize {
        rank(&self.rows.iter().map(|r| r.as_slice().to_vec()).collect::<Vec<_>>())
    }

    pub fn is_pointed(&self) -> bool {
        self.row_rank() == self.dim
    }

    /// Some `y` with every `a_i·y ≥ 1`, i.e. a strict interior point.
    pub fn interior_point(&self) -> Result<Option<Vector>> {
        if self.rows.is_empty() {
            return Ok(Some(Vector::unit(self.dim, 0)));
        }
        let mut lp = LpProblem::new(self.dim);
        for a in &self.rows {
            lp.geq(a.as_slice().to_vec(), 1.0);
        }
        lp_feasible(&lp)
    }

    /// Whether the cone contains a nonzero point.
    pub fn is_nontrivial(&self) -> Result<bool> {
        for i in 0..self.dim {
            for sign in [1.0, -1.0] {
                let mut lp = LpProblem::new(self.dim);
                for a in &self.rows {
                    lp.geq(a.as_slice().to_vec(), 0.0);
                }
                let mut e = vec![0.0; self.dim];
                e[i] = sign;
                lp.geq(e, 1.0);
                if lp_feasible(&lp)?.is_some() {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Proper in the sense `K ≠ {0}` and `K ≠ Y`.
    pub fn is_proper(&self) -> Result<bool> {
        Ok(!self.rows.is_empty() && self.is_nontrivial()?)
    }
}

/// Finitely generated cone `{Σ c_j g_j : c ≥ 0}`. No generators means `{0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorCone {
    dim: usize,
    generators: Vec<Vector>,
}

impl GeneratorCone {
    pub fn new(dim: usize, generators: Vec<Vector>) -> Result<Self> {
        for g in &generators {
            check_dim(dim, g.dim())?;
            if g.is_zero(0.0) {
                return Err(Error::ZeroVector);
            }
        }
        Ok(GeneratorCone { dim, generators })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    /// Conic-combination membership via LP. Strict queries are rejected.
    pub fn contains(&self, v: &Vector, strict: bool) -> Result<bool> {
        check_dim(self.dim, v.dim())?;
        if strict {
            return Err(Error::StrictOnGenerators);
        }
        if v.is_zero(TOL) {
            return Ok(true);
        }
        if self.generators.is_empty() {
            return Ok(false);
        }
        Ok(self.combination(v)?.is_some())
    }

    /// Nonnegative weights `c` with `Σ c_j g_j = v`, if any.
    pub fn combination(&self, v: &Vector) -> Result<Option<Vec<f64>>> {
        check_dim(self.dim, v.dim())?;
        let m = self.generators.len();
        if m == 0 {
            return Ok(v.is_zero(TOL).then(Vec::new));
        }
        let mut lp = LpProblem::new(m);
        lp.set_all_nonneg();
        for i in 0..self.dim {
            let row = self.generators.iter().map(|g| g[i]).collect();
            lp.equals(row, v[i]);
        }
        Ok(lp_feasible(&lp)?.map(Vector::into_vec))
    }
}

/// Either representation, for code that accepts both.
#[derive(Debug, Clone, PartialEq)]
pub enum Cone {
    Halfspace(HalfspaceCone),
    Generators(GeneratorCone),
}

impl Cone {
    pub fn dim(&self) -> usize {
        match self {
            Cone::Halfspace(c) => c.dim(),
            Cone::Generators(c) => c.dim(),
        }
    }

    pub fn contains(&self, v: &Vector, strict: bool) -> Result<bool> {
        match self {
            Cone::Halfspace(c) => c.contains(v, strict),
            Cone::Generators(c) => c.contains(v, strict),
        }
    }
}

/// Membership in a cone given in either representation.
pub fn contains(cone: &Cone, v: &Vector, strict: bool) -> Result<bool> {
    cone.contains(v, strict)
}

/// `C⁻ = {x* : x*·g ≤ 0 for every generator g}` as rows `-g`.
pub fn negative_polar(c: &GeneratorCone) -> HalfspaceCone {
    HalfspaceCone {
        dim: c.dim,
        rows: c.generators.iter().map(Vector::neg).collect(),
    }
}

/// Generators of `K⁺` for an H-representation cone.
#[derive(Debug, Clone, PartialEq)]
pub struct DualGenerators {
    pub cone: GeneratorCone,
    /// Whether `K` has nonempty interior.
    pub full_dimensional: bool,
}

/// The rows of `K` generate `K⁺` (Farkas). The flag reports whether `K`
/// itself has interior points.
pub fn dual_generators(c: &HalfspaceCone) -> Result<DualGenerators> {
    Ok(DualGenerators {
        cone: GeneratorCone {
            dim: c.dim,
            generators: c.rows.clone(),
        },
        full_dimensional: c.interior_point()?.is_some(),
    })
}

/// Closed set of unit directions `L ⊂ S_X`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionSet {
    /// Finitely many unit vectors.
    Finite { dim: usize, directions: Vec<Vector> },
    /// Unit-sphere section of a polyhedral cone; no rows means all of `S_X`.
    ConeSection(HalfspaceCone),
}

impl DirectionSet {
    pub fn finite(directions: Vec<Vector>) -> Result<Self> {
        normalize_directions(directions)
    }

    pub fn cone_section(cone: HalfspaceCone) -> Result<Self> {
        if !cone.is_nontrivial()? {
            return Err(Error::Invalid("cone section has no nonzero point".into()));
        }
        Ok(DirectionSet::ConeSection(cone))
    }

    pub fn full_sphere(dim: usize) -> Self {
        DirectionSet::ConeSection(HalfspaceCone::whole_space(dim))
    }

    /// `{(cos θ, sin θ)}` for `count` evenly spaced θ in `[from, to]`. With
    /// `open` the endpoints are excluded (midpoint rule).
    pub fn arc(from: f64, to: f64, count: usize, open: bool) -> Result<Self> {
        if count == 0 {
            return Err(Error::Invalid("arc needs at least one direction".into()));
        }
        let dirs = (0..count)
            .map(|j| {
                let s = if open {
                    (j as f64 + 0.5) / count as f64
                } else if count == 1 {
                    0.5
                } else {
                    j as f64 / (count - 1) as f64
                };
                let th = from + (to - from) * s;
                Vector::from_vec_unchecked(vec![th.cos(), th.sin()])
            })
            .collect();
        normalize_directions(dirs)
    }

    pub fn dim(&self) -> usize {
        match self {
            DirectionSet::Finite { dim, .. } => *dim,
            DirectionSet::ConeSection(c) => c.dim(),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, DirectionSet::Finite { .. })
    }

    /// Finite generators, or an error for cone sections.
    pub fn generators(&self) -> Result<&[Vector]> {
        match self {
            DirectionSet::Finite { directions, .. } => Ok(directions),
            DirectionSet::ConeSection(_) => Err(Error::NotFinitelyGenerated),
        }
    }

    /// `v ∈ cone L`, where `cone L = {t·ℓ : t ≥ 0, ℓ ∈ L}` is the union of
    /// rays through `L`.
    pub fn cone_contains(&self, v: &Vector) -> Result<bool> {
        check_dim(self.dim(), v.dim())?;
        match self {
            DirectionSet::Finite { directions, .. } => {
                let n = v.norm();
                if n <= TOL {
                    return Ok(true);
                }
                let u = v.scale(1.0 / n);
                Ok(directions.iter().any(|d| d.dist(&u) <= TOL))
            }
            DirectionSet::ConeSection(c) => c.contains(v, false),
        }
    }

    /// `v ∈ int cone L`. Finite sets in dimension ≥ 2 have empty interior
    /// unless they cover a full neighborhood, which we never assume.
    pub fn cone_interior_contains(&self, v: &Vector) -> Result<bool> {
        check_dim(self.dim(), v.dim())?;
        match self {
            DirectionSet::Finite { dim, directions } => {
                if *dim == 1 {
                    let n = v[0];
                    Ok(n.abs() > TOL && directions.iter().any(|d| d[0] * n > 0.0))
                } else {
                    Ok(false)
                }
            }
            DirectionSet::ConeSection(c) => {
                if c.is_whole_space() {
                    Ok(true)
                } else {
                    c.contains(v, true)
                }
            }
        }
    }

    /// Representative unit rays: all of a finite set, or a deterministic
    /// sphere lattice of about `count` points filtered to the cone section.
    pub fn rays(&self, count: usize) -> Result<Vec<Vector>> {
        match self {
            DirectionSet::Finite { directions, .. } => Ok(directions.clone()),
            DirectionSet::ConeSection(c) => {
                let mut n = count.max(1);
                for _ in 0..8 {
                    let kept: Vec<Vector> = sphere_lattice(c.dim(), n)
                        .into_iter()
                        .filter(|r| c.contains(r, false).unwrap_or(false))
                        .collect();
                    if !kept.is_empty() {
                        return Ok(kept);
                    }
                    n *= 4;
                }
                Err(Error::Invalid(
                    "cone section too thin for the direction lattice".into(),
                ))
            }
        }
    }
}

/// Conic hull of a direction set in a form `contains` understands.
#[derive(Debug, Clone, PartialEq)]
pub enum ConicHull {
    Generators(GeneratorCone),
    Halfspace(HalfspaceCone),
}

impl ConicHull {
    pub fn contains(&self, v: &Vector) -> Result<bool> {
        match self {
            ConicHull::Generators(g) => g.contains(v, false),
            ConicHull::Halfspace(h) => h.contains(v, false),
        }
    }

    pub fn into_cone(self) -> Cone {
        match self {
            ConicHull::Generators(g) => Cone::Generators(g),
            ConicHull::Halfspace(h) => Cone::Halfspace(h),
        }
    }
}

/// Finite directions become a generator cone (their convex conic hull);
/// cone sections return the underlying halfspace cone.
pub fn conic_hull(l: &DirectionSet) -> ConicHull {
    match l {
        DirectionSet::Finite { dim, directions } => ConicHull::Generators(GeneratorCone {
            dim: *dim,
            generators: directions.clone(),
        }),
        DirectionSet::ConeSection(c) => ConicHull::Halfspace(c.clone()),
    }
}

/// Scales each vector to unit Euclidean norm and drops repeats, keeping
/// first occurrences in order.
pub fn normalize_directions(vs: Vec<Vector>) -> Result<DirectionSet> {
    let first = vs
        .first()
        .ok_or_else(|| Error::Invalid("direction set must be nonempty".into()))?;
    let dim = first.dim();
    let mut out: Vec<Vector> = Vec::with_capacity(vs.len());
    for v in vs {
        check_dim(dim, v.dim())?;
        let u = v.normalized()?;
        if !out.iter().any(|w| w.dist(&u) <= DIR_TOL) {
            out.push(u);
        }
    }
    Ok(DirectionSet::Finite {
        dim,
        directions: out,
    })
}

/// Deterministic, roughly uniform unit vectors: both signs in 1-D, evenly
/// spaced angles in 2-D (starting at angle 0), a Fibonacci spiral in 3-D,
/// and a normalized Kronecker sequence above that.
pub fn sphere_lattice(dim: usize, count: usize) -> Vec<Vector> {
    let count = count.max(1);
    match dim {
        0 => Vec::new(),
        1 => vec![
            Vector::from_vec_unchecked(vec![1.0]),
            Vector::from_vec_unchecked(vec![-1.0]),
        ],
        2 => (0..count)
            .map(|k| {
                let th = 2.0 * PI * k as f64 / count as f64;
                Vector::from_vec_unchecked(vec![th.cos(), th.sin()])
            })
            .collect(),
        3 => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let th = golden * k as f64;
                    Vector::from_vec_unchecked(vec![r * th.cos(), r * th.sin(), z])
                })
                .collect()
        }
        d => {
            let alphas: Vec<f64> = first_primes(d)
                .into_iter()
                .map(|p| (p as f64).sqrt().fract())
                .collect();
            (1..=count)
                .filter_map(|k| {
                    let raw: Vec<f64> = alphas
                        .iter()
                        .map(|a| 2.0 * (a * k as f64).fract() - 1.0)
                        .collect();
                    Vector::from_vec_unchecked(raw).normalized().ok()
                })
                .collect()
        }
    }
}

fn first_primes(n: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(n);
    let mut c = 2u64;
    while out.len() < n {
        if (2..c).take_while(|d| d * d <= c).all(|d| !c.is_multiple_of(d)) {
            out.push(c);
        }
        c += 1;
    }
    out
}

/// Numerical rank by Gaussian elimination with partial pivoting.
pub(crate) fn rank(rows: &[Vec<f64>]) -> usize {
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let (piv, val) = (r..m.len())
            .map(|i| (i, m[i][c].abs()))
            .fold((r, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if val <= 1e-10 {
            continue;
        }
        m.swap(r, piv);
        for i in (r + 1)..m.len() {
            let f = m[i][c] / m[r][c];
            for j in c..ncols {
                m[i][j] -= f * m[r][j];
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn orthant_membership() {
        let k = HalfspaceCone::orthant(2);
        assert!(k.contains(&v(&[1.0, 2.0]), false).unwrap());
        assert!(!k.contains(&v(&[0.0, 1.0]), true).unwrap());
    }

    #[test]
    fn skew_cone_membership() {
        // cone conv{(1,0),(1,1)} = {y2 ≥ 0, y1 - y2 ≥ 0}
        let k = HalfspaceCone::from_rows(vec![vec![0.0, 1.0], vec![1.0, -1.0]]).unwrap();
        assert!(k.contains(&v(&[2.0, 1.0]), false).unwrap());
        let g = GeneratorCone::new(2, vec![v(&[1.0, 0.0]), v(&[1.0, 1.0])]).unwrap();
        let w = g.combination(&v(&[2.0, 1.0])).unwrap().unwrap();
        assert!((w[0] - 1.0).abs() < 1e-9 && (w[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let k = HalfspaceCone::orthant(2);
        assert!(matches!(
            k.contains(&v(&[1.0]), false),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn strict_on_generators_rejected() {
        let g = GeneratorCone::new(1, vec![v(&[1.0])]).unwrap();
        assert!(matches!(
            g.contains(&v(&[1.0]), true),
            Err(Error::StrictOnGenerators)
        ));
    }

    #[test]
    fn polar_of_single_ray_in_r() {
        let l = GeneratorCone::new(1, vec![v(&[1.0])]).unwrap();
        let polar = negative_polar(&l);
        assert!(polar.contains(&v(&[-3.0]), false).unwrap());
        assert!(!polar.contains(&v(&[0.5]), false).unwrap());
    }

    #[test]
    fn polar_of_line() {
        let l = GeneratorCone::new(2, vec![v(&[1.0, 0.0]), v(&[-1.0, 0.0])]).unwrap();
        let polar = negative_polar(&l);
        assert_eq!(polar.rows().len(), 2);
        assert!(polar.contains(&v(&[0.0, 5.0]), false).unwrap());
        assert!(!polar.contains(&v(&[0.1, 0.0]), false).unwrap());
        assert!(!polar.contains(&v(&[-0.1, 0.0]), false).unwrap());
    }

    #[test]
    fn polar_of_sampled_sphere_is_origin() {
        let gens = sphere_lattice(2, 64);
        let c = GeneratorCone::new(2, gens).unwrap();
        let polar = negative_polar(&c);
        assert!(polar.contains(&Vector::zeros(2), false).unwrap());
        for probe in sphere_lattice(2, 17) {
            assert!(!polar.contains(&probe.scale(1e-3), false).unwrap());
        }
    }

    #[test]
    fn dual_generators_examples() {
        let d = dual_generators(&HalfspaceCone::orthant(2)).unwrap();
        assert_eq!(d.cone.generators(), &[v(&[1.0, 0.0]), v(&[0.0, 1.0])]);
        assert!(d.full_dimensional);

        let half = HalfspaceCone::from_rows(vec![vec![1.0, 0.0]]).unwrap();
        let d = dual_generators(&half).unwrap();
        assert_eq!(d.cone.generators(), &[v(&[1.0, 0.0])]);

        let line = HalfspaceCone::from_rows(vec![vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap();
        assert!(!dual_generators(&line).unwrap().full_dimensional);
    }

    #[test]
    fn conic_hull_of_axis_pair() {
        let l = DirectionSet::finite(vec![v(&[1.0, 0.0]), v(&[-1.0, 0.0])]).unwrap();
        let h = conic_hull(&l);
        assert!(h.contains(&v(&[0.5, 0.0])).unwrap());
        assert!(!h.contains(&v(&[0.0, 0.1])).unwrap());
        assert!(l.cone_contains(&v(&[-2.0, 0.0])).unwrap());
    }

    #[test]
    fn conic_hull_of_section() {
        let l = DirectionSet::cone_section(HalfspaceCone::orthant(2)).unwrap();
        assert!(conic_hull(&l).contains(&v(&[3.0, 4.0])).unwrap());
        let r = DirectionSet::finite(vec![v(&[1.0])]).unwrap();
        assert!(conic_hull(&r).contains(&v(&[7.0])).unwrap());
        assert!(!conic_hull(&r).contains(&v(&[-7.0])).unwrap());
    }

    #[test]
    fn ray_union_differs_from_convex_hull() {
        let l = DirectionSet::finite(vec![v(&[1.0, 0.0]), v(&[0.0, 1.0])]).unwrap();
        assert!(!l.cone_contains(&v(&[1.0, 1.0])).unwrap());
        assert!(conic_hull(&l).contains(&v(&[1.0, 1.0])).unwrap());
    }

    #[test]
    fn normalization() {
        let l = normalize_directions(vec![v(&[2.0, 0.0])]).unwrap();
        assert_eq!(l.generators().unwrap(), &[v(&[1.0, 0.0])]);
        let l = normalize_directions(vec![v(&[1.0, 0.0]), v(&[2.0, 0.0])]).unwrap();
        assert_eq!(l.generators().unwrap().len(), 1);
        let l = normalize_directions(vec![v(&[1.0, 1.0])]).unwrap();
        let h = 2f64.sqrt() / 2.0;
        let g = &l.generators().unwrap()[0];
        assert!((g[0] - h).abs() < 1e-15 && (g[1] - h).abs() < 1e-15);
        assert!(matches!(
            normalize_directions(vec![v(&[0.0, 0.0])]),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn lattices_are_unit() {
        for d in 1..=5 {
            for r in sphere_lattice(d, 50) {
                assert!((r.norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn section_rays_stay_in_cone() {
        let c = HalfspaceCone::from_rows(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]).unwrap();
        let l = DirectionSet::cone_section(c.clone()).unwrap();
        let rays = l.rays(200).unwrap();
        assert!(!rays.is_empty());
        assert!(rays.iter().all(|r| c.contains(r, false).unwrap()));
    }

    #[test]
    fn trivial_section_rejected() {
        let c = HalfspaceCone::from_rows(vec![vec![1.0], vec![-1.0]]).unwrap();
        assert!(DirectionSet::cone_section(c).is_err());
    }

    #[test]
    fn pointedness() {
        assert!(HalfspaceCone::orthant(3).is_pointed());
        let half = HalfspaceCone::from_rows(vec![vec![1.0, 0.0]]).unwrap();
        assert!(!half.is_pointed());
        assert!(half.is_proper().unwrap());
    }
}
