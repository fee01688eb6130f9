//! Directional minimal-time function and empirical calmness /
//! subregularity moduli.

use serde::{Deserialize, Serialize};

use crate::certify::GridSpec;
use crate::error::{check_dim, Error, Result};
use crate::geometry::{DirectionSet, Vector, TOL};
use crate::multipliers::lp::{LpOutcome, LpProblem};
use crate::report::inf_f64;
use crate::sets::PolyhedralSet;
use crate::smooth::SmoothMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    #[default]
    L2,
    Linf,
}

impl Norm {
    pub fn of(self, v: &Vector) -> f64 {
        match self {
            Norm::L2 => v.norm(),
            Norm::Linf => v.norm_inf(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Target {
    Point { point: Vector },
    FinitePoints { points: Vec<Vector> },
    Polyhedron { set: PolyhedralSet },
}

impl Target {
    pub fn dim(&self) -> Result<usize> {
        match self {
            Target::Point { point } => Ok(point.dim()),
            Target::FinitePoints { points } => {
                let first = points
                    .first()
                    .ok_or_else(|| Error::Invalid("empty target".into()))?;
                for p in points {
                    check_dim(first.dim(), p.dim())?;
                }
                Ok(first.dim())
            }
            Target::Polyhedron { set } => Ok(set.dim()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimalTime {
    #[serde(with = "inf_f64")]
    pub value: f64,
    /// Set when the value is only an upper bound from sampled directions.
    pub approximate: bool,
}

impl MinimalTime {
    fn exact(value: f64) -> Self {
        MinimalTime {
            value,
            approximate: false,
        }
    }
}

/// Rays sampled from a cone section when no exact algorithm applies.
pub const SECTION_SAMPLE_RAYS: usize = 4096;

/// `T_L(x, Ω) = inf{t ≥ 0 : x + t ℓ ∈ Ω for some ℓ ∈ L}`, with directions
/// rescaled to unit length in `norm`.
pub fn minimal_time(l: &DirectionSet, x: &Vector, target: &Target, norm: Norm) -> Result<MinimalTime> {
    check_dim(l.dim(), x.dim())?;
    check_dim(x.dim(), target.dim()?)?;
    match target {
        Target::Point { point } => point_time(l, x, point, norm).map(MinimalTime::exact),
        Target::FinitePoints { points } => {
            let mut best = f64::INFINITY;
            for p in points {
                best = best.min(point_time(l, x, p, norm)?);
            }
            Ok(MinimalTime::exact(best))
        }
        Target::Polyhedron { set } => match l {
            DirectionSet::Finite { directions, .. } => {
                Ok(MinimalTime::exact(rays_time(directions, x, set, norm)))
            }
            DirectionSet::ConeSection(_) if norm == Norm::Linf => section_linf(l, x, set),
            DirectionSet::ConeSection(_) => {
                let rays = l.rays(SECTION_SAMPLE_RAYS)?;
                Ok(MinimalTime {
                    value: rays_time(&rays, x, set, norm),
                    approximate: true,
                })
            }
        },
    }
}

fn point_time(l: &DirectionSet, x: &Vector, u: &Vector, norm: Norm) -> Result<f64> {
    let d = u.sub(x);
    if l.cone_contains(&d)? {
        Ok(norm.of(&d))
    } else {
        Ok(f64::INFINITY)
    }
}

/// Smallest `t ≥ 0` with `x + t ℓ ∈ Ω`, or `None`.
pub fn ray_entry_time(dir: &Vector, x: &Vector, set: &PolyhedralSet) -> Option<f64> {
    let (mut lo, mut hi) = (0.0_f64, f64::INFINITY);
    for (a, b) in set.rows().iter().zip(set.offsets()) {
        let slack = a.dot(x) - b;
        let rate = a.dot(dir);
        if rate.abs() <= 1e-15 {
            if slack < -TOL {
                return None;
            }
        } else if rate > 0.0 {
            lo = lo.max(-slack / rate);
        } else {
            hi = hi.min(-slack / rate);
        }
    }
    (lo <= hi + TOL).then_some(lo)
}

fn rays_time(dirs: &[Vector], x: &Vector, set: &PolyhedralSet, norm: Norm) -> f64 {
    dirs.iter()
        .filter_map(|d| {
            let unit = d.scale(1.0 / norm.of(d));
            ray_entry_time(&unit, x, set)
        })
        .fold(f64::INFINITY, f64::min)
}

/// LP: minimize `t` over `d ∈ cone L`, `|d_k| ≤ t`, `x + d ∈ Ω`.
fn section_linf(l: &DirectionSet, x: &Vector, set: &PolyhedralSet) -> Result<MinimalTime> {
    let DirectionSet::ConeSection(cone) = l else {
        unreachable!("caller matched a cone section")
    };
    let n = x.dim();
    let mut lp = LpProblem::new(n + 1);
    lp.set_nonneg(n);
    let pad = |row: &[f64], t: f64| {
        let mut c = row.to_vec();
        c.push(t);
        c
    };
    for r in cone.rows() {
        lp.geq(pad(r.as_slice(), 0.0), 0.0);
    }
    for k in 0..n {
        let e = Vector::unit(n, k);
        lp.geq(pad(e.neg().as_slice(), 1.0), 0.0);
        lp.geq(pad(e.as_slice(), 1.0), 0.0);
    }
    for (a, b) in set.rows().iter().zip(set.offsets()) {
        lp.geq(pad(a.as_slice(), 0.0), b - a.dot(x));
    }
    let mut obj = vec![0.0; n];
    obj.push(1.0);
    lp.minimize(obj);
    match lp.solve()? {
        LpOutcome::Optimal(s) => Ok(MinimalTime::exact(s.objective.max(0.0))),
        LpOutcome::Infeasible { .. } => Ok(MinimalTime::exact(f64::INFINITY)),
        LpOutcome::Unbounded { .. } => Err(Error::NumericalFailure(
            "minimal-time LP reported an unbounded objective".into(),
        )),
    }
}

/// Supremum of a sampled ratio with the pair attaining it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioEstimate {
    #[serde(with = "inf_f64")]
    pub supremum_ratio: f64,
    pub witness_pair: Option<(Vector, Vector)>,
    pub samples_used: usize,
    /// False when no grid point was admissible (the ratio is then 0).
    pub admissible: bool,
    pub empirical: bool,
}

fn ratio_grid(l: &DirectionSet, grid: &GridSpec) -> Result<Vec<(Vector, f64)>> {
    let rays = l.rays(grid.rays_per_level)?;
    let mut pts = Vec::with_capacity(rays.len() * grid.levels);
    for k in 0..grid.levels {
        let t = grid.radius * 0.5_f64.powi(k as i32);
        for r in &rays {
            pts.push((r.clone(), t));
        }
    }
    Ok(pts)
}

fn fold_ratios(samples: impl Iterator<Item = Result<Option<(f64, Vector, Vector)>>>) -> Result<RatioEstimate> {
    let mut est = RatioEstimate {
        supremum_ratio: 0.0,
        witness_pair: None,
        samples_used: 0,
        admissible: false,
        empirical: true,
    };
    for s in samples {
        if let Some((ratio, a, b)) = s? {
            est.samples_used += 1;
            if !est.admissible || ratio > est.supremum_ratio {
                est.supremum_ratio = ratio;
                est.witness_pair = Some((a, b));
            }
            est.admissible = true;
        }
    }
    Ok(est)
}

/// Empirical calmness modulus of `f` at `x̄`:
/// `sup T_M(f(x), f(x̄)) / T_L(x̄, x)` over grid points `x = x̄ + tℓ`.
/// An image that cannot reach `f(x̄)` along `cone M` gives ratio `+inf`.
pub fn calmness_ratio(
    f: &SmoothMap,
    xbar: &Vector,
    l: &DirectionSet,
    m: &DirectionSet,
    grid: &GridSpec,
) -> Result<RatioEstimate> {
    grid.validate()?;
    check_dim(f.input_dim(), xbar.dim())?;
    check_dim(f.input_dim(), l.dim())?;
    check_dim(f.output_dim(), m.dim())?;
    let ybar = f.eval(xbar)?;
    let pts = ratio_grid(l, grid)?;
    fold_ratios(pts.into_iter().map(|(r, t)| {
        let x = xbar.axpy(t, &r);
        let den = point_time(l, xbar, &x, Norm::L2)?;
        if !(den > 0.0 && den.is_finite()) {
            return Ok(None);
        }
        let num = point_time(m, &f.eval(&x)?, &ybar, Norm::L2)?;
        Ok(Some((num / den, xbar.clone(), x)))
    }))
}

/// Empirical subregularity modulus of `f` at `(x̄, f(x̄))` assuming the
/// level set `f⁻¹(f(x̄))` is `{x̄}` near `x̄`:
/// `sup T_L(x, x̄) / T_M(f(x̄), f(x))` over `x = x̄ − tℓ`.
pub fn subregularity_ratio(
    f: &SmoothMap,
    xbar: &Vector,
    l: &DirectionSet,
    m: &DirectionSet,
    grid: &GridSpec,
) -> Result<RatioEstimate> {
    grid.validate()?;
    check_dim(f.input_dim(), xbar.dim())?;
    check_dim(f.input_dim(), l.dim())?;
    check_dim(f.output_dim(), m.dim())?;
    let ybar = f.eval(xbar)?;
    let pts = ratio_grid(l, grid)?;
    fold_ratios(pts.into_iter().map(|(r, t)| {
        let x = xbar.axpy(-t, &r);
        let num = point_time(l, &x, xbar, Norm::L2)?;
        let den = point_time(m, &ybar, &f.eval(&x)?, Norm::L2)?;
        if !den.is_finite() {
            return Ok(None);
        }
        Ok(Some((num / den, x, xbar.clone())))
    }))
}
