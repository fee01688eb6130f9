//! Directional Bouligand tangent cones: exact on polyhedra, sampled on
//! general membership oracles.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::geometry::{sphere_lattice, DirectionSet, HalfspaceCone, Vector, TOL};
use crate::sets::{PolyhedralSet, SetOracle};
use crate::smooth::SmoothMap;

/// `T_B^L(A, x̄)` for polyhedral `A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TangentCone {
    /// Active-constraint cone intersected with a cone section.
    Halfspace { cone: HalfspaceCone },
    /// Rays of a finite `L` that point into `A`; the origin is always in.
    Rays { dim: usize, rays: Vec<Vector> },
}

impl TangentCone {
    pub fn dim(&self) -> usize {
        match self {
            TangentCone::Halfspace { cone } => cone.dim(),
            TangentCone::Rays { dim, .. } => *dim,
        }
    }

    pub fn contains(&self, u: &Vector) -> Result<bool> {
        check_dim(self.dim(), u.dim())?;
        match self {
            TangentCone::Halfspace { cone } => cone.contains(u, false),
            TangentCone::Rays { rays, .. } => {
                let n = u.norm();
                if n <= TOL {
                    return Ok(true);
                }
                let w = u.scale(1.0 / n);
                Ok(rays.iter().any(|r| r.dist(&w) <= TOL))
            }
        }
    }

    /// Unit members: the kept rays, or lattice rays of the halfspace cone.
    pub fn sample_rays(&self, count: usize) -> Vec<Vector> {
        match self {
            TangentCone::Rays { rays, .. } => rays.clone(),
            TangentCone::Halfspace { cone } => sphere_lattice(cone.dim(), count)
                .into_iter()
                .filter(|r| cone.contains(r, false).unwrap_or(false))
                .collect(),
        }
    }
}

/// Cone of feasible directions `{u : a_i·u ≥ 0, i active at x̄}`, which is
/// both the Bouligand and the Ursescu tangent cone of a polyhedron.
pub fn active_cone(a: &PolyhedralSet, xbar: &Vector) -> Result<HalfspaceCone> {
    if !a.contains(xbar)? {
        return Err(Error::NotInSet(xbar.to_string()));
    }
    let rows = a
        .active(xbar, TOL)?
        .into_iter()
        .map(|i| a.rows()[i].clone())
        .collect::<Vec<_>>();
    if rows.is_empty() {
        Ok(HalfspaceCone::whole_space(a.dim()))
    } else {
        HalfspaceCone::new(rows)
    }
}

pub fn tangent_polyhedral(a: &PolyhedralSet, xbar: &Vector, l: &DirectionSet) -> Result<TangentCone> {
    check_dim(a.dim(), l.dim())?;
    let act = active_cone(a, xbar)?;
    Ok(match l {
        DirectionSet::ConeSection(c) => TangentCone::Halfspace {
            cone: act.intersect(c)?,
        },
        DirectionSet::Finite { dim, directions } => {
            let mut rays = Vec::new();
            for d in directions {
                if act.contains(d, false)? {
                    rays.push(d.clone());
                }
            }
            TangentCone::Rays { dim: *dim, rays }
        }
    })
}

/// `{x : φ(x) ∈ E}` for affine `φ(x) = M x + c`.
pub fn affine_preimage(e: &PolyhedralSet, matrix: &[Vec<f64>], offset: &[f64]) -> Result<PolyhedralSet> {
    check_dim(e.dim(), matrix.len())?;
    check_dim(e.dim(), offset.len())?;
    let n = matrix.first().map_or(0, Vec::len);
    let mut rows = Vec::with_capacity(e.rows().len());
    let mut offs = Vec::with_capacity(e.rows().len());
    for (a, b) in e.rows().iter().zip(e.offsets()) {
        let row: Vec<f64> = (0..n)
            .map(|j| (0..matrix.len()).map(|i| a[i] * matrix[i][j]).sum())
            .collect();
        let shift: f64 = a.as_slice().iter().zip(offset).map(|(x, y)| x * y).sum();
        rows.push(Vector::new(row)?);
        offs.push(b - shift);
    }
    // Rows that vanish under φ become constant constraints.
    let mut keep_rows = Vec::new();
    let mut keep_offs = Vec::new();
    for (r, b) in rows.into_iter().zip(offs) {
        if r.is_zero(1e-14) {
            if b > TOL {
                return Err(Error::Invalid("preimage is empty".into()));
            }
        } else {
            keep_rows.push(r);
            keep_offs.push(b);
        }
    }
    PolyhedralSet::new(n, keep_rows, keep_offs)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TSchedule {
    /// First step `t_0`.
    pub r: f64,
    /// Number of levels; `t_k = r 2^{-k}`, `ε_k = ‖u‖ 2^{-k/2}`.
    pub levels: usize,
    /// Perturbation lattice size per level.
    pub max_perturbations: usize,
    /// Consecutive empty levels required for a nonmember verdict.
    pub confirm_levels: usize,
}

impl Default for TSchedule {
    fn default() -> Self {
        TSchedule {
            r: 0.5,
            levels: 25,
            max_perturbations: 1000,
            confirm_levels: 3,
        }
    }
}

impl TSchedule {
    pub fn t(&self, k: usize) -> f64 {
        self.r * 0.5_f64.powi(k as i32)
    }

    pub fn eps(&self, k: usize, unorm: f64) -> f64 {
        unorm * 0.5_f64.powf(k as f64 / 2.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TangentStatus {
    Member,
    Nonmember,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelEvidence {
    pub level: usize,
    pub t: f64,
    pub eps: f64,
    /// `u_k` with `x̄ + t_k u_k ∈ A`, if one was found.
    pub u_k: Option<Vector>,
    /// No sampled perturbation at any sampled `t ≤ t_k` met the set.
    pub empty_below: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangentVerdict {
    pub status: TangentStatus,
    pub evidence: Vec<LevelEvidence>,
    pub note: String,
}

/// Points `p ∈ cone L` with `‖p − u‖ ≤ ε`, `u` first.
fn perturbations(l: &DirectionSet, u: &Vector, eps: f64, budget: usize) -> Result<Vec<Vector>> {
    let mut out = vec![u.clone()];
    match l {
        DirectionSet::Finite { directions, .. } => {
            let per = (budget.saturating_sub(1) / directions.len()).max(1);
            let uu = u.dot(u);
            for d in directions {
                let c = d.dot(u);
                let disc = eps * eps - (uu - c * c);
                if disc < 0.0 {
                    continue;
                }
                let h = disc.sqrt();
                let (lo, hi) = ((c - h).max(0.0), c + h);
                if hi < lo {
                    continue;
                }
                for j in 0..per {
                    let s = if per == 1 {
                        0.5 * (lo + hi)
                    } else {
                        lo + (hi - lo) * j as f64 / (per - 1) as f64
                    };
                    out.push(d.scale(s));
                }
            }
        }
        DirectionSet::ConeSection(cone) => {
            const RADII: [f64; 4] = [1.0, 0.75, 0.5, 0.25];
            let per = (budget.saturating_sub(1) / RADII.len()).max(1) / 8 * 8;
            let dirs = sphere_lattice(u.dim(), per.max(8));
            for rho in RADII {
                for w in &dirs {
                    let p = u.axpy(eps * rho, w);
                    if cone.contains(&p, false)? {
                        out.push(p);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn first_hit(a: &SetOracle, xbar: &Vector, t: f64, cands: &[Vector]) -> Result<Option<Vector>> {
    for p in cands {
        if a.contains(&xbar.axpy(t, p))? {
            return Ok(Some(p.clone()));
        }
    }
    Ok(None)
}

/// Sampled test of `u ∈ T_B^L(A, x̄)`.
pub fn tangent_membership_sampled(
    a: &SetOracle,
    xbar: &Vector,
    l: &DirectionSet,
    u: &Vector,
    schedule: &TSchedule,
) -> Result<TangentVerdict> {
    check_dim(a.dim(), xbar.dim())?;
    check_dim(l.dim(), u.dim())?;
    check_dim(xbar.dim(), u.dim())?;
    if schedule.levels == 0 || !(schedule.r > 0.0) {
        return Err(Error::Invalid("tangent schedule needs r > 0 and levels ≥ 1".into()));
    }
    if !a.contains(xbar)? {
        return Err(Error::NotInSet(xbar.to_string()));
    }
    if !l.cone_contains(u)? {
        return Ok(TangentVerdict {
            status: TangentStatus::Nonmember,
            evidence: Vec::new(),
            note: "u is outside cone L".into(),
        });
    }
    let unorm = u.norm();
    if unorm <= TOL {
        let evidence = (0..schedule.levels)
            .map(|k| LevelEvidence {
                level: k,
                t: schedule.t(k),
                eps: 0.0,
                u_k: Some(u.clone()),
                empty_below: None,
            })
            .collect();
        return Ok(TangentVerdict {
            status: TangentStatus::Member,
            evidence,
            note: "zero direction".into(),
        });
    }

    let levels: Vec<usize> = (0..schedule.levels).collect();
    let mut evidence = levels
        .par_iter()
        .map(|&k| -> Result<LevelEvidence> {
            let t = schedule.t(k);
            let eps = schedule.eps(k, unorm);
            let cands = perturbations(l, u, eps, schedule.max_perturbations)?;
            let u_k = first_hit(a, xbar, t, &cands)?;
            let empty_below = if u_k.is_some() {
                Some(false)
            } else {
                // Quarter-octave steps from t_k down to the last level.
                let last = 4 * (schedule.levels - 1);
                let mut empty = true;
                for q in 4 * k + 1..=last {
                    let tq = schedule.r * 0.5_f64.powf(q as f64 / 4.0);
                    if first_hit(a, xbar, tq, &cands)?.is_some() {
                        empty = false;
                        break;
                    }
                }
                Some(empty)
            };
            Ok(LevelEvidence {
                level: k,
                t,
                eps,
                u_k,
                empty_below,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    evidence.sort_by_key(|e| e.level);

    let status = if evidence.iter().all(|e| e.u_k.is_some()) {
        TangentStatus::Member
    } else {
        let run = schedule.confirm_levels.max(1);
        let confirmed = evidence
            .windows(run.min(evidence.len()))
            .any(|w| w.len() == run && w.iter().all(|e| e.empty_below == Some(true)));
        if confirmed {
            TangentStatus::Nonmember
        } else {
            TangentStatus::Inconclusive
        }
    };
    let note = match status {
        TangentStatus::Member => "a feasible perturbation was found at every level".to_string(),
        TangentStatus::Nonmember => format!(
            "{} consecutive levels with no sampled feasible point for any t ≤ t_k",
            schedule.confirm_levels
        ),
        TangentStatus::Inconclusive => {
            "some levels lack a feasible perturbation but emptiness was not confirmed".to_string()
        }
    };
    Ok(TangentVerdict {
        status,
        evidence,
        note,
    })
}

/// `∇f(x̄)u`, or `None` when `L` is given and `u ∉ cone L`.
pub fn derivative_image(
    f: &SmoothMap,
    xbar: &Vector,
    u: &Vector,
    l: Option<&DirectionSet>,
) -> Result<Option<Vector>> {
    if let Some(l) = l {
        if !l.cone_contains(u)? {
            return Ok(None);
        }
    }
    f.directional(xbar, u).map(Some)
}
