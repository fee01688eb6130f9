//! Grid-based certification and refutation of directional Pareto minimality.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::geometry::{sphere_lattice, DirectionSet, HalfspaceCone, Vector, TOL};
use crate::multipliers::lp::{lp_feasible, LpProblem};
use crate::sets::{SetOracle, SetSpec};
use crate::smooth::SmoothMap;
use crate::tangent::{
    active_cone, tangent_membership_sampled, tangent_polyhedral, TSchedule, TangentStatus,
};

/// Tolerance for `μ ≤ 0` and `ν = 0`.
pub const FEAS_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub radius: f64,
    pub levels: usize,
    pub rays_per_level: usize,
    pub seed: u64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            radius: 0.5,
            levels: 21,
            rays_per_level: 64,
            seed: 0,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius.is_finite()) || self.levels == 0 || self.rays_per_level == 0 {
            return Err(Error::Invalid(
                "grid needs radius > 0 and positive level and ray counts".into(),
            ));
        }
        Ok(())
    }

    pub fn step(&self, k: usize) -> f64 {
        self.radius * 0.5_f64.powi(k as i32)
    }

    /// `(ray, t)` pairs in level-major order.
    pub fn points(&self, l: &DirectionSet) -> Result<Vec<(Vector, f64)>> {
        self.validate()?;
        let rays = l.rays(self.rays_per_level)?;
        let mut out = Vec::with_capacity(rays.len() * self.levels);
        for k in 0..self.levels {
            let t = self.step(k);
            out.extend(rays.iter().map(|r| (r.clone(), t)));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Constraint {
    #[default]
    None,
    Set { set: SetSpec },
    /// `μ_i(x) ≤ 0`, `ν_j(x) = 0`, each map scalar-valued.
    IneqEq {
        #[serde(default)]
        mu: Vec<SmoothMap>,
        #[serde(default)]
        nu: Vec<SmoothMap>,
    },
}

enum Feasibility {
    All,
    Set(SetOracle),
    IneqEq(Vec<SmoothMap>, Vec<SmoothMap>),
}

impl Feasibility {
    fn new(c: &Constraint, dim: usize) -> Result<Self> {
        Ok(match c {
            Constraint::None => Feasibility::All,
            Constraint::Set { set } => {
                let o = set.compile()?;
                check_dim(dim, o.dim())?;
                Feasibility::Set(o)
            }
            Constraint::IneqEq { mu, nu } => {
                for g in mu.iter().chain(nu) {
                    check_dim(dim, g.input_dim())?;
                    check_dim(1, g.output_dim())?;
                }
                Feasibility::IneqEq(mu.clone(), nu.clone())
            }
        })
    }

    fn contains(&self, x: &Vector) -> Result<bool> {
        match self {
            Feasibility::All => Ok(true),
            Feasibility::Set(o) => o.contains(x),
            Feasibility::IneqEq(mu, nu) => {
                for g in mu {
                    if g.eval(x)?[0] > FEAS_TOL {
                        return Ok(false);
                    }
                }
                for g in nu {
                    if g.eval(x)?[0].abs() > FEAS_TOL {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

/// Function minimality problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Problem {
    pub f: SmoothMap,
    pub k: HalfspaceCone,
    pub l: DirectionSet,
    #[serde(default)]
    pub constraint: Constraint,
    pub xbar: Vector,
    #[serde(default)]
    pub grid: GridSpec,
}

impl Problem {
    pub fn new(
        f: SmoothMap,
        k: HalfspaceCone,
        l: DirectionSet,
        constraint: Constraint,
        xbar: Vector,
        grid: GridSpec,
    ) -> Result<Self> {
        let p = Problem {
            f,
            k,
            l,
            constraint,
            xbar,
            grid,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.f.input_dim();
        check_dim(n, self.xbar.dim())?;
        check_dim(n, self.l.dim())?;
        check_dim(self.f.output_dim(), self.k.dim())?;
        if !self.k.is_proper()? {
            return Err(Error::Invalid("ordering cone K must be proper".into()));
        }
        self.grid.validate()?;
        if !Feasibility::new(&self.constraint, n)?.contains(&self.xbar)? {
            return Err(Error::NotInSet(self.xbar.to_string()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CertifiedOnGrid,
    Refuted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub x: Vector,
    /// `f(x) − f(x̄)` for maps, `x − x̄` for sets.
    pub difference: Vector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertReport {
    pub verdict: Verdict,
    pub counterexample: Option<Counterexample>,
    pub samples: usize,
    pub feasible_samples: usize,
    /// Certified only because no grid point was feasible.
    pub vacuous: bool,
    pub weak: bool,
    pub grid: GridSpec,
    pub rays: usize,
}

/// One evaluated grid point, for point dumps.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub x: Vector,
    pub difference: Option<Vector>,
    pub violation: bool,
}

/// Strong: `d ∈ −K` and `d ∉ K`. Weak: `d ∈ −int K`.
pub fn violates(k: &HalfspaceCone, d: &Vector, weak: bool) -> Result<bool> {
    let neg = d.neg();
    if weak {
        k.contains(&neg, true)
    } else {
        Ok(k.contains(&neg, false)? && !k.contains(d, false)?)
    }
}

fn summarize(samples: &[Sample], weak: bool, grid: GridSpec, rays: usize) -> CertReport {
    let feasible = samples.iter().filter(|s| s.difference.is_some()).count();
    let first = samples.iter().find(|s| s.violation);
    let verdict = if first.is_some() {
        Verdict::Refuted
    } else {
        Verdict::CertifiedOnGrid
    };
    CertReport {
        verdict,
        counterexample: first.map(|s| Counterexample {
            x: s.x.clone(),
            difference: s.difference.clone().expect("violations are feasible"),
        }),
        samples: samples.len(),
        feasible_samples: feasible,
        vacuous: feasible == 0,
        weak,
        grid,
        rays,
    }
}

/// Evaluates every grid point and returns them in grid order.
pub fn sample_directional_min(p: &Problem, weak: bool) -> Result<(CertReport, Vec<Sample>)> {
    p.validate()?;
    let feas = Feasibility::new(&p.constraint, p.xbar.dim())?;
    let fbar = p.f.eval(&p.xbar)?;
    let pts = p.grid.points(&p.l)?;
    let rays = pts.len() / p.grid.levels;
    let samples = pts
        .par_iter()
        .map(|(r, t)| -> Result<Sample> {
            let x = p.xbar.axpy(*t, r);
            if !feas.contains(&x)? {
                return Ok(Sample {
                    x,
                    difference: None,
                    violation: false,
                });
            }
            let d = p.f.eval(&x)?.sub(&fbar);
            let violation = violates(&p.k, &d, weak)?;
            Ok(Sample {
                x,
                difference: Some(d),
                violation,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((summarize(&samples, weak, p.grid, rays), samples))
}

pub fn certify_directional_min(p: &Problem, weak: bool) -> Result<CertReport> {
    sample_directional_min(p, weak).map(|(r, _)| r)
}

/// Set minimality: samples `x̄ + tℓ` in `M` and checks `x − x̄`.
pub fn sample_set_min(
    m: &SetSpec,
    xbar: &Vector,
    k: &HalfspaceCone,
    l: &DirectionSet,
    weak: bool,
    grid: &GridSpec,
) -> Result<(CertReport, Vec<Sample>)> {
    let oracle = m.compile()?;
    check_dim(oracle.dim(), xbar.dim())?;
    check_dim(xbar.dim(), k.dim())?;
    check_dim(xbar.dim(), l.dim())?;
    if !oracle.contains(xbar)? {
        return Err(Error::NotInSet(xbar.to_string()));
    }
    let pts = grid.points(l)?;
    let rays = pts.len() / grid.levels;
    let samples = pts
        .par_iter()
        .map(|(r, t)| -> Result<Sample> {
            let x = xbar.axpy(*t, r);
            if !oracle.contains(&x)? {
                return Ok(Sample {
                    x,
                    difference: None,
                    violation: false,
                });
            }
            let d = x.sub(xbar);
            let violation = violates(k, &d, weak)?;
            Ok(Sample {
                x,
                difference: Some(d),
                violation,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((summarize(&samples, weak, *grid, rays), samples))
}

pub fn certify_set_min(
    m: &SetSpec,
    xbar: &Vector,
    k: &HalfspaceCone,
    l: &DirectionSet,
    weak: bool,
    grid: &GridSpec,
) -> Result<CertReport> {
    sample_set_min(m, xbar, k, l, weak, grid).map(|(r, _)| r)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionCheck {
    pub u: Vector,
    pub image: Vector,
    pub in_neg_int_k: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FirstOrderReport {
    pub holds: bool,
    pub checks: Vec<DirectionCheck>,
    pub admissibility: String,
}

/// Whether `u` is an admissible direction at `x̄` for the problem's
/// constraint, with a label for the test that was applied.
fn admissible(p: &Problem, u: &Vector) -> Result<(bool, &'static str)> {
    if !p.l.cone_contains(u)? {
        return Ok((false, "cone L"));
    }
    match &p.constraint {
        Constraint::None => Ok((true, "u in cone L")),
        Constraint::Set { set } => {
            if let Some(poly) = set.as_polyhedron() {
                let t = tangent_polyhedral(&poly, &p.xbar, &p.l)?;
                Ok((t.contains(u)?, "exact polyhedral directional tangent cone"))
            } else {
                let v = tangent_membership_sampled(
                    &set.compile()?,
                    &p.xbar,
                    &p.l,
                    u,
                    &TSchedule::default(),
                )?;
                Ok((
                    v.status == TangentStatus::Member,
                    "sampled directional tangent cone",
                ))
            }
        }
        Constraint::IneqEq { mu, nu } => {
            for g in mu {
                let val = g.eval(&p.xbar)?[0];
                if val.abs() <= FEAS_TOL && g.directional(&p.xbar, u)?[0] > TOL {
                    return Ok((false, "linearized constraints"));
                }
            }
            for g in nu {
                if g.directional(&p.xbar, u)?[0].abs() > TOL {
                    return Ok((false, "linearized constraints"));
                }
            }
            Ok((true, "u in cone L, grad g(x̄)u tangent to -Q"))
        }
    }
}

/// `∇f(x̄)u ∉ −int K` for each admissible `u`; inadmissible input is an error.
pub fn check_first_order_necessary(p: &Problem, directions: &[Vector]) -> Result<FirstOrderReport> {
    p.validate()?;
    let mut checks = Vec::with_capacity(directions.len());
    let mut label = "";
    for u in directions {
        check_dim(p.xbar.dim(), u.dim())?;
        let (ok, how) = admissible(p, u)?;
        label = how;
        if !ok {
            return Err(Error::Inadmissible(format!("{u} fails the {how} test")));
        }
        let image = p.f.directional(&p.xbar, u)?;
        let in_neg_int_k = p.k.contains(&image.neg(), true)?;
        checks.push(DirectionCheck {
            u: u.clone(),
            image,
            in_neg_int_k,
        });
    }
    Ok(FirstOrderReport {
        holds: checks.iter().all(|c| !c.in_neg_int_k),
        checks,
        admissibility: label.to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SufficiencyVerdict {
    /// The tangent condition holds exactly, so the point is a minimum.
    Certified,
    /// Some tangent direction breaks the condition; no certificate.
    ConditionViolated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SufficiencyReport {
    pub verdict: SufficiencyVerdict,
    pub weak: bool,
    /// A direction of `T_B^L(M + K, x̄)` violating the condition.
    pub witness: Option<Vector>,
    /// Whether `cone L ∩ −int K` is nonempty.
    pub hypothesis_holds: bool,
}

/// LP variables `(u, p)` with `p` in the active cone `P` and `u − p ∈ K`.
fn sum_cone_lp(p_rows: &HalfspaceCone, k: &HalfspaceCone) -> LpProblem {
    let n = k.dim();
    let mut lp = LpProblem::new(2 * n);
    for a in p_rows.rows() {
        let mut c = vec![0.0; 2 * n];
        c[n..].copy_from_slice(a.as_slice());
        lp.geq(c, 0.0);
    }
    for a in k.rows() {
        let mut c = vec![0.0; 2 * n];
        for i in 0..n {
            c[i] = a[i];
            c[n + i] = -a[i];
        }
        lp.geq(c, 0.0);
    }
    lp
}

fn fix_u(lp: &mut LpProblem, u: &Vector) {
    let n = u.dim();
    for i in 0..n {
        let mut c = vec![0.0; 2 * n];
        c[i] = 1.0;
        lp.equals(c, u[i]);
    }
}

fn pad_u(row: &[f64]) -> Vec<f64> {
    let mut c = row.to_vec();
    c.extend(std::iter::repeat_n(0.0, row.len()));
    c
}

/// Exact tangent sufficient condition for polyhedral `M`:
/// weak `T_B^L(M + K, x̄) ∩ −int K = ∅`, strong `… ∩ −K ⊂ K`.
pub fn tangent_sufficiency_sets(
    m: &SetSpec,
    xbar: &Vector,
    k: &HalfspaceCone,
    l: &DirectionSet,
    weak: bool,
) -> Result<SufficiencyReport> {
    let poly = m.as_polyhedron().ok_or_else(|| {
        Error::Invalid("tangent sufficiency needs a polyhedral set M".into())
    })?;
    check_dim(poly.dim(), k.dim())?;
    check_dim(poly.dim(), l.dim())?;
    let act = active_cone(&poly, xbar)?;
    let hypothesis_holds = cone_meets_neg_int(l, k)?;

    let witness = match l {
        DirectionSet::Finite { directions, .. } => {
            let mut found = None;
            for d in directions {
                let bad = if weak {
                    k.contains(&d.neg(), true)?
                } else {
                    k.contains(&d.neg(), false)? && !k.contains(d, false)?
                };
                if !bad {
                    continue;
                }
                let mut lp = sum_cone_lp(&act, k);
                fix_u(&mut lp, d);
                if lp_feasible(&lp)?.is_some() {
                    found = Some(d.clone());
                    break;
                }
            }
            found
        }
        DirectionSet::ConeSection(sec) => {
            let n = k.dim();
            let base = {
                let mut lp = sum_cone_lp(&act, k);
                for r in sec.rows() {
                    lp.geq(pad_u(r.as_slice()), 0.0);
                }
                lp
            };
            let take_u = |x: Vector| Vector::new(x.as_slice()[..n].to_vec());
            if weak {
                let mut lp = base;
                for a in k.rows() {
                    lp.geq(pad_u(a.neg().as_slice()), 1.0);
                }
                lp_feasible(&lp)?.map(take_u).transpose()?
            } else {
                let mut found = None;
                for a in k.rows() {
                    let mut lp = base.clone();
                    for b in k.rows() {
                        lp.geq(pad_u(b.neg().as_slice()), 0.0);
                    }
                    lp.leq(pad_u(a.as_slice()), -1.0);
                    if let Some(x) = lp_feasible(&lp)? {
                        found = Some(take_u(x)?);
                        break;
                    }
                }
                found
            }
        }
    };
    Ok(SufficiencyReport {
        verdict: if witness.is_some() {
            SufficiencyVerdict::ConditionViolated
        } else {
            SufficiencyVerdict::Certified
        },
        weak,
        witness,
        hypothesis_holds,
    })
}

/// `cone L ∩ −int K ≠ ∅`.
pub fn cone_meets_neg_int(l: &DirectionSet, k: &HalfspaceCone) -> Result<bool> {
    match l {
        DirectionSet::Finite { directions, .. } => {
            for d in directions {
                if k.contains(&d.neg(), true)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        DirectionSet::ConeSection(sec) => {
            let mut lp = LpProblem::new(k.dim());
            for r in sec.rows() {
                lp.geq(r.as_slice().to_vec(), 0.0);
            }
            for a in k.rows() {
                lp.geq(a.neg().into_vec(), 1.0);
            }
            Ok(lp_feasible(&lp)?.is_some())
        }
    }
}

/// A sampled unit vector of `K ∖ −K`, if any.
pub fn k_minus_neg_k(k: &HalfspaceCone) -> Option<Vector> {
    let mut cands: Vec<Vector> = k.rows().to_vec();
    cands.extend(sphere_lattice(k.dim(), 256));
    cands.into_iter().find_map(|c| {
        let u = c.normalized().ok()?;
        (k.contains(&u, false).ok()? && !k.contains(&u.neg(), false).ok()?).then_some(u)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpennessConfig {
    pub eps_schedule: Vec<f64>,
    pub r_schedule: Vec<f64>,
    /// Step samples per ray inside `B(x̄, ε)`.
    pub steps_per_ray: usize,
    pub rays: usize,
}

impl Default for OpennessConfig {
    fn default() -> Self {
        OpennessConfig {
            eps_schedule: vec![0.5, 0.1, 0.01],
            r_schedule: (0..=20).map(|j| 0.5_f64.powi(j)).collect(),
            steps_per_ray: 2000,
            rays: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnreachableTarget {
    pub r: f64,
    pub y: Vector,
    /// Distance from `y` to the sampled image of `B(x̄, ε) ∩ (x̄ + cone L)`.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpennessWitness {
    pub eps: f64,
    pub targets: Vec<UnreachableTarget>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpennessStatus {
    /// Not directionally open: some ε defeats every sampled r.
    Witness,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpennessReport {
    pub status: OpennessStatus,
    pub witness: Option<OpennessWitness>,
    pub config: OpennessConfig,
}

fn dist_to_segment(y: &Vector, a: &Vector, b: &Vector) -> f64 {
    let ab = b.sub(a);
    let len2 = ab.dot(&ab);
    let s = if len2 > 0.0 {
        (y.sub(a).dot(&ab) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    a.axpy(s, &ab).dist(y)
}

/// Searches for `ε` such that for every `r` some `y ∈ B(ȳ, r) ∩ (ȳ − cone C)`
/// has no sampled preimage in `B(x̄, ε) ∩ (x̄ + cone L)`.
pub fn openness_falsifier(
    f: &SmoothMap,
    xbar: &Vector,
    l: &DirectionSet,
    c: &DirectionSet,
    config: &OpennessConfig,
) -> Result<OpennessReport> {
    check_dim(f.input_dim(), xbar.dim())?;
    check_dim(f.input_dim(), l.dim())?;
    check_dim(f.output_dim(), c.dim())?;
    let cdirs = c.generators()?.to_vec();
    if config.steps_per_ray < 2 || config.eps_schedule.is_empty() || config.r_schedule.is_empty() {
        return Err(Error::Invalid("openness schedules must be nonempty".into()));
    }
    let ybar = f.eval(xbar)?;
    let rays = l.rays(config.rays)?;
    let fracs = [0.999, 0.5, 0.1, 0.01];

    for &eps in &config.eps_schedule {
        // Images of each ray as polylines, uniform plus geometric steps.
        let half = config.steps_per_ray / 2;
        let mut taus: Vec<f64> = (0..=half).map(|j| eps * j as f64 / half as f64).collect();
        taus.extend((1..=half).map(|j| eps * 1e-9_f64.powf(j as f64 / half as f64)));
        taus.sort_by(f64::total_cmp);
        taus.dedup();
        let lines = rays
            .par_iter()
            .map(|r| {
                taus.iter()
                    .map(|&t| f.eval(&xbar.axpy(t, r)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let gap = |y: &Vector| {
            lines
                .iter()
                .flat_map(|line| line.windows(2).map(|w| dist_to_segment(y, &w[0], &w[1])))
                .fold(f64::INFINITY, f64::min)
        };

        let mut targets = Vec::new();
        for &r in &config.r_schedule {
            let mut found = None;
            'search: for cd in &cdirs {
                for fr in fracs {
                    let s = fr * r;
                    let y = ybar.axpy(-s, cd);
                    let g = gap(&y);
                    if g > 0.01 * s + 1e-12 {
                        found = Some(UnreachableTarget { r, y, gap: g });
                        break 'search;
                    }
                }
            }
            match found {
                Some(t) => targets.push(t),
                None => {
                    targets.clear();
                    break;
                }
            }
        }
        if !targets.is_empty() {
            return Ok(OpennessReport {
                status: OpennessStatus::Witness,
                witness: Some(OpennessWitness { eps, targets }),
                config: config.clone(),
            });
        }
    }
    Ok(OpennessReport {
        status: OpennessStatus::Inconclusive,
        witness: None,
        config: config.clone(),
    })
}
