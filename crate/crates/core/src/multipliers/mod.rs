//! LP engine and multiplier certificates.

pub mod lp;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::certify::{Constraint, Problem, FEAS_TOL};
use crate::error::{check_dim, Error, Result};
use crate::geometry::{DirectionSet, HalfspaceCone, Vector, TOL};
use crate::sets::PolyhedralSet;
use crate::smooth::SmoothMap;
use lp::{lp_feasible, LpOutcome, LpProblem};

/// Builds `φ ∈ X*` linear in the LP variables: `φ = Σ_v x_v G_v`, where
/// `G_v` is the functional contributed by variable `v`.
struct FunctionalLp {
    lp: LpProblem,
    /// Per variable, its contribution to `φ` (or zeros).
    columns: Vec<Vec<f64>>,
    dim: usize,
}

impl FunctionalLp {
    fn new(dim: usize) -> Self {
        FunctionalLp {
            lp: LpProblem::new(0),
            columns: Vec::new(),
            dim,
        }
    }

    fn add_var(&mut self, column: Vec<f64>, nonneg: bool) -> usize {
        let idx = self.columns.len();
        self.columns.push(column);
        let mut next = LpProblem::new(idx + 1);
        for j in 0..idx {
            if self.lp.is_nonneg(j) {
                next.set_nonneg(j);
            }
        }
        if nonneg {
            next.set_nonneg(idx);
        }
        self.lp = next;
        idx
    }

    fn functional_row(&self, u: &[f64]) -> Vec<f64> {
        self.columns
            .iter()
            .map(|c| c.iter().zip(u).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn phi(&self, x: &[f64]) -> Vector {
        let mut out = vec![0.0; self.dim];
        for (xv, c) in x.iter().zip(&self.columns) {
            for (o, ci) in out.iter_mut().zip(c) {
                *o += xv * ci;
            }
        }
        Vector::from_vec_unchecked(out)
    }
}

/// Row `r` of the whole LP, padded to `total` variables.
fn padded(row: Vec<f64>, total: usize) -> Vec<f64> {
    let mut r = row;
    r.resize(total, 0.0);
    r
}

/// Adds the requirement `φ(u) ≥ 0` for all `u ∈ cone L`; for cone sections
/// this is `φ = Σ ρ_r r` with `ρ ≥ 0` over the section's rows.
fn add_dual_of_l(
    vars: &mut FunctionalLp,
    l: &DirectionSet,
) -> (Vec<Vec<f64>>, Vec<(Vec<f64>, f64)>) {
    // Returned as pending (ineq rows, eq rows) in terms of the final var count.
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    match l {
        DirectionSet::Finite { directions, .. } => {
            for d in directions {
                ineqs.push(vars.functional_row(d.as_slice()));
            }
        }
        DirectionSet::ConeSection(cone) => {
            let n = vars.dim;
            let first = vars.columns.len();
            for r in cone.rows() {
                vars.add_var(r.neg().into_vec(), true);
            }
            let _ = first;
            // φ − Σ ρ_r r = 0, coordinate-wise; ρ columns were added with −r.
            for k in 0..n {
                let e = Vector::unit(n, k);
                eqs.push((vars.functional_row(e.as_slice()), 0.0));
            }
        }
    }
    (ineqs, eqs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    YstarEEq1,
    SumEq1,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FritzJohnCert {
    /// Weights over the rows of `K`; `y* = Σ w_i a_i`.
    pub y_weights: Vec<f64>,
    pub ystar: Vector,
    /// Weights over the rows of `Q`; `z* = Σ s_j q_j`.
    pub z_weights: Vec<f64>,
    pub zstar: Vector,
    /// `y*∘∇f(x̄) + z*∘∇g(x̄)`, nonnegative on `cone L`.
    pub functional: Vector,
    pub normalization: Normalization,
}

/// Constraint map `g` given by Jacobian rows at `x̄`, with `g(x̄) ∈ −Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearizedConstraint {
    pub jacobian: Vec<Vec<f64>>,
    pub q: HalfspaceCone,
}

impl LinearizedConstraint {
    pub fn from_map(g: &SmoothMap, q: &HalfspaceCone, xbar: &Vector) -> Result<Self> {
        check_dim(g.output_dim(), q.dim())?;
        let gx = g.eval(xbar)?;
        if !q.contains(&gx.neg(), false)? {
            return Err(Error::NotInSet(format!("g(x̄) = {gx} is not in −Q")));
        }
        Ok(LinearizedConstraint {
            jacobian: g.jacobian(xbar)?,
            q: q.clone(),
        })
    }

    /// Active inequalities `μ_i ≤ 0` and all equalities `ν_j = 0` as
    /// `g = (μ_I, ν)`, `Q = R^|I|_+ × {0}`. Inactive inequalities do not
    /// constrain the problem near `x̄` and are dropped.
    pub fn from_ineq_eq(mu: &[SmoothMap], nu: &[SmoothMap], xbar: &Vector) -> Result<Option<Self>> {
        let mut jac = Vec::new();
        let mut kinds = Vec::new();
        for g in mu {
            if g.eval(xbar)?[0].abs() <= FEAS_TOL {
                jac.push(g.jacobian(xbar)?.remove(0));
                kinds.push(true);
            }
        }
        for g in nu {
            jac.push(g.jacobian(xbar)?.remove(0));
            kinds.push(false);
        }
        if jac.is_empty() {
            return Ok(None);
        }
        let m = jac.len();
        let mut rows = Vec::new();
        for (i, ineq) in kinds.iter().enumerate() {
            rows.push(Vector::unit(m, i));
            if !ineq {
                rows.push(Vector::unit(m, i).neg());
            }
        }
        Ok(Some(LinearizedConstraint {
            jacobian: jac,
            q: HalfspaceCone::new(rows)?,
        }))
    }
}

fn compose(row: &Vector, jac: &[Vec<f64>], n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| jac.iter().zip(row.as_slice()).map(|(r, a)| a * r[j]).sum())
        .collect()
}

fn combine(weights: &[f64], rows: &[Vector], dim: usize) -> Vector {
    let mut out = vec![0.0; dim];
    for (w, r) in weights.iter().zip(rows) {
        for (o, ri) in out.iter_mut().zip(r.as_slice()) {
            *o += w * ri;
        }
    }
    Vector::from_vec_unchecked(out)
}

fn finish(vars: FunctionalLp, ineqs: Vec<Vec<f64>>, eqs: Vec<(Vec<f64>, f64)>) -> (LpProblem, Vec<Vec<f64>>) {
    let total = vars.columns.len();
    let mut lp = vars.lp;
    for r in ineqs {
        lp.geq(padded(r, total), 0.0);
    }
    for (r, b) in eqs {
        lp.equals(padded(r, total), b);
    }
    (lp, vars.columns)
}

/// Searches `y* ∈ K⁺`, `z* ∈ Q⁺`, `Σ weights = 1`, with
/// `(y*∘∇f(x̄) + z*∘∇g(x̄))(u) ≥ 0` on `cone L`.
pub fn fritz_john(p: &Problem, g: Option<&LinearizedConstraint>) -> Result<Option<FritzJohnCert>> {
    p.validate()?;
    let n = p.xbar.dim();
    let jf = p.f.jacobian(&p.xbar)?;
    let mut vars = FunctionalLp::new(n);
    let kr = p.k.rows().len();
    for a in p.k.rows() {
        vars.add_var(compose(a, &jf, n), true);
    }
    let qr = if let Some(g) = g {
        check_dim(n, g.jacobian.first().map_or(n, Vec::len))?;
        check_dim(g.jacobian.len(), g.q.dim())?;
        for q in g.q.rows() {
            vars.add_var(compose(q, &g.jacobian, n), true);
        }
        g.q.rows().len()
    } else {
        0
    };
    let (ineqs, mut eqs) = add_dual_of_l(&mut vars, &p.l);
    let total = vars.columns.len();
    let mut norm = vec![0.0; total];
    norm[..kr + qr].iter_mut().for_each(|v| *v = 1.0);
    eqs.push((norm, 1.0));
    let (lp, columns) = finish(vars, ineqs, eqs);
    let Some(x) = lp_feasible(&lp)? else {
        return Ok(None);
    };
    let x = x.into_vec();
    let y_weights = x[..kr].to_vec();
    let z_weights = x[kr..kr + qr].to_vec();
    let ystar = combine(&y_weights, p.k.rows(), p.k.dim());
    let zstar = match g {
        Some(g) => combine(&z_weights, g.q.rows(), g.q.dim()),
        None => Vector::zeros(0),
    };
    let functional = {
        let mut tmp = FunctionalLp::new(n);
        tmp.columns = columns[..kr + qr].to_vec();
        tmp.phi(&x[..kr + qr])
    };
    Ok(Some(FritzJohnCert {
        y_weights,
        ystar,
        z_weights,
        zstar,
        functional,
        normalization: Normalization::SumEq1,
    }))
}

/// Fritz John search using the problem's own `μ/ν` constraints.
pub fn fritz_john_problem(p: &Problem) -> Result<Option<FritzJohnCert>> {
    let g = match &p.constraint {
        Constraint::None => None,
        Constraint::IneqEq { mu, nu } => LinearizedConstraint::from_ineq_eq(mu, nu, &p.xbar)?,
        Constraint::Set { .. } => {
            return Err(Error::Invalid(
                "Fritz John search needs smooth constraints g(x) ∈ −Q, not a set".into(),
            ))
        }
    };
    fritz_john(p, g.as_ref())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierCert {
    pub y_weights: Vec<f64>,
    pub ystar: Vector,
    pub lambda: Vec<f64>,
    pub tau: Vec<f64>,
    pub normalization: Normalization,
    /// `−(y*∘∇f + Σλ∇μ + Στ∇ν)`, an element of `L⁻`.
    pub residual_in_lpolar: Vector,
    pub hypotheses: Vec<String>,
}

const KKT_HYPOTHESES: [&str; 3] = [
    "cone L is convex",
    "the constraint map is directionally metrically subregular",
    "a none answer refutes minimality only under these hypotheses",
];

/// KKT search with `y*(e) = 1`, `λ ≥ 0`, `λ_i = 0` on inactive `μ_i`.
pub fn kkt_multipliers(p: &Problem, e: &Vector) -> Result<Option<MultiplierCert>> {
    p.validate()?;
    check_dim(p.k.dim(), e.dim())?;
    if !p.k.contains(e, true)? {
        return Err(Error::NotInterior);
    }
    let (mu, nu): (&[SmoothMap], &[SmoothMap]) = match &p.constraint {
        Constraint::None => (&[], &[]),
        Constraint::IneqEq { mu, nu } => (mu, nu),
        Constraint::Set { .. } => {
            return Err(Error::Invalid(
                "KKT search needs inequality/equality constraints".into(),
            ))
        }
    };
    let n = p.xbar.dim();
    let jf = p.f.jacobian(&p.xbar)?;
    let mut vars = FunctionalLp::new(n);
    let kr = p.k.rows().len();
    for a in p.k.rows() {
        vars.add_var(compose(a, &jf, n), true);
    }
    let mut inactive = Vec::new();
    for (i, g) in mu.iter().enumerate() {
        let grad = g.jacobian(&p.xbar)?.remove(0);
        vars.add_var(grad, true);
        if g.eval(&p.xbar)?[0] < -FEAS_TOL {
            inactive.push(kr + i);
        }
    }
    for g in nu {
        vars.add_var(g.jacobian(&p.xbar)?.remove(0), false);
    }
    let (ineqs, mut eqs) = add_dual_of_l(&mut vars, &p.l);
    let total = vars.columns.len();
    let mut norm = vec![0.0; total];
    for (i, a) in p.k.rows().iter().enumerate() {
        norm[i] = a.dot(e);
    }
    eqs.push((norm, 1.0));
    for &i in &inactive {
        let mut r = vec![0.0; total];
        r[i] = 1.0;
        eqs.push((r, 0.0));
    }
    let m = mu.len();
    let (mut lp, columns) = finish(vars, ineqs, eqs);
    let mut obj = vec![0.0; total];
    obj[kr..kr + m].iter_mut().for_each(|v| *v = 1.0);
    lp.minimize(obj);
    let x = match lp.solve()? {
        LpOutcome::Optimal(s) => s.x,
        LpOutcome::Infeasible { .. } => return Ok(None),
        LpOutcome::Unbounded { .. } => {
            return Err(Error::NumericalFailure("KKT objective is bounded below by 0".into()))
        }
    };
    let used = kr + m + nu.len();
    let mut tmp = FunctionalLp::new(n);
    tmp.columns = columns[..used].to_vec();
    let phi = tmp.phi(&x[..used]);
    let y_weights = x[..kr].to_vec();
    Ok(Some(MultiplierCert {
        ystar: combine(&y_weights, p.k.rows(), p.k.dim()),
        y_weights,
        lambda: x[kr..kr + m].iter().map(|v| v.max(0.0)).collect(),
        tau: x[kr + m..used].to_vec(),
        normalization: Normalization::YstarEEq1,
        residual_in_lpolar: phi.neg(),
        hypotheses: KKT_HYPOTHESES.iter().map(|s| s.to_string()).collect(),
    }))
}

/// Caller-asserted convexity structure for the sufficiency proposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvexityAssertion {
    pub f_k_convex: bool,
    pub mu_convex: bool,
    pub nu_affine: bool,
    pub cone_l_convex: bool,
}

impl ConvexityAssertion {
    pub fn all() -> Self {
        ConvexityAssertion {
            f_k_convex: true,
            mu_convex: true,
            nu_affine: true,
            cone_l_convex: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SufficiencyOutcome {
    /// Global weak directional minimum, conditional on the assertion.
    GloballyWeaklyCertified,
    AssertionRefuted,
    NotAsserted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityFailure {
    pub what: String,
    pub x: Vector,
    pub y: Vector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SufficiencyCertReport {
    pub outcome: SufficiencyOutcome,
    pub pairs_checked: usize,
    pub failure: Option<ConvexityFailure>,
}

pub const SPOT_CHECK_PAIRS: usize = 200;
const SPOT_BOX: f64 = 2.0;

/// Re-validates `cert` and spot-checks the asserted convexity on random
/// midpoint pairs around `x̄`.
pub fn sufficiency_certificate(
    p: &Problem,
    cert: &MultiplierCert,
    assertion: &ConvexityAssertion,
) -> Result<SufficiencyCertReport> {
    p.validate()?;
    let (mu, nu): (&[SmoothMap], &[SmoothMap]) = match &p.constraint {
        Constraint::None => (&[], &[]),
        Constraint::IneqEq { mu, nu } => (mu, nu),
        Constraint::Set { .. } => {
            return Err(Error::Invalid("sufficiency needs μ/ν constraints".into()))
        }
    };
    validate_cert(p, cert, mu, nu)?;
    let asserted = assertion.f_k_convex
        && assertion.cone_l_convex
        && (mu.is_empty() || assertion.mu_convex)
        && (nu.is_empty() || assertion.nu_affine);
    if !asserted {
        return Ok(SufficiencyCertReport {
            outcome: SufficiencyOutcome::NotAsserted,
            pairs_checked: 0,
            failure: None,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.grid.seed);
    let n = p.xbar.dim();
    let mut checked = 0;
    for _ in 0..SPOT_CHECK_PAIRS {
        let x = Vector::from_vec_unchecked(
            (0..n).map(|i| p.xbar[i] + rng.gen_range(-SPOT_BOX..SPOT_BOX)).collect(),
        );
        let y = Vector::from_vec_unchecked(
            (0..n).map(|i| p.xbar[i] + rng.gen_range(-SPOT_BOX..SPOT_BOX)).collect(),
        );
        let mid = x.add(&y).scale(0.5);
        if let Some(what) = midpoint_failure(&p.f, &p.k, mu, nu, &x, &y, &mid) {
            return Ok(SufficiencyCertReport {
                outcome: SufficiencyOutcome::AssertionRefuted,
                pairs_checked: checked + 1,
                failure: Some(ConvexityFailure { what, x, y }),
            });
        }
        checked += 1;
    }
    Ok(SufficiencyCertReport {
        outcome: SufficiencyOutcome::GloballyWeaklyCertified,
        pairs_checked: checked,
        failure: None,
    })
}

/// Name of the first midpoint inequality that fails, if any. Pairs where a
/// map is undefined are skipped.
fn midpoint_failure(
    f: &SmoothMap,
    k: &HalfspaceCone,
    mu: &[SmoothMap],
    nu: &[SmoothMap],
    x: &Vector,
    y: &Vector,
    mid: &Vector,
) -> Option<String> {
    let tol = |a: f64| 1e-9 * (1.0 + a.abs());
    if let (Ok(fx), Ok(fy), Ok(fm)) = (f.eval(x), f.eval(y), f.eval(mid)) {
        let gap = fx.add(&fy).scale(0.5).sub(&fm);
        let scale = fx.norm_inf().max(fy.norm_inf());
        if k.rows().iter().any(|a| a.dot(&gap) < -tol(scale)) {
            return Some("f is not K-convex".into());
        }
    }
    for (i, g) in mu.iter().enumerate() {
        if let (Ok(a), Ok(b), Ok(m)) = (g.eval(x), g.eval(y), g.eval(mid)) {
            let avg = 0.5 * (a[0] + b[0]);
            if m[0] > avg + tol(avg) {
                return Some(format!("mu[{i}] is not convex"));
            }
        }
    }
    for (j, g) in nu.iter().enumerate() {
        if let (Ok(a), Ok(b), Ok(m)) = (g.eval(x), g.eval(y), g.eval(mid)) {
            let avg = 0.5 * (a[0] + b[0]);
            if (m[0] - avg).abs() > tol(avg) {
                return Some(format!("nu[{j}] is not affine"));
            }
        }
    }
    None
}

fn validate_cert(p: &Problem, c: &MultiplierCert, mu: &[SmoothMap], nu: &[SmoothMap]) -> Result<()> {
    let bad = |m: &str| Err(Error::InvalidCertificate(m.to_string()));
    if c.y_weights.len() != p.k.rows().len() || c.lambda.len() != mu.len() || c.tau.len() != nu.len() {
        return bad("multiplier counts do not match the problem");
    }
    if c.y_weights.iter().chain(&c.lambda).any(|v| *v < -TOL) {
        return bad("negative multiplier");
    }
    let ystar = combine(&c.y_weights, p.k.rows(), p.k.dim());
    if ystar.is_zero(TOL) {
        return bad("y* is zero");
    }
    for (l, g) in c.lambda.iter().zip(mu) {
        let v = g.eval(&p.xbar)?[0];
        if (l * v).abs() > 1e-8 {
            return bad("complementarity fails");
        }
    }
    let n = p.xbar.dim();
    let jf = p.f.jacobian(&p.xbar)?;
    let mut phi = compose(&ystar, &jf, n);
    for (w, g) in c.lambda.iter().zip(mu).chain(c.tau.iter().zip(nu)) {
        let grad = g.jacobian(&p.xbar)?.remove(0);
        phi.iter_mut().zip(&grad).for_each(|(a, b)| *a += w * b);
    }
    let phi = Vector::new(phi)?;
    let ok = match &p.l {
        DirectionSet::Finite { directions, .. } => {
            directions.iter().all(|d| phi.dot(d) >= -1e-7)
        }
        DirectionSet::ConeSection(cone) => {
            let mut lp = LpProblem::new(cone.rows().len());
            lp.set_all_nonneg();
            for k in 0..n {
                lp.equals(cone.rows().iter().map(|r| r[k]).collect(), phi[k]);
            }
            lp_feasible(&lp)?.is_some()
        }
    };
    if !ok {
        return bad("stationarity residual is not in the negative polar of L");
    }
    Ok(())
}

/// Vector-mode data for the K-Lipschitz penalization condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorMode {
    pub k: HalfspaceCone,
    pub e: Vector,
    pub ell: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenalizedReport {
    pub holds: bool,
    /// `x*` (scalar mode: `∇f(x̄)`).
    pub xstar: Option<Vector>,
    /// Component of `−x*` in the normal cone `N(A, x̄)`.
    pub normal_part: Option<Vector>,
    /// Component of `−x*` in `L⁻`.
    pub polar_part: Option<Vector>,
    pub ystar: Option<Vector>,
    /// Norm used for `‖x*‖` in vector mode.
    pub norm: &'static str,
}

/// `−x* ∈ N(A, x̄) + L⁻` with `x* = ∇f(x̄)` (scalar) or `x* = ∇f(x̄)ᵀy*`,
/// `y* ∈ K⁺`, `y*(e) = 1`, `‖x*‖₁ ≤ ℓ` (vector mode).
pub fn stationarity_penalized(
    f: &SmoothMap,
    a: &PolyhedralSet,
    xbar: &Vector,
    l: &DirectionSet,
    vector_mode: Option<&VectorMode>,
) -> Result<PenalizedReport> {
    let n = xbar.dim();
    check_dim(f.input_dim(), n)?;
    check_dim(a.dim(), n)?;
    check_dim(l.dim(), n)?;
    if !a.contains(xbar)? {
        return Err(Error::NotInSet(xbar.to_string()));
    }
    let jf = f.jacobian(xbar)?;
    let active: Vec<Vector> = a
        .active(xbar, TOL)?
        .into_iter()
        .map(|i| a.rows()[i].clone())
        .collect();

    // Variables: [w (K rows) | α (active rows) | polar vars | s (abs bounds)]
    // with the identity  x* + Σ α_i(−a_i) + p = 0, i.e. −x* = n + p.
    let mut vars = FunctionalLp::new(n);
    let kr = match vector_mode {
        Some(vm) => {
            check_dim(f.output_dim(), vm.k.dim())?;
            check_dim(vm.k.dim(), vm.e.dim())?;
            if !vm.k.contains(&vm.e, true)? {
                return Err(Error::NotInterior);
            }
            for r in vm.k.rows() {
                vars.add_var(compose(r, &jf, n), true);
            }
            vm.k.rows().len()
        }
        None => {
            check_dim(1, f.output_dim())?;
            0
        }
    };
    let alpha0 = vars.columns.len();
    for r in &active {
        vars.add_var(r.neg().into_vec(), true);
    }
    let polar0 = vars.columns.len();
    match l {
        DirectionSet::Finite { .. } => {
            for k in 0..n {
                vars.add_var(Vector::unit(n, k).into_vec(), false);
            }
        }
        DirectionSet::ConeSection(cone) => {
            for r in cone.rows() {
                vars.add_var(r.neg().into_vec(), true);
            }
        }
    }
    let polar_end = vars.columns.len();
    let grad_scalar = (vector_mode.is_none()).then(|| jf[0].clone());
    let abs0 = vars.columns.len();
    if vector_mode.is_some() {
        for _ in 0..n {
            vars.add_var(vec![0.0; n], true);
        }
    }
    let total = vars.columns.len();
    let mut lp = vars.lp.clone();
    // Σ columns·x + (scalar gradient) = 0 coordinate-wise.
    for k in 0..n {
        let row: Vec<f64> = vars.columns.iter().map(|c| c[k]).collect();
        let rhs = grad_scalar.as_ref().map_or(0.0, |g| -g[k]);
        lp.equals(row, rhs);
    }
    if let DirectionSet::Finite { directions, .. } = l {
        for d in directions {
            let mut row = vec![0.0; total];
            for k in 0..n {
                row[polar0 + k] = -d[k];
            }
            lp.geq(row, 0.0);
        }
    }
    if let Some(vm) = vector_mode {
        let mut norm = vec![0.0; total];
        for (i, r) in vm.k.rows().iter().enumerate() {
            norm[i] = r.dot(&vm.e);
        }
        lp.equals(norm, 1.0);
        // s_k ≥ ±x*_k and Σ s_k ≤ ℓ.
        for k in 0..n {
            for sign in [1.0, -1.0] {
                let mut row = vec![0.0; total];
                for (i, c) in vars.columns[..kr].iter().enumerate() {
                    row[i] = -sign * c[k];
                }
                row[abs0 + k] = 1.0;
                lp.geq(row, 0.0);
            }
        }
        let mut row = vec![0.0; total];
        row[abs0..].iter_mut().for_each(|v| *v = -1.0);
        lp.geq(row, -vm.ell);
    }
    let Some(x) = lp_feasible(&lp)? else {
        return Ok(PenalizedReport {
            holds: false,
            xstar: None,
            normal_part: None,
            polar_part: None,
            ystar: None,
            norm: "l1",
        });
    };
    let x = x.into_vec();
    let part = |lo: usize, hi: usize| {
        let mut tmp = FunctionalLp::new(n);
        tmp.columns = vars.columns[lo..hi].to_vec();
        tmp.phi(&x[lo..hi])
    };
    let (xstar, ystar) = match vector_mode {
        Some(vm) => (
            part(0, kr),
            Some(combine(&x[..kr], vm.k.rows(), vm.k.dim())),
        ),
        None => (Vector::from_vec_unchecked(grad_scalar.unwrap_or_default()), None),
    };
    Ok(PenalizedReport {
        holds: true,
        xstar: Some(xstar),
        normal_part: Some(part(alpha0, polar0)),
        polar_part: Some(part(polar0, polar_end)),
        ystar,
        norm: "l1",
    })
}
