//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach stdout; the
//! process exits non-zero if any criterion fails.

use std::process::ExitCode;

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dirmin::certify::{Constraint, GridSpec, Problem};
use dirmin::cli::{Command, Options};
use dirmin::expr::parse_expression;
use dirmin::gallery;
use dirmin::mintime::{minimal_time, Norm, Target};
use dirmin::multipliers::lp::{lp_feasible, LpProblem};
use dirmin::multipliers::{fritz_john_problem, kkt_multipliers, LinearizedConstraint};
use dirmin::scalarize::{gerstewitz_subdiff, gerstewitz_value, ScalarizationContext};
use dirmin::sets::PolyhedralSet;
use dirmin::smooth::SmoothMap;
use dirmin::tangent::{active_cone, affine_preimage, tangent_membership_sampled, TSchedule, TangentStatus};
use dirmin::{DirectionSet, HalfspaceCone, Vector};

type Check = Result<String, String>;

fn v(c: &[f64]) -> Vector {
    Vector::new(c.to_vec()).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// 1 ------------------------------------------------------------------------

fn gallery_reproduction() -> Check {
    let opts = Options::default();
    let mut cases = 0;
    for name in gallery::NAMES {
        let out = gallery::run(name, &opts).map_err(|e| format!("{name}: {e}"))?;
        for c in out.result["cases"].as_array().unwrap() {
            cases += 1;
            ensure(c["matches_expected"] == true, || {
                format!("{name}/{}: got {}, expected {}", c["label"], c["outcome"], c["expected"])
            })?;
            if c["command"] == "certify" || c["command"] == "certify-set" {
                let grid = &c["result"]["report"]["grid"];
                ensure(grid["radius"] == 0.5 && grid["levels"] == 21, || format!("{name}: grid {grid}"))?;
                ensure(grid["rays_per_level"].as_u64().unwrap() >= 64, || {
                    format!("{name}: fewer than 64 rays per level")
                })?;
            }
        }
    }
    Ok(format!("{cases} cases over {} examples match", gallery::NAMES.len()))
}

// 2 ------------------------------------------------------------------------

fn cardioid_tangent() -> Check {
    let e = gallery::entry("cardioid-tangent").unwrap();
    let mut statuses = Vec::new();
    for c in &e.cases {
        let f = &c.file;
        let a = f.set_spec().unwrap().compile().unwrap();
        let l = f.l_set().unwrap();
        let u = f.direction().unwrap();
        let verdict =
            tangent_membership_sampled(&a, &f.xbar().unwrap(), &l, &u, &TSchedule::default()).map_err(|e| e.to_string())?;
        ensure(!verdict.evidence.is_empty(), || format!("{}: no evidence recorded", c.label))?;
        ensure(l.cone_contains(&u).unwrap(), || "u outside cone L".into())?;
        statuses.push((verdict.status, verdict.evidence.len()));
    }
    ensure(
        statuses[0].0 == TangentStatus::Nonmember && statuses[1].0 == TangentStatus::Member,
        || format!("statuses {statuses:?}"),
    )?;
    Ok(format!(
        "restricted: nonmember ({} levels), unrestricted: member ({} levels)",
        statuses[0].1, statuses[1].1
    ))
}

// 3 ------------------------------------------------------------------------

/// `inf{λ : λe − y ∈ K}` by bisection on row membership.
fn bisection_oracle(rows: &[Vec<f64>], e: &[f64], y: &[f64]) -> f64 {
    let inside = |lam: f64| {
        rows.iter()
            .all(|a| a.iter().zip(e.iter().zip(y)).map(|(ai, (ei, yi))| ai * (lam * ei - yi)).sum::<f64>() >= 0.0)
    };
    let (mut lo, mut hi) = (-1.0, 1.0);
    while inside(lo) {
        lo *= 2.0;
    }
    while !inside(hi) {
        hi *= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn gerstewitz_suite() -> Check {
    let cones: [(Vec<Vec<f64>>, Vec<f64>); 2] = [
        (vec![vec![1.0, 2.0], vec![3.0, -1.0]], vec![1.0, 1.0]),
        (
            vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![1.0, 1.0, -1.0]],
            vec![1.0, 1.0, 1.0],
        ),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    for (rows, e) in &cones {
        let n = e.len();
        let k = HalfspaceCone::from_rows(rows.clone()).unwrap();
        let ctx = ScalarizationContext::new(k.clone(), v(e)).unwrap();
        let s = |y: &Vector| gerstewitz_value(&ctx, y).unwrap();
        let rand_vec =
            |rng: &mut ChaCha8Rng, scale: f64| v(&(0..n).map(|_| rng.gen_range(-scale..scale)).collect::<Vec<_>>());
        for _ in 0..500 {
            samples += 1;
            let y = rand_vec(&mut rng, 5.0);
            let sy = s(&y);
            let oracle = bisection_oracle(rows, e, y.as_slice());
            worst = worst.max((sy - oracle).abs());
            ensure((sy - oracle).abs() <= 1e-7, || format!("value {sy} vs oracle {oracle} at {y}"))?;

            let delta = 1e-6 * (y.norm() + 1.0);
            let below = y.axpy(-(sy - delta), &ctx.e().clone()).neg();
            let above = y.axpy(-(sy + delta), &ctx.e().clone()).neg();
            ensure(!k.contains(&below, true).unwrap() && k.contains(&above, true).unwrap(), || {
                format!("level set at {y}")
            })?;

            for t in [-1.0, 0.3, 2.0] {
                let shifted = s(&y.axpy(t, ctx.e()));
                ensure((shifted - sy - t).abs() <= 1e-9, || format!("translation t={t} at {y}"))?;
            }

            let y2 = rand_vec(&mut rng, 5.0);
            ensure(s(&y.add(&y2)) <= sy + s(&y2) + 1e-9, || format!("subadditivity at {y}, {y2}"))?;
            let t = rng.gen_range(0.0..4.0);
            ensure((s(&y.scale(t)) - t * sy).abs() <= 1e-9 * (1.0 + t * sy.abs()), || {
                format!("homogeneity t={t} at {y}")
            })?;

            let d = loop {
                let d = rand_vec(&mut rng, 3.0);
                if k.contains(&d, false).unwrap() {
                    break d;
                }
            };
            ensure(sy <= s(&y.add(&d)) + 1e-9, || format!("monotonicity at {y} + {d}"))?;

            let w = gerstewitz_subdiff(&ctx, &y).map_err(|e| e.to_string())?.witness;
            for _ in 0..5 {
                let z = rand_vec(&mut rng, 5.0);
                ensure(s(&z) >= sy + w.dot(&z.sub(&y)) - 1e-9, || format!("subgradient {w} at {y}, {z}"))?;
            }
        }
    }
    Ok(format!("{samples} samples, max |closed form - bisection| = {worst:.2e}"))
}

// 4 ------------------------------------------------------------------------

fn sector_cone(alpha: f64, beta: f64) -> HalfspaceCone {
    HalfspaceCone::from_rows(vec![
        vec![-alpha.sin(), alpha.cos()],
        vec![beta.sin(), -beta.cos()],
    ])
    .unwrap()
}

/// Smallest box half-width around `x` meeting `{a·y ≥ b}`, by bisection with
/// polygon clipping.
fn linf_distance_oracle(x: &[f64; 2], rows: &[[f64; 2]], offsets: &[f64]) -> f64 {
    let meets = |t: f64| {
        let mut poly = vec![
            [x[0] - t, x[1] - t],
            [x[0] + t, x[1] - t],
            [x[0] + t, x[1] + t],
            [x[0] - t, x[1] + t],
        ];
        for (a, &b) in rows.iter().zip(offsets) {
            let g = |p: &[f64; 2]| a[0] * p[0] + a[1] * p[1] - b;
            let mut next = Vec::new();
            for i in 0..poly.len() {
                let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
                let (gp, gq) = (g(&p), g(&q));
                if gp >= 0.0 {
                    next.push(p);
                }
                if (gp >= 0.0) != (gq >= 0.0) {
                    let s = gp / (gp - gq);
                    next.push([p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])]);
                }
            }
            poly = next;
            if poly.is_empty() {
                return false;
            }
        }
        true
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    if meets(0.0) {
        return 0.0;
    }
    while !meets(hi) {
        hi *= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if meets(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn random_polyhedron(rng: &mut ChaCha8Rng) -> (Vec<[f64; 2]>, Vec<f64>) {
    // Built around a known interior point so it is never empty.
    let c = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
    let m = rng.gen_range(1..=4);
    let mut rows = Vec::new();
    let mut offs = Vec::new();
    for _ in 0..m {
        let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let a = [th.cos(), th.sin()];
        rows.push(a);
        offs.push(a[0] * c[0] + a[1] * c[1] - rng.gen_range(0.0..2.0));
    }
    (rows, offs)
}

fn mintime_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);

    // Point targets against sector cones and finite direction sets.
    let mut finite_hits = 0;
    for _ in 0..100 {
        let alpha = rng.gen_range(0.0..std::f64::consts::TAU);
        let beta = alpha + rng.gen_range(0.1..3.0);
        let l = DirectionSet::cone_section(sector_cone(alpha, beta)).unwrap();
        let x = v(&[rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)]);
        let th = alpha + rng.gen_range(-1.0..4.0);
        let r = rng.gen_range(0.1..3.0);
        let u = x.add(&v(&[r * th.cos(), r * th.sin()]));
        let inside = th >= alpha && th <= beta;
        let got = minimal_time(&l, &x, &Target::Point { point: u }, Norm::L2).unwrap();
        ensure(got.value.is_finite() == inside, || format!("finiteness at angle {th} in [{alpha}, {beta}]"))?;
        if inside {
            finite_hits += 1;
            ensure((got.value - r).abs() <= 1e-12, || format!("value {} vs {r}", got.value))?;
        }

        let dirs: Vec<Vector> = (0..3)
            .map(|_| {
                let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                v(&[t.cos(), t.sin()])
            })
            .collect();
        let lf = DirectionSet::finite(dirs.clone()).unwrap();
        let pick = &dirs[rng.gen_range(0..3)];
        let on_ray = x.axpy(r, pick);
        let got = minimal_time(&lf, &x, &Target::Point { point: on_ray }, Norm::L2).unwrap();
        ensure(!got.approximate && (got.value - r).abs() <= 1e-12, || format!("finite L value {}", got.value))?;
    }

    // Full sphere, linf: LP against clipping oracle.
    let full = DirectionSet::full_sphere(2);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (rows, offs) = random_polyhedron(&mut rng);
        let x = [rng.gen_range(-6.0..6.0), rng.gen_range(-6.0..6.0)];
        let set = PolyhedralSet::new(2, rows.iter().map(|a| v(a)).collect(), offs.clone()).unwrap();
        let got = minimal_time(&full, &v(&x), &Target::Polyhedron { set }, Norm::Linf).unwrap();
        let oracle = linf_distance_oracle(&x, &rows, &offs);
        worst = worst.max((got.value - oracle).abs());
        ensure(!got.approximate && (got.value - oracle).abs() <= 1e-6, || {
            format!("T = {} vs distance {oracle} at {x:?}", got.value)
        })?;
    }

    // Monotonicity in L with nested finite direction sets.
    for _ in 0..100 {
        let big: Vec<Vector> = (0..6)
            .map(|_| {
                let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                v(&[t.cos(), t.sin()])
            })
            .collect();
        let small = big[..rng.gen_range(1..6)].to_vec();
        let (rows, offs) = random_polyhedron(&mut rng);
        let set = PolyhedralSet::new(2, rows.iter().map(|a| v(a)).collect(), offs).unwrap();
        let x = v(&[rng.gen_range(-6.0..6.0), rng.gen_range(-6.0..6.0)]);
        let target = Target::Polyhedron { set };
        let t_big = minimal_time(&DirectionSet::finite(big).unwrap(), &x, &target, Norm::L2).unwrap();
        let t_small = minimal_time(&DirectionSet::finite(small).unwrap(), &x, &target, Norm::L2).unwrap();
        ensure(t_big.value <= t_small.value, || format!("{} > {}", t_big.value, t_small.value))?;
    }
    Ok(format!(
        "point targets exact ({finite_hits}/100 reachable), linf max |LP - oracle| = {worst:.2e}, monotone on 100"
    ))
}

// 5 ------------------------------------------------------------------------

fn scalar_problem(f: &str, l: &[&[f64]], constraint: Constraint, xbar: f64) -> Problem {
    let map = SmoothMap::expressions(1, vec![parse_expression(f).unwrap()]).unwrap();
    let l = DirectionSet::finite(l.iter().map(|d| v(d)).collect()).unwrap();
    Problem::new(map, HalfspaceCone::orthant(1), l, constraint, v(&[xbar]), GridSpec::default()).unwrap()
}

fn kkt_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut with = 0;
    for i in 0..100 {
        let xbar: f64 = rng.gen_range(-2.0..2.0);
        let b: f64 = rng.gen_range(-2.0..2.0);
        // Every tenth problem is exactly stationary.
        let slope = if i % 10 == 0 { 0.0 } else { rng.gen_range(-2.0..2.0) };
        let a = slope - 2.0 * b * xbar;
        let p = scalar_problem(&format!("({a})*x0 + ({b})*x0^2"), &[&[1.0]], Constraint::None, xbar);
        let found = kkt_multipliers(&p, &v(&[1.0])).map_err(|e| e.to_string())?.is_some();
        ensure(found == (slope >= -1e-9), || format!("f' = {slope}: multipliers {found}"))?;
        with += usize::from(found);
    }

    let mu = SmoothMap::expressions(1, vec![parse_expression("-x0").unwrap()]).unwrap();
    let p = scalar_problem("x0", &[&[-1.0], &[1.0]], Constraint::IneqEq { mu: vec![mu], nu: vec![] }, 0.0);
    let cert = kkt_multipliers(&p, &v(&[1.0]))
        .map_err(|e| e.to_string())?
        .ok_or("hand-checked example has no multipliers")?;
    ensure((cert.lambda[0] - 1.0).abs() <= 1e-9 && (cert.ystar[0] - 1.0).abs() <= 1e-9, || {
        format!("lambda {:?}, y* {}", cert.lambda, cert.ystar)
    })?;
    let lin = LinearizedConstraint::from_ineq_eq(
        &[SmoothMap::expressions(1, vec![parse_expression("-x0").unwrap()]).unwrap()],
        &[],
        &v(&[0.0]),
    )
    .unwrap();
    ensure(lin.is_some(), || "active constraint dropped".into())?;

    let smooth = ["saddle-x2-y2", "saddle-x2-y3", "vector-2x-x", "vector-pair-saddle"];
    let mut checked = 0;
    for name in smooth {
        for c in gallery::entry(name).unwrap().cases {
            if c.command != Command::Certify || c.expected != "certified_on_grid" {
                continue;
            }
            let p = c.file.problem().unwrap();
            let fj = fritz_john_problem(&p).map_err(|e| e.to_string())?;
            ensure(fj.is_some(), || format!("{name}/{}: certified but no multipliers", c.label))?;
            checked += 1;
        }
    }
    Ok(format!(
        "1-D reduction on 100 problems ({with} with multipliers), lambda = y* = 1, {checked} certified gallery cases have multipliers"
    ))
}

// 6 ------------------------------------------------------------------------

fn int_vec(rng: &mut ChaCha8Rng, n: usize, r: i32) -> Vec<f64> {
    (0..n).map(|_| f64::from(rng.gen_range(-r..=r))).collect()
}

/// Random polyhedron containing `p`, with about half its rows active there.
fn polyhedron_through(rng: &mut ChaCha8Rng, p: &[f64]) -> PolyhedralSet {
    let m = rng.gen_range(1..=4);
    let mut rows = Vec::new();
    let mut offs = Vec::new();
    while rows.len() < m {
        let a = int_vec(rng, p.len(), 3);
        if a.iter().all(|&c| c == 0.0) {
            continue;
        }
        let ap: f64 = a.iter().zip(p).map(|(x, y)| x * y).sum();
        let slack = if rng.gen_bool(0.6) { 0.0 } else { f64::from(rng.gen_range(1..4)) };
        rows.push(v(&a));
        offs.push(ap - slack);
    }
    PolyhedralSet::new(p.len(), rows, offs).unwrap()
}

fn lattice(n: usize, r: i32) -> Vec<Vec<f64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-r..=r).map(move |c| {
                    let mut q = p.clone();
                    q.push(f64::from(c));
                    q
                })
            })
            .collect();
    }
    out
}

fn inclusion_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut members = 0;
    for _ in 0..50 {
        let n = rng.gen_range(2..=3);
        let m = rng.gen_range(1..=3);
        let xbar = int_vec(&mut rng, n, 2);
        let phi: Vec<Vec<f64>> = (0..m).map(|_| int_vec(&mut rng, n, 2)).collect();
        let image: Vec<f64> = phi.iter().map(|r| r.iter().zip(&xbar).map(|(a, b)| a * b).sum()).collect();
        let d = polyhedron_through(&mut rng, &xbar);
        let e = polyhedron_through(&mut rng, &image);
        let xb = v(&xbar);
        let td = active_cone(&d, &xb).unwrap();
        let te = active_cone(&e, &v(&image)).unwrap();
        let both = d.intersect(&affine_preimage(&e, &phi, &vec![0.0; m]).unwrap()).unwrap();
        let rhs = active_cone(&both, &xb).unwrap();
        for u in lattice(n, 3) {
            let u = v(&u);
            let phi_u = v(&phi.iter().map(|r| r.iter().zip(u.as_slice()).map(|(a, b)| a * b).sum()).collect::<Vec<_>>());
            if td.contains(&u, false).unwrap() && te.contains(&phi_u, false).unwrap() {
                members += 1;
                ensure(rhs.contains(&u, false).unwrap(), || format!("u = {u} at x̄ = {xb}"))?;
            }
        }
    }
    Ok(format!("50 triples, {members} lattice members of the left side, none outside the right side"))
}

// 7 ------------------------------------------------------------------------

type Q = Rational64;

/// Solves the square system exactly; `None` if singular.
fn solve_exact(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != Q::from_integer(0))?;
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col && a[r][col] != Q::from_integer(0) {
                let f = a[r][col] / a[col][col];
                for c in col..n {
                    let t = a[col][c];
                    a[r][c] -= f * t;
                }
                let t = b[col];
                b[r] -= f * t;
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (k - 1..n)
        .flat_map(|last| {
            combinations(last, k - 1).into_iter().map(move |mut c| {
                c.push(last);
                c
            })
        })
        .collect()
}

/// A bounded polyhedron is nonempty iff some basic solution is feasible.
fn vertex_enumeration(n: usize, ge: &[(Vec<i64>, i64)], eq: &[(Vec<i64>, i64)]) -> bool {
    let q = |x: i64| Q::from_integer(x);
    let dot = |a: &[i64], x: &[Q]| a.iter().zip(x).fold(q(0), |s, (&ai, &xi)| s + q(ai) * xi);
    let rows: Vec<&(Vec<i64>, i64)> = ge.iter().chain(eq).collect();
    combinations(rows.len(), n).into_iter().any(|pick| {
        let a = pick.iter().map(|&i| rows[i].0.iter().map(|&c| q(c)).collect()).collect();
        let b = pick.iter().map(|&i| q(rows[i].1)).collect();
        solve_exact(a, b).is_some_and(|x| {
            ge.iter().all(|(a, b)| dot(a, &x) >= q(*b)) && eq.iter().all(|(a, b)| dot(a, &x) == q(*b))
        })
    })
}

fn simplex_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut feasible = 0;
    for trial in 0..500 {
        let n = rng.gen_range(1..=3);
        let mut ge: Vec<(Vec<i64>, i64)> = Vec::new();
        let mut eq: Vec<(Vec<i64>, i64)> = Vec::new();
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            ge.push((e.clone(), -4));
            ge.push((e.iter().map(|c| -c).collect(), -4));
            if rng.gen_bool(0.3) {
                ge.push((e, 0));
            }
        }
        for _ in 0..rng.gen_range(1..=5) {
            ge.push(((0..n).map(|_| rng.gen_range(-3..=3)).collect(), rng.gen_range(-4..=4)));
        }
        if rng.gen_bool(0.3) {
            eq.push(((0..n).map(|_| rng.gen_range(-2..=2)).collect(), rng.gen_range(-3..=3)));
        }
        let mut lp = LpProblem::new(n);
        let f = |r: &[i64]| r.iter().map(|&c| c as f64).collect::<Vec<_>>();
        for (a, b) in &ge {
            lp.geq(f(a), *b as f64);
        }
        for (a, b) in &eq {
            lp.equals(f(a), *b as f64);
        }
        let simplex = lp_feasible(&lp).map_err(|e| format!("trial {trial}: {e}"))?.is_some();
        let exact = vertex_enumeration(n, &ge, &eq);
        ensure(simplex == exact, || format!("trial {trial}: simplex {simplex}, enumeration {exact}"))?;
        feasible += usize::from(exact);
    }
    Ok(format!("500 LPs agree ({feasible} feasible, {} infeasible)", 500 - feasible))
}

// 8 ------------------------------------------------------------------------

fn determinism() -> Check {
    let opts = Options::default();
    let a = gallery::run_all(&opts).map_err(|e| e.to_string())?;
    let b = gallery::run_all(&opts).map_err(|e| e.to_string())?;
    ensure(a == b, || "gallery reports differ between runs".into())?;
    Ok(format!("two gallery runs byte-identical ({} bytes)", a.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("gallery reproduction", gallery_reproduction),
        ("cardioid tangent strict inclusion", cardioid_tangent),
        ("Gerstewitz suite", gerstewitz_suite),
        ("minimal-time suite", mintime_suite),
        ("KKT / Fritz John", kkt_suite),
        ("tangent inclusion under linear preimage", inclusion_suite),
        ("simplex vs rational vertex enumeration", simplex_oracle),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
