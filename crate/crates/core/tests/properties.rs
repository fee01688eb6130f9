use proptest::prelude::*;

use dirmin::certify::{
    certify_directional_min, violates, Constraint, GridSpec, Problem, Verdict,
};
use dirmin::expr::parse_expression;
use dirmin::mintime::{minimal_time, Norm, Target};
use dirmin::multipliers::kkt_multipliers;
use dirmin::scalarize::{gerstewitz_value, ScalarizationContext};
use dirmin::sets::{PolyhedralSet, Polygon};
use dirmin::smooth::SmoothMap;
use dirmin::tangent::{tangent_polyhedral, TangentCone};
use dirmin::{DirectionSet, HalfspaceCone, Vector};

fn v(c: &[f64]) -> Vector {
    Vector::new(c.to_vec()).unwrap()
}

fn unit(theta: f64) -> Vector {
    v(&[theta.cos(), theta.sin()])
}

fn quadratic(c: [f64; 5]) -> SmoothMap {
    let src = format!("({})*x0 + ({})*x1 + ({})*x0^2 + ({})*x0*x1 + ({})*x1^2", c[0], c[1], c[2], c[3], c[4]);
    SmoothMap::expressions(2, vec![parse_expression(&src).unwrap()]).unwrap()
}

fn small_grid() -> GridSpec {
    GridSpec {
        radius: 0.5,
        levels: 8,
        rays_per_level: 16,
        seed: 0,
    }
}

fn coeffs() -> impl Strategy<Value = [f64; 5]> {
    prop::array::uniform5(-2.0..2.0f64)
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

/// Closed even-odd test over every edge.
fn brute_contains(vs: &[[f64; 2]], p: [f64; 2]) -> bool {
    let n = vs.len();
    let edges = (0..n).map(|i| (vs[i], vs[(i + 1) % n]));
    if edges.clone().any(|(a, b)| on_segment(p, a, b)) {
        return true;
    }
    let mut inside = false;
    for (a, b) in edges {
        if (a[1] <= p[1] && p[1] < b[1]) || (b[1] <= p[1] && p[1] < a[1]) {
            let xc = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if p[0] < xc {
                inside = !inside;
            }
        }
    }
    inside
}

/// Star-shaped polygon with integer vertices.
fn star_polygon() -> impl Strategy<Value = Vec<[f64; 2]>> {
    prop::collection::vec((0.0..std::f64::consts::TAU, 1..6i32), 3..12).prop_filter_map("degenerate", |pts| {
        let mut pts = pts;
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut vs: Vec<[f64; 2]> = pts
            .iter()
            .map(|&(t, r)| [(f64::from(r) * t.cos()).round(), (f64::from(r) * t.sin()).round()])
            .collect();
        vs.dedup();
        (vs.len() >= 3 && vs.first() != vs.last()).then_some(vs)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn slab_index_matches_brute_force(
        vs in star_polygon(),
        probes in prop::collection::vec((-12i32..12, -12i32..12), 40),
    ) {
        let poly = Polygon::new(vs.clone()).unwrap();
        let mut pts: Vec<[f64; 2]> = probes.iter().map(|&(x, y)| [f64::from(x) / 2.0, f64::from(y) / 2.0]).collect();
        pts.extend(vs.iter().copied());
        for i in 0..vs.len() {
            let (a, b) = (vs[i], vs[(i + 1) % vs.len()]);
            pts.push([(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0]);
        }
        for p in pts {
            prop_assert_eq!(poly.contains(p), brute_contains(&vs, p), "at {:?}", p);
        }
    }

    #[test]
    fn gerstewitz_translation_and_homogeneity(
        y in prop::collection::vec(-10.0..10.0f64, 3),
        e in prop::collection::vec(0.1..3.0f64, 3),
        t in -5.0..5.0f64,
        s in 0.0..5.0f64,
    ) {
        let ctx = ScalarizationContext::new(HalfspaceCone::orthant(3), v(&e)).unwrap();
        let y = v(&y);
        let sy = gerstewitz_value(&ctx, &y).unwrap();
        let shifted = gerstewitz_value(&ctx, &y.axpy(t, ctx.e())).unwrap();
        prop_assert!((shifted - sy - t).abs() <= 1e-9 * (1.0 + sy.abs() + t.abs()));
        let scaled = gerstewitz_value(&ctx, &y.scale(s)).unwrap();
        prop_assert!((scaled - s * sy).abs() <= 1e-9 * (1.0 + s * sy.abs()));
    }

    #[test]
    fn weak_violation_implies_strong(d in prop::collection::vec(-3.0..3.0f64, 2), th in 0.2..1.3f64) {
        // K = cone between angles 0 and th + π/2.
        let k = HalfspaceCone::from_rows(vec![
            vec![0.0, 1.0],
            vec![(th + std::f64::consts::FRAC_PI_2).sin(), -(th + std::f64::consts::FRAC_PI_2).cos()],
        ]).unwrap();
        let d = v(&d);
        if violates(&k, &d, true).unwrap() {
            prop_assert!(violates(&k, &d, false).unwrap());
        }
    }

    #[test]
    fn strong_certificate_implies_weak(c in coeffs(), dirs in prop::collection::vec(0.0..std::f64::consts::TAU, 1..4)) {
        let l = DirectionSet::finite(dirs.iter().map(|&t| unit(t)).collect()).unwrap();
        let p = Problem::new(quadratic(c), HalfspaceCone::orthant(1), l, Constraint::None, v(&[0.0, 0.0]), small_grid()).unwrap();
        if certify_directional_min(&p, false).unwrap().verdict == Verdict::CertifiedOnGrid {
            prop_assert_eq!(certify_directional_min(&p, true).unwrap().verdict, Verdict::CertifiedOnGrid);
        }
    }

    #[test]
    fn refutations_are_genuine(c in coeffs(), dirs in prop::collection::vec(0.0..std::f64::consts::TAU, 1..4), weak in any::<bool>()) {
        let l = DirectionSet::finite(dirs.iter().map(|&t| unit(t)).collect()).unwrap();
        let f = quadratic(c);
        let xbar = v(&[0.0, 0.0]);
        let k = HalfspaceCone::orthant(1);
        let p = Problem::new(f.clone(), k.clone(), l.clone(), Constraint::None, xbar.clone(), small_grid()).unwrap();
        let r = certify_directional_min(&p, weak).unwrap();
        if let Some(cx) = r.counterexample {
            prop_assert_eq!(r.verdict, Verdict::Refuted);
            let d = f.eval(&cx.x).unwrap().sub(&f.eval(&xbar).unwrap());
            prop_assert!(violates(&k, &d, weak).unwrap());
            prop_assert!(l.cone_contains(&cx.x.sub(&xbar)).unwrap());
        }
    }

    #[test]
    fn certification_is_monotone_in_l(c in coeffs(), dirs in prop::collection::vec(0.0..std::f64::consts::TAU, 2..5)) {
        let f = quadratic(c);
        let build = |ds: &[f64]| {
            let l = DirectionSet::finite(ds.iter().map(|&t| unit(t)).collect()).unwrap();
            Problem::new(f.clone(), HalfspaceCone::orthant(1), l, Constraint::None, v(&[0.0, 0.0]), small_grid()).unwrap()
        };
        let big = certify_directional_min(&build(&dirs), false).unwrap().verdict;
        let small = certify_directional_min(&build(&dirs[..1]), false).unwrap().verdict;
        if big == Verdict::CertifiedOnGrid {
            prop_assert_eq!(small, Verdict::CertifiedOnGrid);
        }
    }

    #[test]
    fn full_sphere_time_bounds_restricted_time(
        dirs in prop::collection::vec(0.0..std::f64::consts::TAU, 1..5),
        x in prop::collection::vec(-4.0..4.0f64, 2),
        a in 0.0..std::f64::consts::TAU,
        b in -2.0..2.0f64,
    ) {
        let set = PolyhedralSet::new(2, vec![unit(a)], vec![b]).unwrap();
        let target = Target::Polyhedron { set };
        let x = v(&x);
        let restricted = DirectionSet::finite(dirs.iter().map(|&t| unit(t)).collect()).unwrap();
        let all = minimal_time(&DirectionSet::full_sphere(2), &x, &target, Norm::Linf).unwrap();
        let some = minimal_time(&restricted, &x, &target, Norm::Linf).unwrap();
        prop_assert!(all.value <= some.value + 1e-9);
        prop_assert!(all.value >= 0.0);
    }

    #[test]
    fn polyhedral_tangent_cones_scale(
        rows in prop::collection::vec(prop::collection::vec(-3i32..=3, 2), 1..4),
        u in prop::collection::vec(-2.0..2.0f64, 2),
        section in any::<bool>(),
    ) {
        let rows: Vec<Vector> = rows.iter().filter(|r| r.iter().any(|&c| c != 0)).map(|r| v(&[f64::from(r[0]), f64::from(r[1])])).collect();
        prop_assume!(!rows.is_empty());
        let m = rows.len();
        let a = PolyhedralSet::new(2, rows, vec![0.0; m]).unwrap();
        let l = if section {
            DirectionSet::cone_section(HalfspaceCone::from_rows(vec![vec![1.0, 0.0]]).unwrap()).unwrap()
        } else {
            DirectionSet::finite(vec![v(&[1.0, 0.0]), v(&[0.0, -1.0])]).unwrap()
        };
        let t = tangent_polyhedral(&a, &v(&[0.0, 0.0]), &l).unwrap();
        let mut members = t.sample_rays(64);
        members.push(v(&u));
        for w in members {
            if t.contains(&w).unwrap() {
                for s in [0.5, 2.0] {
                    prop_assert!(t.contains(&w.scale(s)).unwrap());
                }
                if let TangentCone::Halfspace { .. } = t {
                    prop_assert!(l.cone_contains(&w).unwrap() || w.is_zero(1e-12));
                }
            }
        }
    }

    #[test]
    fn kkt_existence_is_invariant_under_scaling_e(
        slope in -2.0..2.0f64,
        dirs in prop::collection::vec(prop::sample::select(vec![-1.0, 1.0]), 1..3),
        c in 0.1..10.0f64,
    ) {
        let f = SmoothMap::affine(vec![vec![slope]], vec![0.0]).unwrap();
        let l = DirectionSet::finite(dirs.iter().map(|&d| v(&[d])).collect()).unwrap();
        let p = Problem::new(f, HalfspaceCone::orthant(1), l, Constraint::None, v(&[0.0]), GridSpec::default()).unwrap();
        let one = kkt_multipliers(&p, &v(&[1.0])).unwrap();
        let scaled = kkt_multipliers(&p, &v(&[c])).unwrap();
        prop_assert_eq!(one.is_some(), scaled.is_some());
        if let (Some(a), Some(b)) = (one, scaled) {
            prop_assert!((a.ystar[0] - c * b.ystar[0]).abs() <= 1e-9);
        }
    }
}
