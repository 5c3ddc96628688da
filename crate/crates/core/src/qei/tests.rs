use super::*;
use crate::circle::{CircleDiffeo, SubgroupKind};
use crate::numerics::{differentiate, uniform_nodes, Interval, RealFunction, Tail};
use crate::weights::{catalog, qei_functional, standard_bump, DecayClass, Params, WeightFunction};
use crate::ToleranceSet;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn bump() -> WeightFunction {
    catalog("bump", &Params::new()).unwrap()
}

fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let mut s = f(a) + f(b);
    for i in 1..m {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

fn zero_weight() -> WeightFunction {
    let f = RealFunction::from_samples(uniform_nodes(-1.0, 1.0, 32), vec![0.0; 32], Tail::Zero, Tail::Zero).unwrap();
    WeightFunction::new(f, Some(Interval::new(-0.9, 0.9).unwrap()), DecayClass::Compact).unwrap()
}

#[test]
fn lambda_eps_limits_and_monotonicity() {
    let g = bump();
    let eps = [1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-6];
    let ls: Vec<f64> = eps.iter().map(|&e| lambda_eps(&g, e).unwrap()).collect();
    assert!(ls.windows(2).all(|w| w[1] > w[0]));
    assert!(ls.iter().all(|&l| l > 0.0 && l < 1.0));
    assert!(1.0 - ls[5] < 0.05);
    assert!(lambda_eps(&g, 1e8).unwrap() < 1e-8);
    assert!(lambda_eps(&zero_weight(), 0.1).is_err());
    assert!(lambda_eps(&catalog("gaussian", &Params::new()).unwrap(), 0.1).is_err());
}

#[test]
fn lambda_eps_plateau_against_quadrature() {
    let mut p = Params::new();
    p.insert("core".into(), 1.0);
    p.insert("ramp".into(), 0.5);
    let g = catalog("plateau", &p).unwrap();
    let eps = 0.2;
    let oracle = simpson(
        |v| {
            let x = crate::weights::smooth_step((1.5 - v.abs()) / 0.5);
            x / (x + eps)
        },
        -1.5,
        1.5,
        200_000,
    ) / 3.0;
    assert!((lambda_eps(&g, eps).unwrap() - oracle).abs() < 1e-9);
    let core_only = (2.0 / 3.0) / (1.0 + eps);
    assert!(lambda_eps(&g, eps).unwrap() > core_only);
}

#[test]
fn eta_constraint_and_range() {
    for s in [2.0, 0.7, 5.0] {
        let eta = build_eta(s).unwrap();
        let w = eta.support().unwrap().hi;
        assert!((w - 3.0 * s).abs() < 1e-14);
        let integral = simpson(|v| eta.eval(v) / (1.0 - eta.eval(v)), -w, w, 400_000);
        assert!((integral - s).abs() < 1e-10, "{integral} vs {s}");
        assert!(eta.max_value() <= 0.5);
        assert!(eta.function().values().iter().all(|&x| (0.0..=0.5).contains(&x)));
    }
    assert!(build_eta(0.0).is_err());
}

#[test]
fn eta_scaling_doubles_constraint() {
    let e1 = build_eta(1.0).unwrap();
    let e2 = build_eta(2.0).unwrap();
    for x in [-0.9, -0.3, 0.0, 0.5] {
        assert!((e1.eval(3.0 * x) - e2.eval(6.0 * x)).abs() < 1e-10);
    }
}

#[test]
fn regularized_family_shape() {
    let g = bump();
    let eps = 1e-2;
    let fam = build_regularized_weight(&g, eps, 50.0).unwrap();
    let c = fam.corrector_support();
    assert!(c.lo > 1.0);
    for (&v, &h) in fam.h.nodes().iter().zip(fam.h.values()) {
        assert!(h >= eps / 2.0);
        if v.abs() < 1.0 {
            assert!((h - (g.eval(v) + eps)).abs() < 1e-15);
        } else if v < c.lo || v > c.hi {
            assert_eq!(h, eps);
        }
    }
    assert!(matches!(build_regularized_weight(&g, eps, 2.0), Err(crate::Error::SupportOverlap(_))));
}

#[test]
fn reparam_of_constants() {
    let nodes = uniform_nodes(-3.0, 3.0, 61);
    let one = RealFunction::from_samples(nodes.clone(), vec![1.0; 61], Tail::Affine { slope: 0.0, intercept: 1.0 }, Tail::Affine { slope: 0.0, intercept: 1.0 }).unwrap();
    let v = build_reparam(&one).unwrap();
    for x in [-10.0, -2.5, 0.0, 1.3, 7.0] {
        assert!((v.eval(x) - x).abs() < 1e-13);
    }
    let eps = 0.05;
    let h = RealFunction::from_samples(nodes, vec![eps; 61], Tail::Affine { slope: 0.0, intercept: eps }, Tail::Affine { slope: 0.0, intercept: eps }).unwrap();
    let v = build_reparam(&h).unwrap();
    for x in [-10.0, -2.5, 0.0, 1.3, 7.0] {
        assert!((v.eval(x) - x / eps).abs() < 1e-11);
    }
    let bad = RealFunction::from_samples(uniform_nodes(-3.0, 3.0, 61), vec![1.0; 61], Tail::Zero, Tail::Zero).unwrap();
    assert!(build_reparam(&bad).is_err());
}

#[test]
fn reparam_tails_share_offset_and_invert_h() {
    let fam = build_regularized_weight(&bump(), 1e-3, 60.0).unwrap();
    let v = &fam.v;
    let m = v.tail_mobius();
    let (lo, hi) = (fam.h.grid().lo(), fam.h.grid().hi());
    let alpha_l = v.eval(lo) - lo / fam.eps;
    let alpha_r = v.eval(hi) - hi / fam.eps;
    assert!((alpha_l - alpha_r).abs() < 1e-9 * v.eval(hi).abs());
    assert!((m.apply(hi + 10.0) - (hi + 10.0) / fam.eps - alpha_r).abs() < 1e-6);
    assert!(v.derivative().values().iter().zip(fam.h.values()).all(|(d, h)| (d * h - 1.0).abs() < 1e-12));
    let h = fam.h.clone();
    for (a, b) in [(-1.2, -0.4), (-0.3, 0.7), (0.9, 30.0), (fam.corrector_support().lo, fam.corrector_support().hi)] {
        let want = simpson(|x| 1.0 / h.eval(x), a, b, 200_000);
        let got = v.eval(b) - v.eval(a);
        assert!((got - want).abs() < 1e-9 * want.abs(), "[{a}, {b}]: {got} vs {want}");
    }
    let dv = differentiate(v.values(), 1).unwrap();
    let scale = v.values().max_abs();
    let worst = dv.values().iter().zip(fam.h.values()).map(|(d, h)| (d * h - 1.0).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-15 * scale / 2.4e-4 * 10.0, "{worst}");
}

fn fd_schwarzian_sqrt(h: impl Fn(f64) -> f64, v: f64, step: f64) -> f64 {
    let r = |x: f64| h(x).sqrt();
    let d2 = (-r(v + 2.0 * step) + 16.0 * r(v + step) - 30.0 * r(v) + 16.0 * r(v - step) - r(v - 2.0 * step)) / (12.0 * step * step);
    d2 / r(v)
}

#[test]
fn sharp_profile_matches_independent_formula() {
    let g = bump();
    let eps = 1e-2;
    let c = 1.0;
    let fam = build_regularized_weight(&g, eps, 50.0).unwrap();
    let p = sharp_state_profile(&fam, c).unwrap();
    let k = c / (12.0 * PI);
    let gaussian_part = |v: f64| standard_bump(v) + eps;
    let sup = p.t.max_abs();
    for v in [-0.8, -0.4, 0.0, 0.33, 0.9] {
        let want = k * fd_schwarzian_sqrt(gaussian_part, v, 1e-3);
        assert!((p.t.eval(v) - want).abs() < 1e-6 * sup, "{v}: {} vs {want}", p.t.eval(v));
    }
    let cs = fam.corrector_support();
    let corr = |v: f64| eps * (1.0 - fam.corrector(v));
    for f in [0.2, 0.5, 0.71] {
        let v = cs.lo + f * cs.length();
        let want = k * fd_schwarzian_sqrt(corr, v, 1e-3);
        assert!((p.t.eval(v) - want).abs() < 1e-6 * sup);
    }
    for v in [1.5, 20.0, cs.hi + 1.0, -5.0] {
        assert!(p.t.eval(v).abs() < 1e-12);
    }
    assert!(p.total_integral().unwrap() >= -1e-9);
}

#[test]
fn gap_matches_closed_form() {
    let g = bump();
    let c = 1.0;
    let bound = qei_functional(&g, c, &ToleranceSet::default()).unwrap();
    for eps in [1e-1, 1e-2, 1e-3] {
        let fam = build_regularized_weight(&g, eps, 80.0).unwrap();
        let lhs = sharp_state_profile(&fam, c).unwrap().weighted_integral(&g).unwrap();
        let oracle = c / (12.0 * PI)
            * simpson(
                |x| {
                    if x.abs() >= 1.0 {
                        return 0.0;
                    }
                    let gv = standard_bump(x);
                    if gv < 1e-300 {
                        return 0.0;
                    }
                    let dg = -2.0 * x / (1.0 - x * x).powi(2) * gv;
                    dg * dg / 4.0 * eps * eps / (gv * (gv + eps).powi(2))
                },
                -1.0,
                1.0,
                400_000,
            );
        assert!(((lhs - bound) - oracle).abs() < 1e-6 * bound.abs(), "ε {eps}: {} vs {oracle}", lhs - bound);
    }
}

#[test]
fn vacuum_margin_is_minus_bound() {
    let g = catalog("gaussian", &Params::new()).unwrap();
    let p = EnergyProfile::from_diffeo(&CircleDiffeo::identity(256), 1.0).unwrap();
    let m = verify_bound(&p, &g, 1.0).unwrap();
    let b = qei_functional(&g, 1.0, &ToleranceSet::default()).unwrap();
    assert!((m + b).abs() < 1e-15);
    assert!(m > 0.0);
    assert!(verify_bound(&p, &g, 2.0).is_err());
}

#[test]
fn mobius_states_have_zero_profile() {
    let t = CircleDiffeo::subgroup_element(SubgroupKind::Translation, 0.8, 1024).unwrap();
    let p = EnergyProfile::from_diffeo(&t, 1.0).unwrap();
    assert!(p.t.max_abs() < 1e-9);
    assert!(p.total_integral().unwrap().abs() < 1e-9);
}

#[test]
fn diffeo_profile_matches_line_schwarzian() {
    let rho = CircleDiffeo::random(&mut ChaCha8Rng::seed_from_u64(3), 2048, 4).unwrap();
    let c = 2.0;
    let p = EnergyProfile::from_diffeo(&rho, c).unwrap();
    for v in [-1.3, -0.2, 0.4, 0.9] {
        let shift = rho.eval(2.0 * f64::atan(v));
        let big_v = |x: f64| ((rho.eval(2.0 * x.atan()) - shift) / 2.0).tan();
        let h = 1e-3;
        let d = |k: i32| big_v(v + k as f64 * h);
        let d1 = (d(-2) - 8.0 * d(-1) + 8.0 * d(1) - d(2)) / (12.0 * h);
        let d2 = (-d(-2) + 16.0 * d(-1) - 30.0 * d(0) + 16.0 * d(1) - d(2)) / (12.0 * h * h);
        let d3 = (d(-3) - 8.0 * d(-2) + 13.0 * d(-1) - 13.0 * d(1) + 8.0 * d(2) - d(3)) / (8.0 * h * h * h);
        let want = -(c / (24.0 * PI)) * (d3 / d1 - 1.5 * (d2 / d1).powi(2));
        let got = p.t.eval(v);
        assert!((got - want).abs() < 1e-5 * want.abs().max(1e-2), "{v}: {got} vs {want}");
    }
}

#[test]
fn random_diffeo_states_respect_bound() {
    let weights = [bump(), catalog("gaussian", &Params::new()).unwrap()];
    for seed in 0..10 {
        let rho = CircleDiffeo::random(&mut ChaCha8Rng::seed_from_u64(seed), 2048, 6).unwrap();
        let p = EnergyProfile::from_diffeo(&rho, 1.0).unwrap();
        assert!(p.total_integral().unwrap() >= -1e-9);
        for g in &weights {
            assert!(verify_bound(&p, g, 1.0).unwrap() >= -1e-7);
        }
    }
}

#[test]
fn sharpness_gap_decreases() {
    let tab = sharpness_experiment(&bump(), 1.0, &[1e-1, 1e-2, 1e-3, 1e-4], NPolicy::Auto).unwrap();
    assert!(tab.rows.iter().all(|r| r.gap > 0.0));
    assert!(tab.rows.windows(2).all(|w| w[1].gap < w[0].gap));
    let last = tab.rows.last().unwrap();
    assert!(last.gap / last.bound.abs() < 0.01);
    let csv = tab.to_csv_string().unwrap();
    assert!(csv.starts_with("eps,n,lhs,bound,gap,runtime_ms"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn lhs_independent_of_far_corrector() {
    let g = bump();
    let a = sharpness_experiment(&g, 1.0, &[1e-2], NPolicy::Fixed(40.0)).unwrap().rows[0].lhs;
    let b = sharpness_experiment(&g, 1.0, &[1e-2], NPolicy::Fixed(160.0)).unwrap().rows[0].lhs;
    assert!((a - b).abs() < 1e-8);
}

#[test]
fn sharpness_for_rapidly_decaying_weight() {
    let g = catalog("gaussian", &Params::new()).unwrap();
    let tab = sharpness_experiment(&g, 1.0, &[1e-1, 1e-2, 1e-3], NPolicy::Auto).unwrap();
    assert!(tab.window.is_some());
    assert!(tab.rows.iter().all(|r| r.gap > 0.0));
    assert!(tab.rows.windows(2).all(|w| w[1].gap < w[0].gap));
}

#[test]
fn two_component_values() {
    let g = catalog("gaussian", &Params::new()).unwrap();
    let closed = -(PI.sqrt() / 2.0) / (12.0 * PI);
    let b = two_component_bound(&g, &g, 1.0, 1.0).unwrap();
    assert!((b.left - closed).abs() < 1e-8 * closed.abs());
    assert_eq!(b.left, b.right);
    let half = two_component_bound(&g, &g, 1.0, 0.5).unwrap();
    assert!((half.right - 0.5 * half.left).abs() < 1e-16);
    let z = two_component_bound(&g, &zero_weight(), 1.0, 1.0).unwrap();
    assert_eq!(z.right, 0.0);
    assert!(z.simultaneously_sharp);
}

#[test]
fn lifted_family_is_smooth_across_infinity() {
    let mut p = Params::new();
    p.insert("radius".into(), 0.5);
    let g = catalog("bump", &p).unwrap();
    let fam = build_regularized_weight(&g, 0.8, 4.0).unwrap();
    let lift = crate::circle::lift_line_reparam(&fam.v, 4096).unwrap();
    let d = lift.eval_derivative_many(&[PI - 1e-9, PI + 1e-9]);
    assert!((d[0] - d[1]).abs() < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn lambda_increases_as_eps_decreases(a in 1e-4f64..1.0, f in 0.05f64..0.95) {
        let g = bump();
        prop_assert!(lambda_eps(&g, a * f).unwrap() > lambda_eps(&g, a).unwrap());
    }

    #[test]
    fn random_states_obey_bound(seed in 0u64..10_000) {
        let rho = CircleDiffeo::random(&mut ChaCha8Rng::seed_from_u64(seed), 1024, 3).unwrap();
        let p = EnergyProfile::from_diffeo(&rho, 1.0).unwrap();
        prop_assert!(verify_bound(&p, &catalog("gaussian", &Params::new()).unwrap(), 1.0).unwrap() >= -1e-7);
    }
}
