use super::spectral::{periodic_nodes, PeriodicSeries, DERIVATIVE_FLOOR};
use super::*;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn gaussian_like(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> RealFunction {
    RealFunction::from_fn(uniform_nodes(-8.0, 8.0, 4096), f, Tail::Zero, Tail::Zero).unwrap()
}

#[test]
fn polynomial_integral_on_unit_interval() {
    let f = RealFunction::from_fn(uniform_nodes(0.0, 1.0, 101), |x| x * x, Tail::Zero, Tail::Zero).unwrap();
    let v = integrate(&f, Interval::new(0.0, 1.0).unwrap()).unwrap();
    assert!((v - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn odd_interval_count_uses_three_eighths_closure() {
    let f = RealFunction::from_samples(
        uniform_nodes(0.0, 1.0, 10),
        uniform_nodes(0.0, 1.0, 10).iter().map(|x| x * x * x).collect(),
        Tail::Zero,
        Tail::Zero,
    )
    .unwrap();
    let v = integrate(&f, Interval::new(0.0, 1.0).unwrap()).unwrap();
    assert!((v - 0.25).abs() < 1e-15);
}

#[test]
fn gaussian_integrals_over_the_line() {
    let g = gaussian_like(|v| (-v * v).exp());
    let v = integrate(&g, Interval::real_line()).unwrap();
    assert!((v - PI.sqrt()).abs() < 1e-12);
    let g2 = gaussian_like(|v| v * v * (-v * v).exp());
    let v2 = integrate(&g2, Interval::real_line()).unwrap();
    assert!((v2 - PI.sqrt() / 2.0).abs() / (PI.sqrt() / 2.0) < 1e-10);
}

#[test]
fn power_decay_tail_is_integrated_in_closed_form() {
    let f = RealFunction::from_fn(uniform_nodes(-200.0, 200.0, 20001), |v| 1.0 / (1.0 + v * v).powi(2), Tail::PowerDecay { exponent: 4.0 }, Tail::PowerDecay { exponent: 4.0 })
        .unwrap();
    let v = integrate(&f, Interval::real_line()).unwrap();
    assert!((v - PI / 2.0).abs() < 1e-10, "{v}");
}

#[test]
fn affine_tail_diverges_on_infinite_interval() {
    let f = RealFunction::from_fn(uniform_nodes(0.0, 1.0, 16), |_| 1.0, Tail::Zero, Tail::Affine { slope: 0.0, intercept: 1.0 }).unwrap();
    assert_eq!(integrate(&f, Interval::new(0.0, f64::INFINITY).unwrap()), Err(crate::Error::DivergentTail));
    let v = integrate(&f, Interval::new(0.0, 3.0).unwrap()).unwrap();
    assert!((v - 3.0).abs() < 1e-14);
}

#[test]
fn sub_interval_and_nonuniform_integration() {
    let nodes = composite_nodes(&[(-3.0, -1.0, 40), (-1.0, 1.0, 400), (1.0, 3.0, 40)]).unwrap();
    let f = RealFunction::from_samples(nodes.clone(), nodes.iter().map(|x| x.cos()).collect(), Tail::Zero, Tail::Zero).unwrap();
    let v = integrate(&f, Interval::new(-0.3, 2.1).unwrap()).unwrap();
    let exact = 2.1_f64.sin() - (-0.3_f64).sin();
    assert!((v - exact).abs() < 1e-11, "{}", v - exact);
}

#[test]
fn derivative_examples() {
    let n = 1024;
    let nodes = uniform_nodes(0.0, 2.0 * PI, n);
    let f = RealFunction::from_fn(nodes, f64::sin, Tail::Zero, Tail::Zero).unwrap();
    let d = differentiate(&f, 1).unwrap();
    let err = d.nodes().iter().zip(d.values()).map(|(x, y)| (y - x.cos()).abs()).fold(0.0, f64::max);
    assert!(err < 1e-8, "{err}");

    let c = RealFunction::from_fn(uniform_nodes(-1.0, 2.0, 40), |v| v * v * v, Tail::Zero, Tail::Zero).unwrap();
    let d3 = differentiate(&c, 3).unwrap();
    assert!(d3.values().iter().all(|y| (y - 6.0).abs() < 1e-7));

    let g = RealFunction::from_fn(uniform_nodes(-6.0, 6.0, 1201), |v| (-v * v).exp(), Tail::Zero, Tail::Zero).unwrap();
    let d2 = differentiate(&g, 2).unwrap();
    let mid = d2.nodes().iter().position(|x| x.abs() < 1e-12).unwrap();
    let symbolic = |v: f64| (4.0 * v * v - 2.0) * (-v * v).exp();
    assert!((d2.values()[mid] - symbolic(0.0)).abs() < 1e-9);
}

#[test]
fn nonuniform_derivative_uses_local_stencils() {
    let nodes = composite_nodes(&[(-2.0, 0.0, 200), (0.0, 2.0, 400)]).unwrap();
    let f = RealFunction::from_fn(nodes, |x| (2.0 * x).sin(), Tail::Zero, Tail::Zero).unwrap();
    let d = differentiate(&f, 2).unwrap();
    let err = d.nodes().iter().zip(d.values()).map(|(x, y)| (y + 4.0 * (2.0 * x).sin()).abs()).fold(0.0, f64::max);
    assert!(err < 1e-7, "{err}");
}

#[test]
fn too_few_nodes_for_stencil() {
    let f = RealFunction::from_fn(uniform_nodes(0.0, 1.0, 8), |x| x, Tail::Zero, Tail::Zero).unwrap();
    assert!(differentiate(&f, 3).is_ok());
    assert!(Grid::new(vec![0.0, 1.0, 2.0], vec![0.0; 3], Tail::Zero, Tail::Zero).is_err());
}

#[test]
fn cumulative_integral_examples() {
    let one = RealFunction::from_fn(uniform_nodes(-2.0, 3.0, 64), |_| 1.0, Tail::Zero, Tail::Zero).unwrap();
    let c = cumulative_integral(&one, 0.0).unwrap();
    assert!(c.nodes().iter().zip(c.values()).all(|(x, y)| (x - y).abs() < 1e-13));

    let cos = RealFunction::from_samples(
        uniform_nodes(-4.0, 4.0, 801),
        uniform_nodes(-4.0, 4.0, 801).iter().map(|x| x.cos()).collect(),
        Tail::Zero,
        Tail::Zero,
    )
    .unwrap();
    let s = cumulative_integral(&cos, 0.0).unwrap();
    let err = s.nodes().iter().zip(s.values()).map(|(x, y)| (y - x.sin()).abs()).fold(0.0, f64::max);
    assert!(err < 1e-10, "{err}");

    let lor = RealFunction::from_samples(
        uniform_nodes(-5.0, 5.0, 1001),
        uniform_nodes(-5.0, 5.0, 1001).iter().map(|x| 1.0 / (1.0 + x * x)).collect(),
        Tail::Zero,
        Tail::Zero,
    )
    .unwrap();
    let at = cumulative_integral(&lor, 0.0).unwrap().eval(1.0);
    assert!((at - PI / 4.0).abs() < 1e-10, "{}", at - PI / 4.0);
}

#[test]
fn cumulative_integral_extends_constant_tails_affinely() {
    let f = RealFunction::from_fn(uniform_nodes(-1.0, 1.0, 65), |_| 2.0, Tail::Affine { slope: 0.0, intercept: 2.0 }, Tail::Affine { slope: 0.0, intercept: 2.0 }).unwrap();
    let c = cumulative_integral(&f, 0.0).unwrap();
    assert!((c.eval(5.0) - 10.0).abs() < 1e-12);
    assert!((c.eval(-7.0) + 14.0).abs() < 1e-12);
}

#[test]
fn unwrap_examples() {
    let ones = vec![Complex64::new(1.0, 0.0); 20];
    assert!(unwrap_phase(&ones).unwrap().iter().all(|&p| p == 0.0));

    let n = 4000;
    let s: Vec<Complex64> = (0..=n).map(|k| Complex64::from_polar(1.0, 4.0 * PI * k as f64 / n as f64)).collect();
    let u = unwrap_phase(&s).unwrap();
    assert!((u[n] - 4.0 * PI).abs() < 1e-10);

    let jump = vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
    assert_eq!(unwrap_phase(&jump), Err(crate::Error::UndersampledPhase));
}

#[test]
fn mobius_derivative_has_zero_winding() {
    // σ(z) = (z + a)/(1 + ā z) on the unit circle, σ'(z) = (1 - |a|²)/(1 + ā z)².
    let a = Complex64::new(0.3, -0.4);
    let n = 2048;
    let s: Vec<Complex64> = (0..=n)
        .map(|k| {
            let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
            (1.0 - a.norm_sqr()) / (1.0 + a.conj() * z).powu(2)
        })
        .collect();
    let u = unwrap_phase(&s).unwrap();
    assert!((u[n] - u[0]).abs() < 1e-8);
}

#[test]
fn root_examples() {
    let r = find_root_monotone(|x| x - 2.0, Interval::new(0.0, 5.0).unwrap()).unwrap();
    assert!((r - 2.0).abs() < 1e-14);
    let r = find_root_monotone(|x| (x / 2.0).tan() - 1.0, Interval::new(0.0, 3.0).unwrap()).unwrap();
    assert!((r - PI / 2.0).abs() < 1e-12);
    let v = |x: f64| x + 0.3 * (-x * x).exp() * x;
    let r = find_root_monotone(|x| v(x) - 1.0, Interval::new(-5.0, 5.0).unwrap()).unwrap();
    assert!((v(r) - 1.0).abs() < 1e-12);
    assert!(find_root_monotone(|x| x * x + 1.0, Interval::new(-1.0, 1.0).unwrap()).is_err());
}

#[test]
fn spectral_derivatives_and_interpolation() {
    let n = 256;
    let th = periodic_nodes(n);
    let f: Vec<f64> = th.iter().map(|t| (t.sin()).exp()).collect();
    let s = PeriodicSeries::from_real(&f);
    let d3 = s.derivative_real(3, DERIVATIVE_FLOOR);
    let exact = |t: f64| {
        let (sn, c) = t.sin_cos();
        (sn).exp() * (c * c * c - 3.0 * sn * c - c)
    };
    let err = th.iter().zip(&d3).map(|(t, d)| (d - exact(*t)).abs()).fold(0.0, f64::max);
    assert!(err < 1e-10, "{err}");
    let v = s.eval(1.2345).re;
    assert!((v - 1.2345_f64.sin().exp()).abs() < 1e-13);
    assert!(s.high_band_fraction() < 1e-14);
}

proptest! {
    #[test]
    fn integrate_is_linear(a in -3.0..3.0f64, b in -3.0..3.0f64, s in 0.5..2.0f64) {
        let nodes = uniform_nodes(-10.0, 10.0, 2001);
        let f = RealFunction::from_fn(nodes.clone(), move |v| (-(v / s).powi(2)).exp(), Tail::Zero, Tail::Zero).unwrap();
        let g = RealFunction::from_fn(nodes.clone(), |v| v * v * (-v * v).exp(), Tail::Zero, Tail::Zero).unwrap();
        let h = RealFunction::from_fn(nodes, move |v| a * (-(v / s).powi(2)).exp() + b * v * v * (-v * v).exp(), Tail::Zero, Tail::Zero).unwrap();
        let iv = Interval::real_line();
        let lhs = integrate(&h, iv).unwrap();
        let rhs = a * integrate(&f, iv).unwrap() + b * integrate(&g, iv).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + a.abs() + b.abs()) * 4.0);
    }

    #[test]
    fn differentiate_then_integrate_recovers(k in 0.5..3.0f64, p in -1.0..1.0f64) {
        let nodes = uniform_nodes(-3.0, 3.0, 1201);
        let f = RealFunction::from_fn(nodes, move |x| (k * x + p).sin() * (-(x * x) / 4.0).exp(), Tail::Zero, Tail::Zero).unwrap();
        let back = cumulative_integral(&differentiate(&f, 1).unwrap(), 0.0).unwrap();
        let shift = f.values()[600] - back.values()[600];
        let err = f.values().iter().zip(back.values()).map(|(a, b)| (a - b - shift).abs()).fold(0.0, f64::max);
        prop_assert!(err < 1e-8, "{}", err);
    }

    #[test]
    fn unwrap_steps_match_principal_differences(phases in proptest::collection::vec(-3.0..3.0f64, 2..50)) {
        let s: Vec<Complex64> = phases.iter().scan(0.0, |acc, d| { *acc += d; Some(Complex64::from_polar(1.5, *acc)) }).collect();
        let u = unwrap_phase(&s).unwrap();
        for k in 1..s.len() {
            let principal = (s[k] / s[k - 1]).arg();
            prop_assert!(((u[k] - u[k - 1]) - principal).abs() < 1e-12);
        }
    }
}
