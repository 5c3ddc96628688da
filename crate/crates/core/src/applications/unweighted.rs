use std::f64::consts::PI;

use serde::Serialize;

use crate::circle::{schwarzian_from_derivative, LineReparam, MobiusElement};
use crate::numerics::{cumulative_integral, find_root_monotone, integrate, uniform_nodes, Interval, RealFunction, Tail};
use crate::qei::{EnergyProfile, ProfileSource, Provenance};
use crate::weights::{sqrt_weight_derivative, standard_bump, WeightFunction};
use crate::{Error, Result, ToleranceSet};

/// Shape of `W = 1/√(1+f)`: `W = 1 − a·A + a·κ·C`, where `A'' ` is a unit
/// bump at `c1` minus weighted bumps at `c2`, `c3` (half-width `s`, weights
/// chosen so `A` is compactly supported) and `C` is a bump on
/// `compensator`. `κ` is tuned so that `∫ f = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DemoParams {
    pub amplitude: f64,
    pub s: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub compensator: (f64, f64),
    pub nodes: usize,
}

impl Default for DemoParams {
    fn default() -> Self {
        Self { amplitude: 0.2, s: 0.2, c1: -0.6, c2: 0.2, c3: 0.4, compensator: (0.62, 0.99), nodes: 12001 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DemoRow {
    pub lambda: f64,
    /// `−(c/24π)∫_{−∞}^0 {V_λ, v} dv`.
    pub half_line: f64,
    /// `−(c/24π)∫ {V_λ, v} dv`.
    pub full_line: f64,
}

#[derive(Debug, Clone)]
pub struct UnweightedDemo {
    pub params: DemoParams,
    pub kappa: f64,
    pub hypotheses: Vec<(String, bool)>,
    /// `∫ {V, v}/√V' dv`, zero by an exact identity.
    pub identity_residual: f64,
    pub rows: Vec<DemoRow>,
    /// Profiles `⟨T⟩ = −(c/24π){V_λ, v}` in the order of `rows`.
    pub profiles: Vec<EnergyProfile>,
}

struct Shape {
    nodes: Vec<f64>,
    a: RealFunction,
    d2a: Box<dyn Fn(f64) -> f64>,
    comp: Box<dyn Fn(f64) -> f64>,
    amplitude: f64,
}

impl Shape {
    fn w(&self, kappa: f64) -> Vec<f64> {
        self.nodes.iter().zip(self.a.values()).map(|(&v, &a)| 1.0 - self.amplitude * a + self.amplitude * kappa * (self.comp)(v)).collect()
    }

    fn f_integral(&self, kappa: f64) -> Result<f64> {
        let f: Vec<f64> = self.w(kappa).iter().map(|w| 1.0 / (w * w) - 1.0).collect();
        integrate(&RealFunction::from_samples(self.nodes.clone(), f, Tail::Zero, Tail::Zero)?, Interval::real_line())
    }
}

fn build_shape(p: &DemoParams) -> Result<Shape> {
    let ok = p.s > 0.0
        && p.c1 - p.s > -1.0
        && p.c1 + p.s <= 0.0
        && p.c2 - p.s >= 0.0
        && p.c2 < p.c3
        && p.c3 + p.s < p.compensator.0
        && p.compensator.0 < p.compensator.1
        && p.compensator.1 < 1.0
        && p.amplitude > 0.0
        && p.nodes >= 101;
    if !ok {
        return Err(Error::InvalidParameter("demo shape parameters out of range".into()));
    }
    let nodes = uniform_nodes(-1.0, 1.0, p.nodes);
    let bump_mass = integrate(&RealFunction::from_fn(uniform_nodes(-1.0, 1.0, 4001), standard_bump, Tail::Zero, Tail::Zero)?, Interval::new(-1.0, 1.0)?)?;
    let alpha2 = (p.c3 - p.c1) / (p.c3 - p.c2);
    let alpha3 = alpha2 - 1.0;
    let (s, c1, c2, c3) = (p.s, p.c1, p.c2, p.c3);
    let beta = move |v: f64, c: f64| standard_bump((v - c) / s) / (s * bump_mass);
    let d2a = move |v: f64| beta(v, c1) - alpha2 * beta(v, c2) + alpha3 * beta(v, c3);
    let d2 = RealFunction::from_fn(nodes.clone(), d2a, Tail::Zero, Tail::Zero)?;
    let d1 = cumulative_integral(&d2, -1.0)?;
    let a0 = cumulative_integral(&d1.map_samples(|_, y| y, Tail::Zero, Tail::Zero)?, -1.0)?;
    let n = a0.len();
    if a0.values()[n - 1].abs() > 1e-10 || d1.values()[n - 1].abs() > 1e-10 {
        return Err(Error::HypothesisFailed(format!("shape A is not compactly supported (A(1) = {:e})", a0.values()[n - 1])));
    }
    let a = a0.map_samples(|v, y| if v <= c1 - s || v >= c3 + s { 0.0 } else { y }, Tail::Zero, Tail::Zero)?;
    let (lo, hi) = p.compensator;
    let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    let comp = move |v: f64| standard_bump((v - mid) / half);
    Ok(Shape { nodes, a, d2a: Box::new(d2a), comp: Box::new(comp), amplitude: p.amplitude })
}

fn padded(scale: f64, n: usize) -> Vec<f64> {
    uniform_nodes(-1.25 * scale, 1.25 * scale, n)
}

/// Half-line averages of the vacuum-descendant states built from
/// `V(v) = v + ∫_{−1}^v f` and its dilations `V_λ(v) = V(λv)/λ`.
pub fn unweighted_demo(params: &DemoParams, lambdas: &[f64], c: f64) -> Result<UnweightedDemo> {
    if c.is_nan() || c <= 0.0 {
        return Err(Error::NonPositiveCentralCharge);
    }
    if lambdas.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
        return Err(Error::InvalidParameter("λ values must be positive".into()));
    }
    let shape = build_shape(params)?;
    let kappa = find_root_monotone(|k| shape.f_integral(k).unwrap_or(f64::NAN), Interval::new(0.0, 1e3)?)
        .map_err(|_| Error::HypothesisFailed("∫ f = 0 cannot be met by tuning the compensating bump".into()))?;
    let w = shape.w(kappa);
    let f: Vec<f64> = w.iter().map(|w| 1.0 / (w * w) - 1.0).collect();
    let a = params.amplitude;
    let mut hyp = Vec::new();
    hyp.push(("f >= -1".to_string(), f.iter().all(|&x| x >= -1.0)));
    let fint = shape.f_integral(kappa)?;
    hyp.push(("integral of f vanishes".to_string(), fint.abs() <= 1e-10));
    let on_left: Vec<usize> = (0..shape.nodes.len()).filter(|&i| shape.nodes[i] > -1.0 && shape.nodes[i] < 0.0).collect();
    let w2_ok = on_left.iter().all(|&i| {
        let v = shape.nodes[i];
        let w2 = -a * (shape.d2a)(v);
        (-1.0..=0.0).contains(&w2)
    });
    hyp.push(("-1 <= W'' <= 0 on (-1, 0)".to_string(), w2_ok));
    hyp.push(("f vanishes outside (-1, 1)".to_string(), f[0] == 0.0 && f[f.len() - 1] == 0.0));
    hyp.push(("f not identically zero on (-1, 0)".to_string(), on_left.iter().any(|&i| f[i] != 0.0)));
    if let Some((name, _)) = hyp.iter().find(|(_, ok)| !ok) {
        return Err(Error::HypothesisFailed(name.clone()));
    }
    let vprime_unit = {
        let wf = RealFunction::from_samples(shape.nodes.clone(), w, Tail::Affine { slope: 0.0, intercept: 1.0 }, Tail::Affine { slope: 0.0, intercept: 1.0 })?;
        move |x: f64| {
            let wv = if x <= -1.0 || x >= 1.0 { 1.0 } else { wf.eval(x) };
            1.0 / (wv * wv)
        }
    };
    let vprime_unit = std::sync::Arc::new(vprime_unit);
    let k = -(c / (24.0 * PI));
    let n = 2 * params.nodes + 1;
    let build = |lambda: f64| -> Result<(RealFunction, LineReparam)> {
        let vp = vprime_unit.clone();
        let dv = RealFunction::from_fn(padded(1.0 / lambda, n), move |x| vp(lambda * x), Tail::Affine { slope: 0.0, intercept: 1.0 }, Tail::Affine { slope: 0.0, intercept: 1.0 })?;
        let lo = dv.nodes()[0];
        let vf = cumulative_integral(&dv, lo)?.map_samples(|_, y| y + lo, Tail::Zero, Tail::Zero)?;
        let rep = LineReparam::new(vf, dv.clone(), MobiusElement::identity())?;
        Ok((dv, rep))
    };
    let (dv1, _) = build(1.0)?;
    let s1 = schwarzian_from_derivative(&dv1)?;
    let resid_f = RealFunction::from_samples(s1.nodes.clone(), s1.values.iter().zip(dv1.values()).map(|(s, d)| s / d.sqrt()).collect(), Tail::Zero, Tail::Zero)?;
    let identity_residual = integrate(&resid_f, Interval::real_line())?;
    let mut rows = Vec::new();
    let mut profiles = Vec::new();
    for &lambda in lambdas {
        let (dv, rep) = build(lambda)?;
        let s = schwarzian_from_derivative(&dv)?;
        let t = RealFunction::from_samples(s.nodes.clone(), s.values.iter().map(|x| k * x).collect(), Tail::Zero, Tail::Zero)?;
        let half_line = integrate(&t, Interval::new(f64::NEG_INFINITY, 0.0)?)?;
        let full_line = integrate(&t, Interval::real_line())?;
        rows.push(DemoRow { lambda, half_line, full_line });
        profiles.push(EnergyProfile {
            t,
            central_charge: c,
            decay_constant: 0.0,
            provenance: Provenance::DiffeoVacuum(ProfileSource::Line { reparam: Box::new(rep), lift: None }),
        });
    }
    Ok(UnweightedDemo { params: *params, kappa, hypotheses: hyp, identity_residual, rows, profiles })
}

/// `−(c/12π)∫_0^∞ ((√G)')² dv` for `G` equal to one near the origin. Only
/// `G(0) = 1` is checked.
pub fn smoothed_halfline_bound(g: &WeightFunction, c: f64) -> Result<f64> {
    if c.is_nan() || c <= 0.0 {
        return Err(Error::NonPositiveCentralCharge);
    }
    if (g.eval(0.0) - 1.0).abs() > 1e-12 {
        return Err(Error::HypothesisFailed("G must equal unity near origin".into()));
    }
    let phi = sqrt_weight_derivative(g, ToleranceSet::default().zero_threshold)?;
    Ok(-(c * (integrate(&phi.squared()?, Interval::new(0.0, f64::INFINITY)?)? / (12.0 * PI))))
}

/// `∫ ⟨T⟩ dv`, nonnegative for every vacuum-descendant state.
pub fn anec_check(profile: &EnergyProfile) -> Result<f64> {
    profile.total_integral()
}
