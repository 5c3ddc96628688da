use std::f64::consts::PI;

use super::volume::{as_weight, null_averages, TensorWeight};
use crate::circle::{lift_line_reparam, CircleDiffeo, HasSchwarzian, LineReparam, MobiusElement};
use crate::numerics::{cumulative_integral, find_root_monotone, integrate, uniform_nodes, Interval, RealFunction, Tail};
use crate::weights::{qei_functional, standard_bump, DecayClass, WeightFunction};
use crate::{Error, Result, ToleranceSet};

/// A mirror `v = p(u)` bounding the region `v > p(u)`.
#[derive(Debug, Clone)]
pub struct MirrorTrajectory {
    pub p: LineReparam,
}

impl MirrorTrajectory {
    pub fn new(p: LineReparam) -> Self {
        Self { p }
    }

    pub fn identity(nodes: Vec<f64>) -> Result<Self> {
        Ok(Self { p: LineReparam::identity(nodes)? })
    }

    pub fn from_mobius(m: MobiusElement, nodes: Vec<f64>) -> Result<Self> {
        Ok(Self { p: LineReparam::from_mobius(m, nodes)? })
    }

    /// `p'(u) = 1 + A(b(u−1) − b(u+1))` with `b` the unit bump: the mirror
    /// accelerates on `(−2, 2)` and is static (`p(u) = u`) outside.
    pub fn accelerating(amplitude: f64, nodes: Vec<f64>) -> Result<Self> {
        if !(amplitude.abs() < 1.0) {
            return Err(Error::InvalidParameter("|amplitude| must be below 1".into()));
        }
        if nodes[0] > -2.0 || nodes[nodes.len() - 1] < 2.0 {
            return Err(Error::InvalidGrid("mirror grid must cover [−2, 2]".into()));
        }
        let dp = move |u: f64| 1.0 + amplitude * (standard_bump(u - 1.0) - standard_bump(u + 1.0));
        let lo = nodes[0];
        let dpf = RealFunction::from_fn(nodes, dp, Tail::Affine { slope: 0.0, intercept: 1.0 }, Tail::Affine { slope: 0.0, intercept: 1.0 })?;
        let pf = cumulative_integral(&dpf, lo)?.map_samples(|_, y| y + lo, Tail::Zero, Tail::Zero)?;
        Ok(Self { p: LineReparam::new(pf, dpf, MobiusElement::identity())? })
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.p.eval(u)
    }

    pub fn derivative(&self, u: f64) -> f64 {
        self.p.eval_derivative(u)
    }

    /// `p⁻¹(v)` by bracketed root finding.
    pub fn inverse(&self, v: f64) -> Result<f64> {
        let mut w = 1.0;
        for _ in 0..60 {
            let (a, b) = (v - w, v + w);
            if self.eval(a) <= v && self.eval(b) >= v {
                return find_root_monotone(|u| self.eval(u) - v, Interval::new(a, b)?);
            }
            w *= 2.0;
        }
        Err(Error::NoConvergence)
    }

    /// Circle lift on `n` nodes.
    pub fn lift(&self, n: usize) -> Result<CircleDiffeo> {
        lift_line_reparam(&self.p, n)
    }
}

/// `⟨T₀₀⟩ = −(c/24π){p, u}` on the trajectory grid. Both forms of the
/// Schwarzian must agree to the cross-check tolerance.
pub fn mirror_vacuum_energy(p: &MirrorTrajectory, c: f64) -> Result<RealFunction> {
    if c.is_nan() || c <= 0.0 {
        return Err(Error::NonPositiveCentralCharge);
    }
    let s = p.p.schwarzian()?;
    let rel = s.relative_discrepancy();
    if rel > ToleranceSet::default().schwarzian_cross_check {
        return Err(Error::ResolutionTooLow(format!("mirror Schwarzian forms disagree by {rel:.3e}")));
    }
    let k = -(c / (24.0 * PI));
    RealFunction::from_samples(s.nodes, s.values.iter().map(|x| k * x).collect(), Tail::Zero, Tail::Zero)
}

/// The two terms of the mirror bound.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MirrorBoundParts {
    /// `−(c/12π)∫(√G)'² dv` with `G = F_L + p'(p⁻¹)·F_R(p⁻¹)`.
    pub smeared: f64,
    /// `−(c/24π)∫{p, u} F_R du`.
    pub motion: f64,
}

const MIRROR_NODES: usize = 16385;

pub fn mirror_bound_parts(fw: &TensorWeight, p: &MirrorTrajectory, c: f64) -> Result<MirrorBoundParts> {
    let n1 = fw.x1.len();
    for (i, &s) in fw.x0.iter().enumerate() {
        for (j, &t) in fw.x1.iter().enumerate() {
            if fw.samples[i * n1 + j].iter().any(|&x| x != 0.0) && s + t <= p.eval(s - t) {
                return Err(Error::SupportViolation(format!("f is nonzero at (x⁰, x¹) = ({s}, {t}) outside v > p(u)")));
            }
        }
    }
    let na = null_averages(fw)?;
    let fl = as_weight(&na.f_l, "F_L")?;
    let fr = as_weight(&na.f_r, "F_R")?;
    let (ul, uh) = (na.f_r.grid().lo(), na.f_r.grid().hi());
    let lo = na.f_l.grid().lo().min(p.eval(ul));
    let hi = na.f_l.grid().hi().max(p.eval(uh));
    let mut vals = Vec::with_capacity(MIRROR_NODES);
    let nodes = uniform_nodes(lo, hi, MIRROR_NODES);
    for &v in &nodes {
        let u = p.inverse(v)?;
        vals.push(fl.eval(v) + p.derivative(u) * fr.eval(u));
    }
    let g = WeightFunction::new(RealFunction::from_samples(nodes, vals, Tail::Zero, Tail::Zero)?, None, DecayClass::Schwartz)?;
    let smeared = qei_functional(&g, c, &ToleranceSet::default())?;
    let s = p.p.schwarzian()?.to_function()?;
    let prod = RealFunction::from_samples(na.f_r.nodes().to_vec(), na.f_r.nodes().iter().map(|&u| s.eval(u) * fr.eval(u)).collect(), Tail::Zero, Tail::Zero)?;
    let motion = -(c / (24.0 * PI)) * integrate(&prod, Interval::real_line())?;
    Ok(MirrorBoundParts { smeared, motion })
}

/// `−(c/12π)∫(√G)'² dv − (c/24π)∫{p, u} F_R du` for `f` supported in
/// `v > p(u)`.
pub fn mirror_bound(fw: &TensorWeight, p: &MirrorTrajectory, c: f64) -> Result<f64> {
    let parts = mirror_bound_parts(fw, p, c)?;
    Ok(parts.smeared + parts.motion)
}
