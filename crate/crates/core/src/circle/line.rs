use num_complex::Complex64;
use std::f64::consts::PI;

use super::diffeo::CircleDiffeo;
use super::mobius::MobiusElement;
use crate::numerics::{differentiate, unwrap_phase, RealFunction, Tail};
use crate::{Error, Result};

/// Cayley transform `z(v) = (1+iv)/(1−iv)` from the light ray to the circle.
pub fn cayley(v: f64) -> Complex64 {
    Complex64::new(1.0, v) / Complex64::new(1.0, -v)
}

/// Inverse Cayley transform `v = i(1−z)/(1+z)`.
pub fn inverse_cayley(z: Complex64) -> Result<f64> {
    let den = Complex64::new(1.0, 0.0) + z;
    if den.norm() <= 1e-300 {
        return Err(Error::PointAtInfinity);
    }
    Ok((Complex64::i() * (Complex64::new(1.0, 0.0) - z) / den).re)
}

/// A reparametrisation `V` of the light ray that agrees with a Möbius map
/// outside the span of its grid.
#[derive(Debug, Clone)]
pub struct LineReparam {
    v: RealFunction,
    dv: RealFunction,
    tail: MobiusElement,
}

impl LineReparam {
    /// Validates `V' > 0`, monotone samples, and agreement with `tail` at both
    /// grid edges.
    pub fn new(v: RealFunction, dv: RealFunction, tail: MobiusElement) -> Result<Self> {
        if v.nodes() != dv.nodes() {
            return Err(Error::InvalidGrid("V and V' must share nodes".into()));
        }
        if let Some(k) = dv.values().iter().position(|&d| !(d > 0.0)) {
            return Err(Error::NotReparametrisation(format!("V' = {} at v = {}", dv.values()[k], dv.nodes()[k])));
        }
        if v.values().windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::NotReparametrisation("V is not strictly increasing".into()));
        }
        let n = v.len();
        for &k in &[0, n - 1] {
            let x = v.nodes()[k];
            let expected = tail.apply(x);
            let got = v.values()[k];
            if (expected - got).abs() > 1e-8 * got.abs().max(1.0) {
                return Err(Error::TailMismatch(format!("V({x}) = {got}, tail Möbius gives {expected}")));
            }
        }
        Ok(Self { v, dv, tail })
    }

    /// A Möbius map sampled on `nodes` (which must avoid its pole).
    pub fn from_mobius(m: MobiusElement, nodes: Vec<f64>) -> Result<Self> {
        if m.c != 0.0 {
            let pole = -m.d / m.c;
            if pole >= nodes[0] && pole <= nodes[nodes.len() - 1] {
                return Err(Error::NotReparametrisation("pole inside the grid".into()));
            }
        }
        let v = RealFunction::from_fn(nodes.clone(), move |x| m.apply(x), Tail::Zero, Tail::Zero)?;
        let dv = RealFunction::from_fn(nodes, move |x| m.derivative(x), Tail::Zero, Tail::Zero)?;
        Self::new(v, dv, m)
    }

    pub fn identity(nodes: Vec<f64>) -> Result<Self> {
        Self::from_mobius(MobiusElement::identity(), nodes)
    }

    /// Closed-form `V` and `V'`.
    pub fn from_fns<F, D>(nodes: Vec<f64>, v: F, dv: D, tail: MobiusElement) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let vf = RealFunction::from_fn(nodes.clone(), v, Tail::Zero, Tail::Zero)?;
        let df = RealFunction::from_fn(nodes, dv, Tail::Zero, Tail::Zero)?;
        Self::new(vf, df, tail)
    }

    /// Samples of `V` with `V'` obtained by finite differences.
    pub fn from_samples(v: RealFunction, tail: MobiusElement) -> Result<Self> {
        let dv = differentiate(&v, 1)?;
        Self::new(v, dv, tail)
    }

    pub fn values(&self) -> &RealFunction {
        &self.v
    }

    pub fn derivative(&self) -> &RealFunction {
        &self.dv
    }

    pub fn tail_mobius(&self) -> MobiusElement {
        self.tail
    }

    pub fn nodes(&self) -> &[f64] {
        self.v.nodes()
    }

    fn inside(&self, x: f64) -> bool {
        x >= self.v.grid().lo() && x <= self.v.grid().hi()
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.inside(x) {
            self.v.eval(x)
        } else {
            self.tail.apply(x)
        }
    }

    pub fn eval_derivative(&self, x: f64) -> f64 {
        if self.inside(x) {
            self.dv.eval(x)
        } else {
            self.tail.derivative(x)
        }
    }

    /// Homogeneous image of the light-ray point represented by `(p, q)`.
    fn eval_homogeneous(&self, p: f64, q: f64) -> (f64, f64) {
        if q.abs() > 1e-300 {
            let x = p / q;
            if self.inside(x) {
                return (self.v.eval(x) * q, q);
            }
        }
        self.tail.apply_homogeneous(p, q)
    }
}

fn lift_homogeneous<F: Fn(f64, f64) -> (f64, f64)>(n: usize, map: F) -> Result<CircleDiffeo> {
    let samples: Vec<Complex64> = (0..n)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / n as f64;
            let (p, q) = (theta / 2.0).sin_cos();
            let (pp, qq) = map(p, q);
            Complex64::new(qq, pp)
        })
        .collect();
    let args = unwrap_phase(&samples)?;
    let mut offset = 0.0;
    let mut rho0 = 2.0 * args[0];
    while rho0 > PI {
        rho0 -= 2.0 * PI;
        offset -= 2.0 * PI;
    }
    while rho0 <= -PI {
        rho0 += 2.0 * PI;
        offset += 2.0 * PI;
    }
    let periodic = args.iter().enumerate().map(|(j, a)| 2.0 * a + offset - 2.0 * PI * j as f64 / n as f64).collect();
    CircleDiffeo::from_lift_samples(periodic)
}

/// Lift `ρ(θ) = 2·arctan(V(tan(θ/2)))` on `n` circle nodes, continued by
/// continuity and the `2π`-shift law.
pub fn lift_line_reparam(v: &LineReparam, n: usize) -> Result<CircleDiffeo> {
    lift_homogeneous(n, |p, q| v.eval_homogeneous(p, q))
}

/// Lift of a Möbius map with `ρ(0) ∈ (−π, π]`.
pub fn lift_mobius(m: &MobiusElement, n: usize) -> Result<CircleDiffeo> {
    lift_homogeneous(n, |p, q| m.apply_homogeneous(p, q))
}
