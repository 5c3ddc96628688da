use num_complex::Complex64;

use super::diffeo::CircleDiffeo;
use super::line::LineReparam;
use crate::numerics::spectral::{periodic_nodes, PeriodicSeries, DERIVATIVE_FLOOR};
use crate::numerics::{differentiate, RealFunction, Tail};
use crate::{Error, Result};

/// A Schwarzian evaluated by `V'''/V' − (3/2)(V''/V')²` together with the
/// alternative form `−2√V'·(1/√V')''` and their largest disagreement.
#[derive(Debug, Clone)]
pub struct Schwarzian {
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
    pub alternate: Vec<f64>,
    pub discrepancy: f64,
}

impl Schwarzian {
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Discrepancy relative to `max(sup|S|, 1)`.
    pub fn relative_discrepancy(&self) -> f64 {
        self.discrepancy / self.sup_norm().max(1.0)
    }

    /// Values as a function with zero tails.
    pub fn to_function(&self) -> Result<RealFunction> {
        RealFunction::from_samples(self.nodes.clone(), self.values.clone(), Tail::Zero, Tail::Zero)
    }
}

fn assemble(nodes: Vec<f64>, d1: &[f64], d2: &[f64], d3: &[f64], alt: Vec<f64>) -> Schwarzian {
    let values: Vec<f64> = d1.iter().zip(d2).zip(d3).map(|((a, b), c)| c / a - 1.5 * (b / a).powi(2)).collect();
    let discrepancy = values.iter().zip(&alt).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    Schwarzian { nodes, values, alternate: alt, discrepancy }
}

/// `{V, v}` from samples of `V'` on a line grid (finite differences).
pub fn schwarzian_from_derivative(dv: &RealFunction) -> Result<Schwarzian> {
    if let Some(k) = dv.values().iter().position(|&d| !(d > 0.0)) {
        return Err(Error::NotReparametrisation(format!("V' = {} at v = {}", dv.values()[k], dv.nodes()[k])));
    }
    let d2 = differentiate(dv, 1)?;
    let d3 = differentiate(dv, 2)?;
    let inv_sqrt = dv.map_samples(|_, y| 1.0 / y.sqrt(), Tail::Zero, Tail::Zero)?;
    let w2 = differentiate(&inv_sqrt, 2)?;
    let alt = dv.values().iter().zip(w2.values()).map(|(d, w)| -2.0 * d.sqrt() * w).collect();
    Ok(assemble(dv.nodes().to_vec(), dv.values(), d2.values(), d3.values(), alt))
}

/// Objects with a Schwarzian derivative.
pub trait HasSchwarzian {
    /// For a light-ray map this is `{V, v}`; for a circle lift it is the
    /// invariant combination `{ρ, θ} + (ρ'² − 1)/2`, which vanishes on the
    /// Möbius subgroup.
    fn schwarzian(&self) -> Result<Schwarzian>;
}

impl HasSchwarzian for LineReparam {
    fn schwarzian(&self) -> Result<Schwarzian> {
        schwarzian_from_derivative(self.derivative())
    }
}

impl CircleDiffeo {
    /// `{ρ, θ}` of the lift.
    pub fn lift_schwarzian(&self) -> Result<Schwarzian> {
        let d1 = self.derivative_samples(1);
        if let Some(v) = d1.iter().find(|&&v| !(v > 0.0)) {
            return Err(Error::NotReparametrisation(format!("ρ' = {v}")));
        }
        let d2 = self.derivative_samples(2);
        let d3 = self.derivative_samples(3);
        let w: Vec<f64> = d1.iter().map(|d| 1.0 / d.sqrt()).collect();
        let w2 = PeriodicSeries::from_real(&w).derivative_real(2, DERIVATIVE_FLOOR);
        let alt = d1.iter().zip(&w2).map(|(d, w)| -2.0 * d.sqrt() * w).collect();
        Ok(assemble(periodic_nodes(self.len()), &d1, &d2, &d3, alt))
    }
}

impl HasSchwarzian for CircleDiffeo {
    fn schwarzian(&self) -> Result<Schwarzian> {
        let mut s = self.lift_schwarzian()?;
        let d1 = self.derivative_samples(1);
        for ((v, a), d) in s.values.iter_mut().zip(s.alternate.iter_mut()).zip(&d1) {
            let shift = 0.5 * (d * d - 1.0);
            *v += shift;
            *a += shift;
        }
        Ok(s)
    }
}

/// Convenience wrapper around [`HasSchwarzian::schwarzian`].
pub fn schwarzian<T: HasSchwarzian + ?Sized>(x: &T) -> Result<Schwarzian> {
    x.schwarzian()
}

/// Circle function samples `z ↦ ρ̊(z) = e^{iρ(θ)}` for a lift.
pub fn circle_map_samples(rho: &CircleDiffeo) -> Vec<Complex64> {
    rho.lift_at_nodes().iter().map(|r| Complex64::from_polar(1.0, *r)).collect()
}
