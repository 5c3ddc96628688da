use std::f64::consts::PI;

use super::family::RegularizedFamily;
use crate::circle::{lift_line_reparam, CircleDiffeo, HasSchwarzian, LineReparam, DEFAULT_NODES};
use crate::numerics::{integrate, Interval, RealFunction, Tail};
use crate::weights::{qei_functional, WeightFunction};
use crate::{Error, Result, ToleranceSet};

/// The reparametrisation that produced a vacuum-descendant profile.
#[derive(Debug, Clone)]
pub enum ProfileSource {
    /// A circle diffeomorphism with its invariant Schwarzian at the nodes.
    Circle { diffeo: CircleDiffeo, schwarzian: Vec<f64> },
    /// A light-ray reparametrisation, with its circle lift when the lift is
    /// resolvable on the default circle grid.
    Line { reparam: Box<LineReparam>, lift: Option<CircleDiffeo> },
}

#[derive(Debug, Clone)]
pub enum Provenance {
    DiffeoVacuum(ProfileSource),
    External,
}

/// Sampled expectation `⟨T(v)⟩` with `|T(v)| ≤ C/v⁴` beyond the grid.
#[derive(Debug, Clone)]
pub struct EnergyProfile {
    pub t: RealFunction,
    pub central_charge: f64,
    pub decay_constant: f64,
    pub provenance: Provenance,
}

fn check_c(c: f64) -> Result<()> {
    if c.is_nan() || c <= 0.0 {
        return Err(Error::NonPositiveCentralCharge);
    }
    Ok(())
}

impl EnergyProfile {
    /// Vacuum profile `−(c/24π){V, v}` of the state transformed by `ρ`, with
    /// `{V, v} = θ_v²·S(θ(v))` and `θ_v = 1 + cos θ`.
    pub fn from_diffeo(rho: &CircleDiffeo, c: f64) -> Result<Self> {
        check_c(c)?;
        let s = rho.schwarzian()?.values;
        let n = rho.len();
        let mut pts: Vec<(f64, f64)> = rho
            .nodes()
            .iter()
            .zip(&s)
            .filter(|(t, _)| (**t - PI).abs() > 0.5 * PI / n as f64)
            .map(|(&t, &sv)| {
                let th = if t > PI { t - 2.0 * PI } else { t };
                let w = 1.0 + th.cos();
                ((th / 2.0).tan(), -(c / (24.0 * PI)) * w * w * sv)
            })
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (nodes, vals): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
        let decay = Tail::PowerDecay { exponent: 4.0 };
        let t = RealFunction::from_samples(nodes, vals, decay, decay)?;
        let smax = s.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        Ok(Self {
            t,
            central_charge: c,
            decay_constant: c * smax / (6.0 * PI),
            provenance: Provenance::DiffeoVacuum(ProfileSource::Circle { diffeo: rho.clone(), schwarzian: s }),
        })
    }

    /// A profile supplied from outside; no positivity is implied.
    pub fn external(t: RealFunction, c: f64, decay_constant: f64) -> Result<Self> {
        check_c(c)?;
        Ok(Self { t, central_charge: c, decay_constant, provenance: Provenance::External })
    }

    pub fn is_diffeo_vacuum(&self) -> bool {
        matches!(self.provenance, Provenance::DiffeoVacuum(_))
    }

    fn circle_sum<F: Fn(f64) -> f64>(&self, weight: F) -> Option<f64> {
        match &self.provenance {
            Provenance::DiffeoVacuum(ProfileSource::Circle { diffeo, schwarzian }) => {
                let n = diffeo.len();
                let sum: f64 = diffeo
                    .nodes()
                    .iter()
                    .zip(schwarzian)
                    .filter(|(t, _)| (**t - PI).abs() > 0.5 * PI / n as f64)
                    .map(|(&t, &s)| weight((t / 2.0).tan()) * (1.0 + t.cos()) * s)
                    .sum();
                Some(-(self.central_charge / (24.0 * PI)) * sum * 2.0 * PI / n as f64)
            }
            _ => None,
        }
    }

    /// `∫ G(v)⟨T(v)⟩ dv`. Circle-sourced profiles use the periodic
    /// trapezoidal rule in `θ`.
    pub fn weighted_integral(&self, g: &WeightFunction) -> Result<f64> {
        if let Some(v) = self.circle_sum(|v| g.eval(v)) {
            return Ok(v);
        }
        let gt = g.function().grid();
        let tt = self.t.grid();
        let prod_tail = |a: Tail, b: Tail| match (a, b) {
            (Tail::Zero, _) | (_, Tail::Zero) => Tail::Zero,
            (Tail::PowerDecay { exponent: p }, Tail::PowerDecay { exponent: q }) => Tail::PowerDecay { exponent: p + q },
            _ => Tail::Zero,
        };
        let left = if tt.lo() <= gt.lo() { Tail::Zero } else { prod_tail(gt.left_tail(), tt.left_tail()) };
        let right = if tt.hi() >= gt.hi() { Tail::Zero } else { prod_tail(gt.right_tail(), tt.right_tail()) };
        let f = self.t.map_samples(|v, y| g.eval(v) * y, left, right)?;
        integrate(&f, Interval::real_line())
    }

    /// `⟨P⟩ = ∫ ⟨T(v)⟩ dv`.
    pub fn total_integral(&self) -> Result<f64> {
        if let Some(v) = self.circle_sum(|_| 1.0) {
            return Ok(v);
        }
        integrate(&self.t, Interval::real_line())
    }
}

/// Profile `−(c/24π){V, v} = (c/12π)(√H)''/√H` of the regularised state.
/// Both algebraic forms of the Schwarzian are evaluated; their disagreement
/// relative to `max(sup|S|, 1)` must stay below the cross-check tolerance.
pub fn sharp_state_profile(fam: &RegularizedFamily, c: f64) -> Result<EnergyProfile> {
    sharp_state_profile_with(fam, c, &ToleranceSet::default())
}

pub fn sharp_state_profile_with(fam: &RegularizedFamily, c: f64, tol: &ToleranceSet) -> Result<EnergyProfile> {
    check_c(c)?;
    let s = fam.v.schwarzian()?;
    let rel = s.relative_discrepancy();
    if rel > tol.schwarzian_cross_check {
        return Err(Error::ResolutionTooLow(format!("Schwarzian forms disagree by {rel:.3e}")));
    }
    let k = -(c / (24.0 * PI));
    let t = RealFunction::from_samples(s.nodes.clone(), s.values.iter().map(|x| k * x).collect(), Tail::Zero, Tail::Zero)?;
    let lift = lift_line_reparam(&fam.v, DEFAULT_NODES).ok();
    Ok(EnergyProfile {
        t,
        central_charge: c,
        decay_constant: 0.0,
        provenance: Provenance::DiffeoVacuum(ProfileSource::Line { reparam: Box::new(fam.v.clone()), lift }),
    })
}

/// `∫ G⟨T⟩ − (−(c/12π)∫ φ²)`; nonnegative for every genuine state.
pub fn verify_bound(profile: &EnergyProfile, g: &WeightFunction, c: f64) -> Result<f64> {
    verify_bound_with(profile, g, c, &ToleranceSet::default())
}

pub fn verify_bound_with(profile: &EnergyProfile, g: &WeightFunction, c: f64, tol: &ToleranceSet) -> Result<f64> {
    check_c(c)?;
    if (profile.central_charge - c).abs() > 1e-12 * c {
        return Err(Error::InvalidParameter(format!("profile has c = {}, bound requested at c = {c}", profile.central_charge)));
    }
    Ok(profile.weighted_integral(g)? - qei_functional(g, c, tol)?)
}
