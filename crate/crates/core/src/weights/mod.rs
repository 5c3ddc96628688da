//! Smearing weights `G ≥ 0` and the sharp bound functional
//! `-(c/12π) ∫ ((√G)')² dv`.
//!
//! The derivative of `√G` is taken as `G'/(2√G)` where `G` is positive and set
//! to zero where `G` vanishes (below a relative cutoff).

mod catalog;
mod io;

pub use catalog::{catalog, catalog_names, smooth_step, standard_bump, Params};
pub use io::load_weight_csv;

use std::f64::consts::PI;

use crate::numerics::{differentiate, integrate, Interval, RealFunction, Tail};
use crate::{Error, Result, ToleranceSet};

/// Decay class of a weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecayClass {
    Compact,
    Schwartz,
}

/// A nonnegative weight on the real line.
#[derive(Debug, Clone)]
pub struct WeightFunction {
    f: RealFunction,
    support: Option<Interval>,
    decay: DecayClass,
    outside_hypotheses: bool,
    label: String,
}

impl WeightFunction {
    /// Validates nonnegativity, exact vanishing outside a compact support and
    /// decaying tails for the Schwartz class.
    pub fn new(f: RealFunction, support: Option<Interval>, decay: DecayClass) -> Result<Self> {
        if let Some(k) = f.values().iter().position(|&g| g < 0.0) {
            return Err(Error::InvalidWeight(format!("negative value {} at v = {}", f.values()[k], f.nodes()[k])));
        }
        match decay {
            DecayClass::Compact => {
                let s = support.ok_or_else(|| Error::InvalidWeight("compact weight needs a support interval".into()))?;
                if !s.is_finite() {
                    return Err(Error::InvalidWeight("compact support must be bounded".into()));
                }
                for (&v, &g) in f.nodes().iter().zip(f.values()) {
                    if !s.contains(v) && g != 0.0 {
                        return Err(Error::InvalidWeight(format!("nonzero value outside support at v = {v}")));
                    }
                }
                if f.grid().left_tail() != Tail::Zero || f.grid().right_tail() != Tail::Zero {
                    return Err(Error::InvalidWeight("compact weight needs zero tails".into()));
                }
            }
            DecayClass::Schwartz => {
                for t in [f.grid().left_tail(), f.grid().right_tail()] {
                    match t {
                        Tail::Zero => {}
                        Tail::PowerDecay { exponent } if exponent > 1.0 => {}
                        _ => return Err(Error::InvalidWeight("decaying weight needs zero or integrable power-decay tails".into())),
                    }
                }
            }
        }
        Ok(Self { f, support, decay, outside_hypotheses: false, label: String::new() })
    }

    /// Marks the weight as decaying too slowly for the sharp bound to be
    /// guaranteed. The functional is still computed.
    pub fn flag_outside_hypotheses(mut self) -> Self {
        self.outside_hypotheses = true;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn function(&self) -> &RealFunction {
        &self.f
    }

    pub fn support(&self) -> Option<Interval> {
        self.support
    }

    pub fn decay(&self) -> DecayClass {
        self.decay
    }

    pub fn outside_hypotheses(&self) -> bool {
        self.outside_hypotheses
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, v: f64) -> f64 {
        match self.support {
            Some(s) if self.decay == DecayClass::Compact && !s.contains(v) => 0.0,
            _ => self.f.eval(v).max(0.0),
        }
    }

    pub fn max_value(&self) -> f64 {
        self.f.max_abs()
    }

    pub fn is_trivial(&self) -> bool {
        self.max_value() == 0.0
    }

    /// Lebesgue measure of the support for compact weights.
    pub fn support_measure(&self) -> Option<f64> {
        match self.decay {
            DecayClass::Compact => self.support.map(|s| s.length()),
            DecayClass::Schwartz => None,
        }
    }

    /// Same weight with the samples replaced by `f` (tails and class kept).
    pub fn resampled(&self, f: RealFunction) -> Result<Self> {
        let mut w = Self::new(f, self.support, self.decay)?;
        w.outside_hypotheses = self.outside_hypotheses;
        w.label = self.label.clone();
        Ok(w)
    }
}

/// `φ = (√G)'` with the zero-set rule applied.
#[derive(Debug, Clone)]
pub struct SqrtDerivative {
    pub phi: RealFunction,
    pub zero_set_mask: Vec<bool>,
}

impl SqrtDerivative {
    /// `φ²` with tails inherited from the weight's decay.
    pub fn squared(&self) -> Result<RealFunction> {
        let sq = |t: Tail| match t {
            Tail::PowerDecay { exponent } => Tail::PowerDecay { exponent: 2.0 * exponent },
            _ => Tail::Zero,
        };
        let g = self.phi.grid();
        self.phi.map_samples(|_, y| y * y, sq(g.left_tail()), sq(g.right_tail()))
    }
}

fn sqrt_tail(t: Tail) -> Tail {
    match t {
        Tail::PowerDecay { exponent } => Tail::PowerDecay { exponent: exponent / 2.0 + 1.0 },
        _ => Tail::Zero,
    }
}

/// `φ(v) = G'(v)/(2√G(v))` where `G > zero_threshold·max G`, zero elsewhere.
pub fn sqrt_weight_derivative(g: &WeightFunction, zero_threshold: f64) -> Result<SqrtDerivative> {
    let f = g.function();
    let cutoff = zero_threshold * g.max_value();
    let dg = differentiate(f, 1)?;
    let mut mask = Vec::with_capacity(f.len());
    let values: Vec<f64> = f
        .values()
        .iter()
        .zip(dg.values())
        .map(|(&gv, &d)| {
            let zero = gv <= cutoff || gv == 0.0;
            mask.push(zero);
            if zero {
                0.0
            } else {
                d / (2.0 * gv.sqrt())
            }
        })
        .collect();
    let grid = f.grid();
    let phi = RealFunction::from_samples(f.nodes().to_vec(), values, sqrt_tail(grid.left_tail()), sqrt_tail(grid.right_tail()))?;
    Ok(SqrtDerivative { phi, zero_set_mask: mask })
}

/// `∫ φ² dv` over the line.
pub fn phi_squared_integral(g: &WeightFunction, tol: &ToleranceSet) -> Result<f64> {
    let phi = sqrt_weight_derivative(g, tol.zero_threshold)?;
    integrate(&phi.squared()?, Interval::real_line())
}

/// The sharp lower bound `-(c/12π) ∫ φ² dv`.
pub fn qei_functional(g: &WeightFunction, c: f64, tol: &ToleranceSet) -> Result<f64> {
    if c.is_nan() || c <= 0.0 {
        return Err(Error::NonPositiveCentralCharge);
    }
    Ok(-(c * (phi_squared_integral(g, tol)? / (12.0 * PI))))
}

/// `sup (1+v²)·G'(v)²/(4G(v))` over nodes where `G` exceeds the cutoff.
pub fn lemma_a1_constant(g: &WeightFunction, tol: &ToleranceSet) -> Result<f64> {
    if g.is_trivial() {
        return Ok(0.0);
    }
    let f = g.function();
    let dg = differentiate(f, 1)?;
    let cutoff = tol.zero_threshold * g.max_value();
    Ok(f.nodes()
        .iter()
        .zip(f.values())
        .zip(dg.values())
        .filter(|((_, &gv), _)| gv > cutoff)
        .map(|((&v, &gv), &d)| (1.0 + v * v) * d * d / (4.0 * gv))
        .fold(0.0, f64::max))
}

/// `I(ε) = ∫ G'²/(4(G+ε)) dv` for each `ε` of a strictly descending list.
pub fn epsilon_limit_check(g: &WeightFunction, eps_list: &[f64]) -> Result<Vec<f64>> {
    if eps_list.iter().any(|&e| !(e > 0.0)) || eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter("ε list must be positive and strictly descending".into()));
    }
    let f = g.function();
    let dg = differentiate(f, 1)?;
    let grid = f.grid();
    let tail = |t: Tail| match t {
        Tail::PowerDecay { exponent } => Tail::PowerDecay { exponent: 2.0 * exponent + 2.0 },
        _ => Tail::Zero,
    };
    eps_list
        .iter()
        .map(|&eps| {
            let vals: Vec<f64> = f.values().iter().zip(dg.values()).map(|(&gv, &d)| d * d / (4.0 * (gv + eps))).collect();
            let h = RealFunction::from_samples(f.nodes().to_vec(), vals, tail(grid.left_tail()), tail(grid.right_tail()))?;
            integrate(&h, Interval::real_line())
        })
        .collect()
}
