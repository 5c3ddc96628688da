use std::collections::BTreeMap;

use super::{DecayClass, WeightFunction};
use crate::numerics::{uniform_nodes, Interval, RealFunction, Tail};
use crate::{Error, Result};

/// Named numeric parameters for catalog constructors.
pub type Params = BTreeMap<String, f64>;

const DEFAULT_NODES: usize = 4096;

/// Names accepted by [`catalog`].
pub fn catalog_names() -> &'static [&'static str] {
    &["gaussian", "bump", "plateau", "lorentzian-squared", "lorentzian"]
}

/// Bump normalised to peak value one: `exp(1 - 1/(1-x²))` on `|x| < 1`.
pub fn standard_bump(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - x * x)).exp()
    }
}

/// Smooth monotone step: 0 for `x ≤ 0`, 1 for `x ≥ 1`.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / x).exp();
        let b = (-1.0 / (1.0 - x)).exp();
        a / (a + b)
    }
}

fn get(params: &Params, key: &str, default: f64) -> Result<f64> {
    let v = params.get(key).copied().unwrap_or(default);
    if !v.is_finite() {
        return Err(Error::InvalidParameter(format!("{key} must be finite")));
    }
    Ok(v)
}

fn positive(params: &Params, key: &str, default: f64) -> Result<f64> {
    let v = get(params, key, default)?;
    if v <= 0.0 {
        return Err(Error::InvalidParameter(format!("{key} must be positive")));
    }
    Ok(v)
}

fn node_count(params: &Params) -> Result<usize> {
    let n = get(params, "nodes", DEFAULT_NODES as f64)?;
    if n < 16.0 || n.fract() != 0.0 {
        return Err(Error::InvalidParameter("nodes must be an integer ≥ 16".into()));
    }
    Ok(n as usize)
}

fn compact<F>(name: &str, lo: f64, hi: f64, n: usize, f: F) -> Result<WeightFunction>
where
    F: Fn(f64) -> f64 + Send + Sync + 'static,
{
    let margin = 0.05 * (hi - lo);
    let nodes = uniform_nodes(lo - margin, hi + margin, n);
    let rf = RealFunction::from_fn(nodes, move |v| if v <= lo || v >= hi { 0.0 } else { f(v) }, Tail::Zero, Tail::Zero)?;
    Ok(WeightFunction::new(rf, Some(Interval::new(lo, hi)?), DecayClass::Compact)?.with_label(name))
}

/// Closed-form weights.
///
/// * `gaussian`: `amplitude·exp(-((v-center)/width)²)`.
/// * `bump`: `amplitude·standard_bump((v-center)/radius)`.
/// * `plateau`: equal to `amplitude` on `|v-center| ≤ core`, smooth ramps of
///   length `ramp` down to zero.
/// * `lorentzian-squared`: `amplitude/(1+((v-center)/width)²)²`.
/// * `lorentzian`: `amplitude/(1+((v-center)/width)²)`.
///
/// The two Lorentzian shapes decay only polynomially and are flagged as
/// lying outside the rapid-decay hypotheses. Every entry accepts `nodes`.
pub fn catalog(name: &str, params: &Params) -> Result<WeightFunction> {
    let n = node_count(params)?;
    let a = positive(params, "amplitude", 1.0)?;
    let c = get(params, "center", 0.0)?;
    match name {
        "gaussian" => {
            let w = positive(params, "width", 1.0)?;
            let half = w * (16.0 * std::f64::consts::LN_10).sqrt() + w * 0.1;
            let nodes = uniform_nodes(c - half, c + half, n);
            let tail = Tail::PowerDecay { exponent: 16.0 };
            let (lt, rt) = (if c - half < 0.0 { tail } else { Tail::Zero }, if c + half > 0.0 { tail } else { Tail::Zero });
            let rf = RealFunction::from_fn(nodes, move |v| a * (-((v - c) / w).powi(2)).exp(), lt, rt)?;
            Ok(WeightFunction::new(rf, None, DecayClass::Schwartz)?.with_label(name))
        }
        "bump" => {
            let r = positive(params, "radius", 1.0)?;
            compact(name, c - r, c + r, n, move |v| a * standard_bump((v - c) / r))
        }
        "plateau" => {
            let core = get(params, "core", 1.0)?;
            if core < 0.0 {
                return Err(Error::InvalidParameter("core must be nonnegative".into()));
            }
            let ramp = positive(params, "ramp", 1.0)?;
            let edge = core + ramp;
            compact(name, c - edge, c + edge, n, move |v| a * smooth_step((edge - (v - c).abs()) / ramp))
        }
        "lorentzian-squared" | "lorentzian" => {
            let w = positive(params, "width", 1.0)?;
            let p = if name == "lorentzian" { 1 } else { 2 };
            let half = positive(params, "window", 60.0)? * w;
            if c.abs() >= half {
                return Err(Error::InvalidParameter("center must lie inside the window".into()));
            }
            let nodes = uniform_nodes(c - half, c + half, n);
            let tail = Tail::PowerDecay { exponent: 2.0 * p as f64 };
            let rf = RealFunction::from_fn(nodes, move |v| a / (1.0 + ((v - c) / w).powi(2)).powi(p), tail, tail)?;
            Ok(WeightFunction::new(rf, None, DecayClass::Schwartz)?.with_label(name).flag_outside_hypotheses())
        }
        other => Err(Error::InvalidParameter(format!("unknown weight '{other}' (known: {})", catalog_names().join(", ")))),
    }
}
