use std::time::Instant;

use serde::Serialize;

use super::family::{build_eta, build_regularized_weight, lambda_eps};
use super::profile::sharp_state_profile_with;
use crate::numerics::{uniform_nodes, Interval, RealFunction, Tail};
use crate::weights::{qei_functional, smooth_step, DecayClass, WeightFunction};
use crate::{Error, Result, ToleranceSet};

/// How the corrector position `n` is chosen for each `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NPolicy {
    /// Start ten corrector widths right of `supp G` and double the offset
    /// until the left-hand side moves by less than `1e-8`.
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SharpnessRow {
    pub eps: f64,
    pub n: f64,
    pub lhs: f64,
    pub bound: f64,
    pub gap: f64,
    pub runtime_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessTable {
    pub rows: Vec<SharpnessRow>,
    /// Window scale `m` used for a rapidly decaying weight.
    pub window: Option<f64>,
}

impl SharpnessTable {
    /// CSV with header `eps,n,lhs,bound,gap,runtime_ms`.
    pub fn to_csv_string(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

/// `χ(v/m)·G(v)` with `χ = 1` on `[−1, 1]` and `0` outside `[−2, 2]`.
pub fn window_weight(g: &WeightFunction, m: f64) -> Result<WeightFunction> {
    if !(m > 0.0) {
        return Err(Error::InvalidParameter("window scale must be positive".into()));
    }
    let gc = g.clone();
    let lim = 2.0 * m;
    let nodes = uniform_nodes(-1.05 * lim, 1.05 * lim, 8193);
    let f = RealFunction::from_fn(nodes, move |v| if v.abs() >= lim { 0.0 } else { smooth_step(2.0 - (v / m).abs()) * gc.eval(v) }, Tail::Zero, Tail::Zero)?;
    Ok(WeightFunction::new(f, Some(Interval::new(-lim, lim)?), DecayClass::Compact)?.with_label(format!("{}-windowed", g.label())))
}

fn windowed(g: &WeightFunction, c: f64, tol: &ToleranceSet) -> Result<(WeightFunction, f64)> {
    let mut m = 1.0;
    let mut prev = qei_functional(&window_weight(g, m)?, c, tol)?;
    for _ in 0..24 {
        m *= 2.0;
        let gm = window_weight(g, m)?;
        let b = qei_functional(&gm, c, tol)?;
        if (b - prev).abs() < 1e-9 {
            return Ok((gm, m));
        }
        prev = b;
    }
    Err(Error::NoConvergence)
}

/// Left-hand side `∫ G⟨T⟩` on the regularised states against the sharp
/// bound, one row per `ε`.
pub fn sharpness_experiment(g: &WeightFunction, c: f64, eps_list: &[f64], policy: NPolicy) -> Result<SharpnessTable> {
    sharpness_experiment_with(g, c, eps_list, policy, &ToleranceSet::default())
}

pub fn sharpness_experiment_with(g: &WeightFunction, c: f64, eps_list: &[f64], policy: NPolicy, tol: &ToleranceSet) -> Result<SharpnessTable> {
    if eps_list.is_empty() || eps_list.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::InvalidParameter("ε list must be nonempty and positive".into()));
    }
    let bound = qei_functional(g, c, tol)?;
    let (gw, window) = match g.decay() {
        DecayClass::Compact => (g.clone(), None),
        DecayClass::Schwartz => {
            let (gm, m) = windowed(g, c, tol)?;
            (gm, Some(m))
        }
    };
    let s = gw.support().ok_or_else(|| Error::InvalidWeight("empty support".into()))?;
    let eta = build_eta(s.length())?;
    let eta_half = eta.support().map(|i| i.hi).unwrap_or(0.0);
    let lhs_at = |eps: f64, n: f64| -> Result<f64> {
        let fam = build_regularized_weight(&gw, eps, n)?;
        sharp_state_profile_with(&fam, c, tol)?.weighted_integral(&gw)
    };
    let mut rows = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let start = Instant::now();
        let (n, lhs) = match policy {
            NPolicy::Fixed(n) => (n, lhs_at(eps, n)?),
            NPolicy::Auto => {
                let width = 2.0 * lambda_eps(&gw, eps)? * eta_half;
                let mut offset = 10.0 * width;
                let mut n = s.hi + offset;
                let mut lhs = lhs_at(eps, n)?;
                for _ in 0..6 {
                    offset *= 2.0;
                    let n2 = s.hi + offset;
                    let l2 = lhs_at(eps, n2)?;
                    let done = (l2 - lhs).abs() < 1e-8;
                    n = n2;
                    lhs = l2;
                    if done {
                        break;
                    }
                }
                (n, lhs)
            }
        };
        rows.push(SharpnessRow { eps, n, lhs, bound, gap: lhs - bound, runtime_ms: start.elapsed().as_secs_f64() * 1e3 });
    }
    Ok(SharpnessTable { rows, window })
}

/// The left- and right-moving bounds, which are attained simultaneously.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoComponentBound {
    pub left: f64,
    pub right: f64,
    pub simultaneously_sharp: bool,
}

pub fn two_component_bound(gl: &WeightFunction, gr: &WeightFunction, cl: f64, cr: f64) -> Result<TwoComponentBound> {
    let tol = ToleranceSet::default();
    Ok(TwoComponentBound { left: qei_functional(gl, cl, &tol)?, right: qei_functional(gr, cr, &tol)?, simultaneously_sharp: true })
}
