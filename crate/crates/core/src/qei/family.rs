use crate::circle::{LineReparam, MobiusElement};
use crate::numerics::{composite_nodes, cumulative_integral, find_root_monotone, integrate, Interval, RealFunction, Tail};
use crate::weights::{standard_bump, DecayClass, WeightFunction};
use crate::{Error, Result};

/// Intervals across the support of `G` in the default grids.
pub(crate) const FINE_INTERVALS: usize = 8192;
const CORRECTOR_INTERVALS: usize = 4096;

fn compact_support(g: &WeightFunction) -> Result<Interval> {
    if g.decay() != DecayClass::Compact {
        return Err(Error::InvalidWeight("a compactly supported weight is required".into()));
    }
    if g.is_trivial() {
        return Err(Error::InvalidWeight("empty support".into()));
    }
    g.support().ok_or_else(|| Error::InvalidWeight("empty support".into()))
}

fn on_interval<F>(iv: Interval, intervals: usize, f: F) -> Result<f64>
where
    F: Fn(f64) -> f64 + Send + Sync + 'static,
{
    let nodes = composite_nodes(&[(iv.lo, iv.hi, intervals)])?;
    integrate(&RealFunction::from_fn(nodes, f, Tail::Zero, Tail::Zero)?, iv)
}

/// `λ_ε = |supp G|⁻¹ ∫ G/(G+ε)`.
pub fn lambda_eps(g: &WeightFunction, eps: f64) -> Result<f64> {
    let s = compact_support(g)?;
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter("ε must be positive".into()));
    }
    let gc = g.clone();
    Ok(on_interval(s, FINE_INTERVALS, move |v| {
        let x = gc.eval(v);
        x / (x + eps)
    })? / s.length())
}

/// Corrector `η = A·bump(v/w)` with `w = 3·support_measure` and `A ≤ 1/2`
/// tuned so that `∫ η/(1−η) = support_measure`.
pub fn build_eta(support_measure: f64) -> Result<WeightFunction> {
    if !(support_measure > 0.0) || !support_measure.is_finite() {
        return Err(Error::InvalidParameter("support measure must be positive".into()));
    }
    let mut w = 3.0 * support_measure;
    loop {
        let capacity = |a: f64| -> Result<f64> {
            on_interval(Interval::new(-w, w)?, 2048, move |v| {
                let e = a * standard_bump(v / w);
                e / (1.0 - e)
            })
        };
        if capacity(0.5)? >= support_measure {
            let a = find_root_monotone(|a| capacity(a).map(|c| c - support_measure).unwrap_or(f64::NAN), Interval::new(0.0, 0.5)?)?;
            let nodes = composite_nodes(&[(-1.05 * w, 1.05 * w, 4096)])?;
            let f = RealFunction::from_fn(nodes, move |v| a * standard_bump(v / w), Tail::Zero, Tail::Zero)?;
            return Ok(WeightFunction::new(f, Some(Interval::new(-w, w)?), DecayClass::Compact)?.with_label("eta"));
        }
        w *= 2.0;
    }
}

/// `G`, `ε`, the translated corrector and the resulting `H` and `V`.
#[derive(Debug, Clone)]
pub struct RegularizedFamily {
    pub g: WeightFunction,
    pub eps: f64,
    pub n: f64,
    pub lambda: f64,
    pub eta: WeightFunction,
    pub h: RealFunction,
    pub v: LineReparam,
}

impl RegularizedFamily {
    /// Half-width of `supp η`.
    pub fn eta_half_width(&self) -> f64 {
        self.eta.support().map(|s| s.hi).unwrap_or(0.0)
    }

    /// Support of `η_{n,ε}(v) = η((v−n)/λ_ε)`.
    pub fn corrector_support(&self) -> Interval {
        let r = self.lambda * self.eta_half_width();
        Interval { lo: self.n - r, hi: self.n + r }
    }

    /// `η_{n,ε}(v)`.
    pub fn corrector(&self, v: f64) -> f64 {
        self.eta.eval((v - self.n) / self.lambda)
    }
}

/// Nodes from `lo` to `hi` whose spacing grows geometrically from `h_lo`
/// and `h_hi` at the ends up to `h_max`.
pub(crate) fn graded_nodes(lo: f64, hi: f64, h_lo: f64, h_hi: f64, h_max: f64) -> Vec<f64> {
    let ratio = 1.08;
    let spacing = |x: f64| h_max.min(h_lo + (x - lo) * (ratio - 1.0)).min(h_hi + (hi - x) * (ratio - 1.0)).max(h_lo.min(h_hi));
    let mut xs = vec![lo];
    let mut x = lo;
    loop {
        let s = spacing(x);
        if x + 1.5 * s >= hi {
            break;
        }
        x += s;
        xs.push(x);
    }
    xs.push(hi);
    if xs.len() < 3 {
        return vec![lo, 0.5 * (lo + hi), hi];
    }
    xs
}

fn join(parts: Vec<Vec<f64>>) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for p in parts {
        let skip = usize::from(out.last().is_some_and(|&l| (l - p[0]).abs() <= 1e-12 * l.abs().max(1.0)));
        out.extend_from_slice(&p[skip..]);
    }
    out
}

/// Grid fine on `supp G` and on the corrector, graded in between and padded
/// by five corrector widths on both sides.
pub(crate) fn family_nodes(s: Interval, c: Interval) -> Vec<f64> {
    let hg = s.length() / FINE_INTERVALS as f64;
    let hc = c.length() / CORRECTOR_INTERVALS as f64;
    let pad = 5.0 * c.length();
    let h_max = 0.05 * c.length();
    join(vec![
        graded_nodes(s.lo - pad, s.lo, h_max, hg, h_max),
        composite_nodes(&[(s.lo, s.hi, FINE_INTERVALS)]).expect("valid segment"),
        graded_nodes(s.hi, c.lo, hg, hc, h_max),
        composite_nodes(&[(c.lo, c.hi, CORRECTOR_INTERVALS)]).expect("valid segment"),
        graded_nodes(c.hi, c.hi + pad, hc, h_max, h_max),
    ])
}

/// `H_{n,ε} = G + ε(1 − η_{n,ε})` and its reparametrisation.
pub fn build_regularized_weight(g: &WeightFunction, eps: f64, n: f64) -> Result<RegularizedFamily> {
    let s = compact_support(g)?;
    let lambda = lambda_eps(g, eps)?;
    let eta = build_eta(s.length())?;
    let r = lambda * eta.support().expect("compact corrector").hi;
    let c = Interval { lo: n - r, hi: n + r };
    if c.lo <= s.hi {
        return Err(Error::SupportOverlap(format!("n below n₀: corrector starts at {} inside supp G = [{}, {}]", c.lo, s.lo, s.hi)));
    }
    let nodes = family_nodes(s, c);
    let (gc, ec) = (g.clone(), eta.clone());
    let h = RealFunction::from_fn(
        nodes,
        move |v| gc.eval(v) + eps * (1.0 - ec.eval((v - n) / lambda)),
        Tail::Affine { slope: 0.0, intercept: eps },
        Tail::Affine { slope: 0.0, intercept: eps },
    )?;
    let v = build_reparam(&h)?;
    Ok(RegularizedFamily { g: g.clone(), eps, n, lambda, eta, h, v })
}

fn constant_tail(t: Tail) -> Option<f64> {
    match t {
        Tail::Affine { slope, intercept } if slope == 0.0 => Some(intercept),
        _ => None,
    }
}

/// `V(v) = ∫₀^v 1/H` with the affine tail `v ↦ v/ε + α`.
pub fn build_reparam(h: &RealFunction) -> Result<LineReparam> {
    let g = h.grid();
    let (el, er) = match (constant_tail(g.left_tail()), constant_tail(g.right_tail())) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::InvalidParameter("H must be constant outside its grid".into())),
    };
    if (el - er).abs() > 1e-14 * el.abs().max(er.abs()) {
        return Err(Error::InvalidParameter("H must take the same constant on both sides".into()));
    }
    let min = h.values().iter().copied().fold(f64::INFINITY, f64::min).min(el);
    if !(min > 0.0) {
        return Err(Error::InvalidParameter(format!("H is not bounded below by a positive constant (min {min})")));
    }
    let eps = el;
    let inv = match h.exact() {
        Some(f) => {
            let f = f.clone();
            RealFunction::from_fn(h.nodes().to_vec(), move |x| 1.0 / f(x), Tail::Affine { slope: 0.0, intercept: 1.0 / eps }, Tail::Affine { slope: 0.0, intercept: 1.0 / eps })?
        }
        None => h.map_samples(|_, y| 1.0 / y, Tail::Affine { slope: 0.0, intercept: 1.0 / eps }, Tail::Affine { slope: 0.0, intercept: 1.0 / eps })?,
    };
    let v = cumulative_integral(&inv, 0.0)?;
    let (lo, hi) = (g.lo(), g.hi());
    let n = v.len();
    let alpha_l = v.values()[0] - lo / eps;
    let alpha_r = v.values()[n - 1] - hi / eps;
    let scale = v.values()[0].abs().max(v.values()[n - 1].abs()).max(1.0);
    if (alpha_l - alpha_r).abs() > 1e-9 * scale {
        return Err(Error::TailMismatch(format!("left offset {alpha_l} differs from right offset {alpha_r}")));
    }
    let tail = MobiusElement::affine(1.0 / eps, 0.5 * (alpha_l + alpha_r))?;
    LineReparam::new(v, inv, tail)
}
