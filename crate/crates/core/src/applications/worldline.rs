use std::path::Path;

use crate::numerics::{differentiate, RealFunction, Tail};
use crate::weights::{qei_functional, DecayClass, WeightFunction};
use crate::{Error, Result, ToleranceSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WorldlineKind {
    Timelike,
    Spacelike,
    /// `u = λ`, `v` constant: only the right-moving density is sampled.
    NullLeft,
    /// `v = λ`, `u` constant.
    NullRight,
    Static,
}

/// A curve `λ ↦ (u(λ), v(λ))` in null coordinates.
#[derive(Debug, Clone)]
pub struct WorldlineCurve {
    pub lambda: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub udot: Vec<f64>,
    pub vdot: Vec<f64>,
    pub kind: WorldlineKind,
    pub eps_min: f64,
}

impl WorldlineCurve {
    pub fn from_fns<U, Ud, V, Vd>(lambda: Vec<f64>, u: U, udot: Ud, v: V, vdot: Vd, kind: WorldlineKind, eps_min: f64) -> Result<Self>
    where
        U: Fn(f64) -> f64,
        Ud: Fn(f64) -> f64,
        V: Fn(f64) -> f64,
        Vd: Fn(f64) -> f64,
    {
        let c = Self {
            u: lambda.iter().map(|&l| u(l)).collect(),
            v: lambda.iter().map(|&l| v(l)).collect(),
            udot: lambda.iter().map(|&l| udot(l)).collect(),
            vdot: lambda.iter().map(|&l| vdot(l)).collect(),
            lambda,
            kind,
            eps_min,
        };
        c.validate()?;
        Ok(c)
    }

    /// `x¹ = a`, proper time `λ = x⁰`.
    pub fn static_line(lambda: Vec<f64>, a: f64) -> Result<Self> {
        Self::from_fns(lambda, move |l| l - a, |_| 1.0, move |l| l + a, |_| 1.0, WorldlineKind::Static, 0.5)
    }

    /// Inertial line of rapidity `β` through the origin, proper time.
    pub fn boosted_line(lambda: Vec<f64>, rapidity: f64) -> Result<Self> {
        let (km, kp) = ((-rapidity).exp(), rapidity.exp());
        Self::from_fns(lambda, move |l| km * l, move |_| km, move |l| kp * l, move |_| kp, WorldlineKind::Timelike, 0.5 * km.min(kp))
    }

    /// Spacelike line `(x⁰, x¹) = (sinh β, cosh β)·λ`, proper distance.
    pub fn spacelike_line(lambda: Vec<f64>, rapidity: f64) -> Result<Self> {
        let (km, kp) = ((-rapidity).exp(), rapidity.exp());
        Self::from_fns(lambda, move |l| -km * l, move |_| -km, move |l| kp * l, move |_| kp, WorldlineKind::Spacelike, 0.5 * km.min(kp))
    }

    /// Affinely parametrised null ray `u = λ`, `v = v0`.
    pub fn null_left(lambda: Vec<f64>, v0: f64) -> Result<Self> {
        Self::from_fns(lambda, |l| l, |_| 1.0, move |_| v0, |_| 0.0, WorldlineKind::NullLeft, 0.0)
    }

    /// Affinely parametrised null ray `v = λ`, `u = u0`.
    pub fn null_right(lambda: Vec<f64>, u0: f64) -> Result<Self> {
        Self::from_fns(lambda, move |_| u0, |_| 0.0, |l| l, |_| 1.0, WorldlineKind::NullRight, 0.0)
    }

    /// CSV with columns `lambda,u,v`; velocities by finite differences.
    pub fn load_csv(path: &Path, kind: WorldlineKind, eps_min: f64) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_path(path)?;
        let (mut l, mut u, mut v) = (Vec::new(), Vec::new(), Vec::new());
        for rec in rdr.records() {
            let rec = rec?;
            let get = |i: usize| -> Result<f64> {
                rec.get(i).ok_or_else(|| Error::Parse("expected columns lambda,u,v".into()))?.parse::<f64>().map_err(|e| Error::Parse(e.to_string()))
            };
            l.push(get(0)?);
            u.push(get(1)?);
            v.push(get(2)?);
        }
        let du = differentiate(&RealFunction::from_samples(l.clone(), u.clone(), Tail::Zero, Tail::Zero)?, 1)?;
        let dv = differentiate(&RealFunction::from_samples(l.clone(), v.clone(), Tail::Zero, Tail::Zero)?, 1)?;
        let c = Self { lambda: l, u, v, udot: du.values().to_vec(), vdot: dv.values().to_vec(), kind, eps_min };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        if self.lambda.len() < 8 || self.lambda.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("λ nodes must be strictly increasing, at least 8".into()));
        }
        if matches!(self.kind, WorldlineKind::Timelike | WorldlineKind::Spacelike | WorldlineKind::Static) {
            for (name, d) in [("u", &self.udot), ("v", &self.vdot)] {
                if let Some(x) = d.iter().find(|x| !(x.abs() >= self.eps_min) || self.eps_min <= 0.0) {
                    return Err(Error::AsymptoticallyNull(format!("|d{name}/dλ| = {} below ε_min = {}", x.abs(), self.eps_min)));
                }
                if !(d.iter().all(|&x| x > 0.0) || d.iter().all(|&x| x < 0.0)) {
                    return Err(Error::AsymptoticallyNull(format!("{name}(λ) is not monotone")));
                }
            }
        }
        Ok(())
    }
}

fn mapped_tail(t: Tail, edge: f64, right: bool) -> Tail {
    match t {
        Tail::PowerDecay { exponent } if (right && edge > 0.0) || (!right && edge < 0.0) => Tail::PowerDecay { exponent },
        _ => Tail::Zero,
    }
}

/// `G(λ(x))·|ẋ(λ(x))|` sampled at the images `x(λ_j)` of the λ-nodes.
fn pushed_weight(g: &WeightFunction, lambda: &[f64], x: &[f64], xdot: &[f64]) -> Result<WeightFunction> {
    let mut pts: Vec<(f64, f64)> = lambda.iter().zip(x).zip(xdot).map(|((&l, &xv), &d)| (xv, g.eval(l) * d.abs())).collect();
    let reversed = pts[0].0 > pts[pts.len() - 1].0;
    if reversed {
        pts.reverse();
    }
    let (nodes, vals): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
    let gt = g.function().grid();
    let (lt, rt) = if reversed { (gt.right_tail(), gt.left_tail()) } else { (gt.left_tail(), gt.right_tail()) };
    let n = nodes.len();
    let f = RealFunction::from_samples(nodes.clone(), vals, mapped_tail(lt, nodes[0], false), mapped_tail(rt, nodes[n - 1], true))?;
    WeightFunction::new(f, None, DecayClass::Schwartz)
}

/// `−(c_R/12π)∫(d/du √(G_R/|dλ/du|))² du − (c_L/12π)∫(d/dv √(G_L/|dλ/dv|))² dv`.
/// Null rays keep only the component they sample.
pub fn worldline_bound(curve: &WorldlineCurve, g: &WeightFunction, c_l: f64, c_r: f64) -> Result<f64> {
    let tol = ToleranceSet::default();
    curve.validate()?;
    match curve.kind {
        WorldlineKind::NullLeft => qei_functional(&pushed_weight(g, &curve.lambda, &curve.u, &curve.udot)?, c_r, &tol),
        WorldlineKind::NullRight => qei_functional(&pushed_weight(g, &curve.lambda, &curve.v, &curve.vdot)?, c_l, &tol),
        _ => {
            let r = qei_functional(&pushed_weight(g, &curve.lambda, &curve.u, &curve.udot)?, c_r, &tol)?;
            let l = qei_functional(&pushed_weight(g, &curve.lambda, &curve.v, &curve.vdot)?, c_l, &tol)?;
            Ok(r + l)
        }
    }
}
