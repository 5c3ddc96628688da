use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;

use super::line::lift_mobius;
use super::mobius::MobiusElement;
use crate::numerics::spectral::{periodic_nodes, PeriodicSeries, DERIVATIVE_FLOOR};
use crate::numerics::Interval;
use crate::{Error, Result, ToleranceSet};

/// Default number of θ-nodes.
pub const DEFAULT_NODES: usize = 2048;

/// Kinds of one-parameter Möbius subgroups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubgroupKind {
    Rotation,
    Translation,
    Dilation,
    SpecialConformal,
}

/// A lift `ρ` of an orientation-preserving circle diffeomorphism, stored as
/// `ρ(θ) = θ + ρ̃(θ) + 2πk` with `ρ̃` periodic on a uniform grid.
#[derive(Debug, Clone)]
pub struct CircleDiffeo {
    periodic: Vec<f64>,
    winding: i64,
    series: PeriodicSeries,
}

impl CircleDiffeo {
    /// From samples of `ρ(θ_j) − θ_j` (any integer multiple of `2π` included).
    pub fn from_lift_samples(samples: Vec<f64>) -> Result<Self> {
        Self::from_lift_samples_with(samples, &ToleranceSet::default())
    }

    pub fn from_lift_samples_with(samples: Vec<f64>, tol: &ToleranceSet) -> Result<Self> {
        let n = samples.len();
        if n < 8 {
            return Err(Error::InvalidGrid(format!("{n} θ-nodes, need at least 8")));
        }
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidGrid("non-finite sample".into()));
        }
        let mean = samples.iter().sum::<f64>() / n as f64;
        let winding = (mean / (2.0 * PI)).round() as i64;
        let periodic: Vec<f64> = samples.iter().map(|x| x - 2.0 * PI * winding as f64).collect();
        Self::build(periodic, winding, tol)
    }

    fn build(periodic: Vec<f64>, winding: i64, tol: &ToleranceSet) -> Result<Self> {
        let n = periodic.len();
        if n < 8 || periodic.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidGrid("need at least 8 finite θ-samples".into()));
        }
        let series = PeriodicSeries::from_real(&periodic);
        let high = series.high_band_max();
        if high > tol.resolution {
            return Err(Error::ResolutionTooLow(format!("spectral tail {high:.3e} on {n} nodes")));
        }
        let d = Self { periodic, winding, series };
        if let Some((j, v)) = d.derivative_samples(1).iter().enumerate().find(|(_, &v)| !(v > 0.0)) {
            return Err(Error::NotReparametrisation(format!("ρ' = {v} at node {j}")));
        }
        Ok(d)
    }

    /// From a closed-form periodic part `θ ↦ ρ(θ) − θ`.
    pub fn from_periodic_fn<F: Fn(f64) -> f64>(n: usize, f: F) -> Result<Self> {
        Self::from_lift_samples(periodic_nodes(n).into_iter().map(f).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_lift_samples(vec![0.0; n]).expect("identity is valid")
    }

    /// Rotation, translation, dilation or special conformal element.
    pub fn subgroup_element(kind: SubgroupKind, param: f64, n: usize) -> Result<Self> {
        match kind {
            SubgroupKind::Rotation => Self::from_lift_samples(vec![param; n]),
            SubgroupKind::Translation => lift_mobius(&MobiusElement::translation(param), n),
            SubgroupKind::Dilation => lift_mobius(&MobiusElement::dilation(param)?, n),
            SubgroupKind::SpecialConformal => lift_mobius(&MobiusElement::special_conformal(param), n),
        }
    }

    /// `ρ(θ) = θ + s·F(θ)` for a real periodic field `F`.
    pub fn from_field_step<F: Fn(f64) -> f64>(n: usize, field: F, s: f64) -> Result<Self> {
        Self::from_periodic_fn(n, |t| s * field(t))
    }

    /// Seeded random element: a rotation composed with a trigonometric
    /// deformation of at most `k_max` modes, with `min ρ' ≥ 0.28`.
    pub fn random<R: Rng>(rng: &mut R, n: usize, k_max: usize) -> Result<Self> {
        let k_max = k_max.max(1);
        let amps: Vec<f64> = (1..=k_max).map(|k| rng.gen_range(-1.0..1.0) / (k * k) as f64).collect();
        let phases: Vec<f64> = (0..k_max).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
        let shift = rng.gen_range(-PI..PI);
        let strength = rng.gen_range(0.3..0.8);
        let slope = |t: f64| -> f64 { amps.iter().zip(&phases).enumerate().map(|(i, (a, p))| (i + 1) as f64 * a * ((i + 1) as f64 * t + p).cos()).sum() };
        let worst = (0..8 * n).map(|j| -slope(2.0 * PI * j as f64 / (8 * n) as f64)).fold(1e-12, f64::max);
        let s = strength * 0.9 / worst;
        Self::from_periodic_fn(n, |t| shift + s * amps.iter().zip(&phases).enumerate().map(|(i, (a, p))| a * ((i + 1) as f64 * t + p).sin()).sum::<f64>())
    }

    pub fn len(&self) -> usize {
        self.periodic.len()
    }

    pub fn is_empty(&self) -> bool {
        self.periodic.is_empty()
    }

    pub fn nodes(&self) -> Vec<f64> {
        periodic_nodes(self.len())
    }

    /// Periodic part without the `2πk` offset.
    pub fn periodic_part(&self) -> &[f64] {
        &self.periodic
    }

    pub fn winding(&self) -> i64 {
        self.winding
    }

    fn offset(&self) -> f64 {
        2.0 * PI * self.winding as f64
    }

    /// `ρ(θ_j)` at the grid nodes.
    pub fn lift_at_nodes(&self) -> Vec<f64> {
        let o = self.offset();
        self.nodes().iter().zip(&self.periodic).map(|(t, p)| t + p + o).collect()
    }

    /// `ρ` at arbitrary points by trigonometric interpolation.
    pub fn eval_many(&self, thetas: &[f64]) -> Vec<f64> {
        let o = self.offset();
        self.series.eval_many(thetas).iter().zip(thetas).map(|(p, t)| t + p.re + o).collect()
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.eval_many(&[theta])[0]
    }

    /// `ρ'` at arbitrary points.
    pub fn eval_derivative_many(&self, thetas: &[f64]) -> Vec<f64> {
        self.series.derivative_series().eval_many(thetas).iter().map(|p| 1.0 + p.re).collect()
    }

    /// Samples of `ρ^{(order)}` for `order ∈ {1, 2, 3}` at the nodes.
    pub fn derivative_samples(&self, order: u32) -> Vec<f64> {
        let d = self.series.derivative_real(order, DERIVATIVE_FLOOR);
        if order == 1 {
            d.into_iter().map(|x| 1.0 + x).collect()
        } else {
            d
        }
    }

    pub fn series(&self) -> &PeriodicSeries {
        &self.series
    }

    /// Sup-norm distance between lifts at the nodes.
    pub fn distance(&self, other: &Self) -> f64 {
        self.lift_at_nodes().iter().zip(other.lift_at_nodes()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// `self ∘ other` on the node grid of `other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.compose_with(other, &ToleranceSet::default())
    }

    pub fn compose_with(&self, other: &Self, tol: &ToleranceSet) -> Result<Self> {
        let inner = other.lift_at_nodes();
        let outer = self.eval_many(&inner);
        let samples = outer.iter().zip(other.nodes()).map(|(r, t)| r - t).collect();
        Self::from_lift_samples_with(samples, tol)
    }

    /// Pointwise Newton inversion safeguarded by bisection.
    pub fn invert(&self) -> Result<Self> {
        self.invert_with(&ToleranceSet::default())
    }

    pub fn invert_with(&self, tol: &ToleranceSet) -> Result<Self> {
        let o = self.offset();
        let lo_p = self.periodic.iter().copied().fold(f64::INFINITY, f64::min);
        let hi_p = self.periodic.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let margin = 0.5;
        let ev = self.series.evaluator();
        let value = |x: f64| x + ev.eval(x).re + o;
        let mut out = Vec::with_capacity(self.len());
        for t in self.nodes() {
            let mut a = t - o - hi_p - margin;
            let mut b = t - o - lo_p + margin;
            if !(value(a) <= t && value(b) >= t) {
                return Err(Error::NoConvergence);
            }
            let mut x = t - o - ev.eval(t).re;
            x = x.clamp(a, b);
            let mut converged = false;
            for _ in 0..100 {
                let (f, df) = ev.eval_with_derivative(x);
                let r = x + f.re + o - t;
                if r.abs() <= 1e-15 * t.abs().max(1.0) {
                    converged = true;
                    break;
                }
                if r > 0.0 {
                    b = x;
                } else {
                    a = x;
                }
                let d = 1.0 + df.re;
                let mut nx = x - r / d;
                if !(nx > a && nx < b) {
                    nx = 0.5 * (a + b);
                }
                if (nx - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
                    x = nx;
                    converged = true;
                    break;
                }
                x = nx;
            }
            if !converged {
                return Err(Error::NoConvergence);
            }
            out.push(x - t);
        }
        Self::from_lift_samples_with(out, tol)
    }

    /// CSV text with columns `theta, rho_tilde` and the winding in a comment.
    pub fn to_csv_string(&self) -> String {
        let mut s = format!("# winding = {}\ntheta,rho_tilde\n", self.winding);
        for (t, p) in self.nodes().iter().zip(&self.periodic) {
            let _ = writeln!(s, "{t:?},{p:?}");
        }
        s
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut winding = 0i64;
        let mut samples = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(w) = rest.trim().strip_prefix("winding =") {
                    winding = w.trim().parse().map_err(|_| Error::Parse(format!("bad winding '{w}'")))?;
                }
                continue;
            }
            if line.is_empty() || line.starts_with("theta") {
                continue;
            }
            let mut it = line.split(',');
            let _theta = it.next();
            let v: f64 = it
                .next()
                .ok_or_else(|| Error::Parse(format!("missing column in '{line}'")))?
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad number in '{line}'")))?;
            samples.push(v);
        }
        Self::build(samples, winding, &ToleranceSet::default())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string())?;
        Ok(())
    }

    pub fn load_csv(path: &Path) -> Result<Self> {
        Self::from_csv_str(&std::fs::read_to_string(path)?)
    }

    /// Range of `ρ'` over the nodes.
    pub fn derivative_range(&self) -> Interval {
        let d = self.derivative_samples(1);
        let lo = d.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval { lo, hi }
    }
}
