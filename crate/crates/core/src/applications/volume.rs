use std::fmt;
use std::path::Path;
use std::sync::Arc;

use crate::numerics::{uniform_nodes, RealFunction, Tail, GAUSS_LEGENDRE_8};
use crate::weights::{qei_functional, DecayClass, WeightFunction};
use crate::{Error, Result, ToleranceSet};

type Components = Arc<dyn Fn(f64, f64) -> [f64; 4] + Send + Sync>;

/// Default samples per axis.
pub const TENSOR_GRID: usize = 512;
const NULL_NODES: usize = 8193;
const SCAN_NODES: usize = 1025;
const LINE_PANELS: usize = 96;

/// Components `f^{00}, f^{01}, f^{10}, f^{11}` on a rectangle in `(x⁰, x¹)`,
/// taken to vanish outside it.
#[derive(Clone)]
pub struct TensorWeight {
    pub x0: Vec<f64>,
    pub x1: Vec<f64>,
    /// Row-major samples, `samples[i·n1 + j] = f(x0[i], x1[j])`.
    pub samples: Vec<[f64; 4]>,
    exact: Option<Components>,
}

impl fmt::Debug for TensorWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TensorWeight")
            .field("x0", &(self.x0[0], self.x0[self.x0.len() - 1], self.x0.len()))
            .field("x1", &(self.x1[0], self.x1[self.x1.len() - 1], self.x1.len()))
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

impl TensorWeight {
    /// Samples `f` on a `TENSOR_GRID²` grid and keeps it for off-grid use.
    pub fn from_fn<F>(x0: (f64, f64), x1: (f64, f64), f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> [f64; 4] + Send + Sync + 'static,
    {
        Self::from_fn_with(x0, x1, TENSOR_GRID, f)
    }

    pub fn from_fn_with<F>(x0: (f64, f64), x1: (f64, f64), n: usize, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> [f64; 4] + Send + Sync + 'static,
    {
        if !(x0.0 < x0.1 && x1.0 < x1.1) || n < 8 {
            return Err(Error::InvalidGrid("tensor weight needs a nondegenerate rectangle and ≥ 8 nodes per axis".into()));
        }
        let a = uniform_nodes(x0.0, x0.1, n);
        let b = uniform_nodes(x1.0, x1.1, n);
        let samples = a.iter().flat_map(|&s| b.iter().map(move |&t| (s, t))).map(|(s, t)| f(s, t)).collect();
        Ok(Self { x0: a, x1: b, samples, exact: Some(Arc::new(f)) })
    }

    /// Scalar weight `f^{00} = w`, other components zero.
    pub fn scalar<F>(x0: (f64, f64), x1: (f64, f64), w: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self::from_fn(x0, x1, move |s, t| [w(s, t), 0.0, 0.0, 0.0])
    }

    /// Weight with prescribed `f^{uu}` and `f^{vv}` as functions of `(u, v)`.
    pub fn from_null_components<A, B>(x0: (f64, f64), x1: (f64, f64), fuu: A, fvv: B) -> Result<Self>
    where
        A: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        B: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self::from_fn(x0, x1, move |s, t| {
            let (u, v) = (s - t, s + t);
            let (a, b) = (fuu(u, v), fvv(u, v));
            let sym = 0.25 * (a + b);
            let off = 0.25 * (b - a);
            [sym, off, off, sym]
        })
    }

    pub fn zero(x0: (f64, f64), x1: (f64, f64)) -> Result<Self> {
        Self::from_fn_with(x0, x1, 16, |_, _| [0.0; 4])
    }

    /// CSV with columns `x0,x1,f00,f01,f10,f11` on a full rectangular grid.
    pub fn load_csv(path: &Path) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_path(path)?;
        let mut rows: Vec<[f64; 6]> = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let mut r = [0.0; 6];
            for (k, slot) in r.iter_mut().enumerate() {
                *slot = rec.get(k).ok_or_else(|| Error::Parse("expected 6 columns".into()))?.parse().map_err(|e: std::num::ParseFloatError| Error::Parse(e.to_string()))?;
            }
            rows.push(r);
        }
        rows.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        let mut x0: Vec<f64> = rows.iter().map(|r| r[0]).collect();
        x0.dedup();
        let mut x1: Vec<f64> = rows.iter().map(|r| r[1]).collect();
        x1.sort_by(f64::total_cmp);
        x1.dedup();
        if x0.len() * x1.len() != rows.len() || x0.len() < 8 || x1.len() < 8 {
            return Err(Error::Parse("tensor weight CSV must cover a full rectangular grid of at least 8×8".into()));
        }
        let samples = rows.iter().map(|r| [r[2], r[3], r[4], r[5]]).collect();
        Ok(Self { x0, x1, samples, exact: None })
    }

    pub fn to_csv_string(&self) -> String {
        let mut s = String::from("x0,x1,f00,f01,f10,f11\n");
        let n1 = self.x1.len();
        for (i, &a) in self.x0.iter().enumerate() {
            for (j, &b) in self.x1.iter().enumerate() {
                let f = self.samples[i * n1 + j];
                s.push_str(&format!("{a:?},{b:?},{:?},{:?},{:?},{:?}\n", f[0], f[1], f[2], f[3]));
            }
        }
        s
    }

    fn inside(&self, s: f64, t: f64) -> bool {
        s >= self.x0[0] && s <= self.x0[self.x0.len() - 1] && t >= self.x1[0] && t <= self.x1[self.x1.len() - 1]
    }

    /// Components at `(x⁰, x¹)`: exact when available, bilinear otherwise.
    pub fn eval(&self, s: f64, t: f64) -> [f64; 4] {
        if !self.inside(s, t) {
            return [0.0; 4];
        }
        if let Some(f) = &self.exact {
            return f(s, t);
        }
        let loc = |xs: &[f64], x: f64| -> (usize, f64) {
            let k = xs.partition_point(|&p| p <= x).clamp(1, xs.len() - 1) - 1;
            (k, (x - xs[k]) / (xs[k + 1] - xs[k]))
        };
        let (i, a) = loc(&self.x0, s);
        let (j, b) = loc(&self.x1, t);
        let n1 = self.x1.len();
        let at = |i: usize, j: usize| self.samples[i * n1 + j];
        let mut out = [0.0; 4];
        for (k, o) in out.iter_mut().enumerate() {
            *o = (1.0 - a) * (1.0 - b) * at(i, j)[k] + a * (1.0 - b) * at(i + 1, j)[k] + (1.0 - a) * b * at(i, j + 1)[k] + a * b * at(i + 1, j + 1)[k];
        }
        out
    }

    /// `(f^{uu}, f^{vv})` at `(x⁰, x¹)`.
    pub fn null_components(&self, s: f64, t: f64) -> (f64, f64) {
        let f = self.eval(s, t);
        (f[0] + f[3] - f[1] - f[2], f[0] + f[3] + f[1] + f[2])
    }

    fn x0_range(&self) -> (f64, f64) {
        (self.x0[0], self.x0[self.x0.len() - 1])
    }

    fn x1_range(&self) -> (f64, f64) {
        (self.x1[0], self.x1[self.x1.len() - 1])
    }

    /// `∫ g` along the null line with the other null coordinate fixed; the
    /// `1/2` is the Jacobian of `dx⁰dx¹ = ½ du dv`.
    fn line_average(&self, fixed: f64, right_mover: bool) -> f64 {
        let (a0, b0) = self.x0_range();
        let (a1, b1) = self.x1_range();
        let (lo, hi) = if right_mover {
            ((2.0 * a0 - fixed).max(2.0 * a1 + fixed), (2.0 * b0 - fixed).min(2.0 * b1 + fixed))
        } else {
            ((2.0 * a0 - fixed).max(fixed - 2.0 * b1), (2.0 * b0 - fixed).min(fixed - 2.0 * a1))
        };
        if hi <= lo {
            return 0.0;
        }
        let h = (hi - lo) / LINE_PANELS as f64;
        let mut sum = 0.0;
        for p in 0..LINE_PANELS {
            let (pa, pb) = (lo + p as f64 * h, lo + (p + 1) as f64 * h);
            let (m, r) = (0.5 * (pa + pb), 0.5 * (pb - pa));
            for (x, w) in GAUSS_LEGENDRE_8 {
                let y = m + r * x;
                let (u, v) = if right_mover { (fixed, y) } else { (y, fixed) };
                let (fuu, fvv) = self.null_components(0.5 * (u + v), 0.5 * (v - u));
                sum += w * r * if right_mover { fuu } else { fvv };
            }
        }
        0.5 * sum
    }
}

/// `F_R(u) = ½∫ f^{uu} dv` and `F_L(v) = ½∫ f^{vv} du`, with
/// nonnegativity flags.
#[derive(Debug, Clone)]
pub struct NullAverages {
    pub f_l: RealFunction,
    pub f_r: RealFunction,
    pub f_l_nonnegative: bool,
    pub f_r_nonnegative: bool,
}

fn nonnegative(f: &RealFunction) -> bool {
    let m = f.max_abs();
    f.values().iter().all(|&x| x >= -1e-12 * m.max(1e-300))
}

/// Smallest scan-grid interval outside of which `f` vanishes.
pub(crate) fn support_span<F: Fn(f64) -> f64>(lo: f64, hi: f64, f: F) -> (f64, f64) {
    let scan = uniform_nodes(lo, hi, SCAN_NODES);
    let nz: Vec<usize> = (0..SCAN_NODES).filter(|&k| f(scan[k]) != 0.0).collect();
    match (nz.first(), nz.last()) {
        (Some(&a), Some(&b)) if b > a => (scan[a.saturating_sub(1)], scan[(b + 1).min(SCAN_NODES - 1)]),
        _ => (lo, hi),
    }
}

pub fn null_averages(fw: &TensorWeight) -> Result<NullAverages> {
    let (a0, b0) = fw.x0_range();
    let (a1, b1) = fw.x1_range();
    let build = |lo: f64, hi: f64, right: bool| -> Result<RealFunction> {
        let (lo, hi) = support_span(lo, hi, |x| fw.line_average(x, right));
        let w = fw.clone();
        RealFunction::from_fn(uniform_nodes(lo, hi, NULL_NODES), move |x| w.line_average(x, right), Tail::Zero, Tail::Zero)
    };
    let f_r = build(a0 - b1, b0 - a1, true)?;
    let f_l = build(a0 + a1, b0 + b1, false)?;
    Ok(NullAverages { f_l_nonnegative: nonnegative(&f_l), f_r_nonnegative: nonnegative(&f_r), f_l, f_r })
}

/// A nonnegative null average as a weight, with roundoff negatives cleared.
pub(crate) fn as_weight(f: &RealFunction, label: &str) -> Result<WeightFunction> {
    if !nonnegative(f) {
        return Err(Error::NegativeNullAverage(format!("hypothesis violated: null averages must be nonnegative ({label})")));
    }
    let g = f.clone();
    let clean = RealFunction::from_fn(f.nodes().to_vec(), move |x| g.eval(x).max(0.0), Tail::Zero, Tail::Zero)?;
    Ok(WeightFunction::new(clean, None, DecayClass::Schwartz)?.with_label(label))
}

/// `−(c_L/12π)∫(√F_L)'² dv − (c_R/12π)∫(√F_R)'² du`.
pub fn worldvolume_bound(fw: &TensorWeight, c_l: f64, c_r: f64) -> Result<f64> {
    let na = null_averages(fw)?;
    let tol = ToleranceSet::default();
    Ok(qei_functional(&as_weight(&na.f_l, "F_L")?, c_l, &tol)? + qei_functional(&as_weight(&na.f_r, "F_R")?, c_r, &tol)?)
}
