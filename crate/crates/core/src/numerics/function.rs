use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

/// Closed-form evaluator attached to a sampled function.
pub type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Interval with possibly infinite endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn real_line() -> Self {
        Self { lo: f64::NEG_INFINITY, hi: f64::INFINITY }
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }
}

/// Behaviour of a function beyond the last node on one side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail {
    /// Identically zero.
    Zero,
    /// `f(x) = f(b)·(b/x)^p` beyond the edge node `b`.
    PowerDecay { exponent: f64 },
    /// `f(x) = slope·x + intercept`.
    Affine { slope: f64, intercept: f64 },
}

impl Tail {
    /// Value at `x` beyond the edge node `(b, fb)`.
    pub fn eval(&self, b: f64, fb: f64, x: f64) -> f64 {
        match *self {
            Tail::Zero => 0.0,
            Tail::PowerDecay { exponent } => fb * (b / x).abs().powf(exponent),
            Tail::Affine { slope, intercept } => slope * x + intercept,
        }
    }

    /// Oriented integral `∫_b^x` of the tail beyond the edge node `(b, fb)`.
    /// `x` may be infinite.
    pub fn integral(&self, b: f64, fb: f64, x: f64) -> Result<f64> {
        let sign = if x >= b { 1.0 } else { -1.0 };
        match *self {
            Tail::Zero => Ok(0.0),
            Tail::PowerDecay { exponent: p } => {
                if x.is_infinite() {
                    if p <= 1.0 {
                        return if fb == 0.0 { Ok(0.0) } else { Err(Error::DivergentTail) };
                    }
                    Ok(sign * fb * b.abs() / (p - 1.0))
                } else {
                    let (ab, ax) = (b.abs(), x.abs());
                    let val = if (p - 1.0).abs() < 1e-14 {
                        fb * ab * (ax / ab).ln()
                    } else {
                        fb * ab.powf(p) * (ax.powf(1.0 - p) - ab.powf(1.0 - p)) / (1.0 - p)
                    };
                    Ok(sign * val)
                }
            }
            Tail::Affine { slope, intercept } => {
                if x.is_infinite() {
                    if slope == 0.0 && intercept == 0.0 {
                        Ok(0.0)
                    } else {
                        Err(Error::DivergentTail)
                    }
                } else {
                    Ok(slope * (x * x - b * b) / 2.0 + intercept * (x - b))
                }
            }
        }
    }

    fn derivative(&self, order: usize) -> Tail {
        match *self {
            Tail::Zero => Tail::Zero,
            Tail::PowerDecay { exponent } => Tail::PowerDecay { exponent: exponent + order as f64 },
            Tail::Affine { slope, .. } => {
                if order == 1 && slope != 0.0 {
                    Tail::Affine { slope: 0.0, intercept: slope }
                } else {
                    Tail::Zero
                }
            }
        }
    }
}

/// Samples on strictly increasing nodes together with left and right tail models.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    nodes: Vec<f64>,
    values: Vec<f64>,
    left: Tail,
    right: Tail,
}

impl Grid {
    pub const MIN_NODES: usize = 8;

    pub fn new(nodes: Vec<f64>, values: Vec<f64>, left: Tail, right: Tail) -> Result<Self> {
        if nodes.len() < Self::MIN_NODES {
            return Err(Error::InvalidGrid(format!("{} nodes, need at least {}", nodes.len(), Self::MIN_NODES)));
        }
        if nodes.len() != values.len() {
            return Err(Error::InvalidGrid("nodes and values differ in length".into()));
        }
        if nodes.iter().any(|x| !x.is_finite()) || values.iter().any(|y| !y.is_finite()) {
            return Err(Error::InvalidGrid("non-finite sample".into()));
        }
        if nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("nodes not strictly increasing".into()));
        }
        for (tail, edge) in [(left, nodes[0]), (right, nodes[nodes.len() - 1])] {
            if let Tail::PowerDecay { exponent } = tail {
                if edge == 0.0 || !exponent.is_finite() || exponent <= 0.0 {
                    return Err(Error::InvalidGrid("power-decay tail needs a nonzero edge and positive exponent".into()));
                }
            }
        }
        if let Tail::PowerDecay { .. } = left {
            if nodes[0] > 0.0 {
                return Err(Error::InvalidGrid("left power-decay tail needs a negative edge".into()));
            }
        }
        if let Tail::PowerDecay { .. } = right {
            if nodes[nodes.len() - 1] < 0.0 {
                return Err(Error::InvalidGrid("right power-decay tail needs a positive edge".into()));
            }
        }
        Ok(Self { nodes, values, left, right })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn left_tail(&self) -> Tail {
        self.left
    }

    pub fn right_tail(&self) -> Tail {
        self.right
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn lo(&self) -> f64 {
        self.nodes[0]
    }

    pub fn hi(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Spacing if the nodes are uniform to within roundoff.
    pub fn uniform_spacing(&self) -> Option<f64> {
        let n = self.nodes.len();
        let h = (self.hi() - self.lo()) / (n - 1) as f64;
        let tol = 1e-9 * h;
        let ok = self
            .nodes
            .iter()
            .enumerate()
            .all(|(i, &x)| (x - (self.lo() + i as f64 * h)).abs() <= tol.max(1e-12 * x.abs()));
        ok.then_some(h)
    }

    /// Index `i` with `nodes[i] <= x < nodes[i+1]`, clamped to valid intervals.
    pub fn locate(&self, x: f64) -> usize {
        let n = self.nodes.len();
        let p = self.nodes.partition_point(|&t| t <= x);
        p.saturating_sub(1).min(n - 2)
    }

    /// Eight-point Lagrange interpolation inside the span, tails outside.
    pub fn interpolate(&self, x: f64) -> f64 {
        if x < self.lo() {
            return self.left.eval(self.lo(), self.values[0], x);
        }
        if x > self.hi() {
            let n = self.len();
            return self.right.eval(self.hi(), self.values[n - 1], x);
        }
        let i = self.locate(x);
        lagrange_eval(&self.nodes, &self.values, i, x)
    }
}

const STENCIL: usize = 8;

pub(crate) fn stencil_start(n: usize, i: usize) -> usize {
    let w = STENCIL.min(n);
    i.saturating_sub(w / 2 - 1).min(n - w)
}

pub(crate) fn lagrange_eval(nodes: &[f64], values: &[f64], interval: usize, x: f64) -> f64 {
    let n = nodes.len();
    let s = stencil_start(n, interval);
    let w = STENCIL.min(n);
    let xs = &nodes[s..s + w];
    let ys = &values[s..s + w];
    if let Some(k) = xs.iter().position(|&t| t == x) {
        return ys[k];
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..w {
        let mut wj = 1.0;
        for k in 0..w {
            if k != j {
                wj /= xs[j] - xs[k];
            }
        }
        let t = wj / (x - xs[j]);
        num += t * ys[j];
        den += t;
    }
    num / den
}

/// A function on the real line: grid samples, tail models and an optional
/// closed-form evaluator that takes precedence inside the grid span.
#[derive(Clone)]
pub struct RealFunction {
    grid: Grid,
    exact: Option<Evaluator>,
}

impl fmt::Debug for RealFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealFunction")
            .field("nodes", &self.grid.len())
            .field("span", &(self.grid.lo(), self.grid.hi()))
            .field("left", &self.grid.left)
            .field("right", &self.grid.right)
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

impl RealFunction {
    pub fn from_grid(grid: Grid) -> Self {
        Self { grid, exact: None }
    }

    pub fn from_samples(nodes: Vec<f64>, values: Vec<f64>, left: Tail, right: Tail) -> Result<Self> {
        Ok(Self::from_grid(Grid::new(nodes, values, left, right)?))
    }

    /// Samples `f` at `nodes` and keeps `f` as the exact evaluator.
    pub fn from_fn<F>(nodes: Vec<f64>, f: F, left: Tail, right: Tail) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let values = nodes.iter().map(|&x| f(x)).collect();
        let grid = Grid::new(nodes, values, left, right)?;
        Ok(Self { grid, exact: Some(Arc::new(f)) })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn nodes(&self) -> &[f64] {
        self.grid.nodes()
    }

    pub fn values(&self) -> &[f64] {
        self.grid.values()
    }

    pub fn exact(&self) -> Option<&Evaluator> {
        self.exact.as_ref()
    }

    pub fn without_exact(mut self) -> Self {
        self.exact = None;
        self
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Value at `x`: the exact evaluator inside the span when present,
    /// otherwise interpolation; tails outside.
    pub fn eval(&self, x: f64) -> f64 {
        if x >= self.grid.lo() && x <= self.grid.hi() {
            if let Some(f) = &self.exact {
                return f(x);
            }
        }
        self.grid.interpolate(x)
    }

    /// Pointwise transform of the samples with explicitly chosen tails.
    pub fn map_samples<F>(&self, f: F, left: Tail, right: Tail) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64,
    {
        let values = self.nodes().iter().zip(self.values()).map(|(&x, &y)| f(x, y)).collect();
        Self::from_samples(self.nodes().to_vec(), values, left, right)
    }

    pub fn max_abs(&self) -> f64 {
        self.values().iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub(crate) fn derivative_tails(&self, order: usize) -> (Tail, Tail) {
        (self.grid.left.derivative(order), self.grid.right.derivative(order))
    }
}

/// `n` equispaced nodes from `lo` to `hi` inclusive.
pub fn uniform_nodes(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let h = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| if i == n - 1 { hi } else { lo + i as f64 * h }).collect()
}

/// Concatenation of uniform segments `(lo, hi, intervals)` sharing endpoints.
pub fn composite_nodes(segments: &[(f64, f64, usize)]) -> Result<Vec<f64>> {
    let mut out: Vec<f64> = Vec::new();
    for (k, &(lo, hi, m)) in segments.iter().enumerate() {
        if m == 0 || hi <= lo {
            return Err(Error::InvalidGrid(format!("segment {k} is empty")));
        }
        if let Some(&last) = out.last() {
            if (last - lo).abs() > 1e-12 * lo.abs().max(1.0) {
                return Err(Error::InvalidGrid(format!("segment {k} does not continue the previous one")));
            }
            out.pop();
        }
        out.extend(uniform_nodes(lo, hi, m + 1));
    }
    Ok(out)
}
