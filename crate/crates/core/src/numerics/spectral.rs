//! Trigonometric interpolation and spectral differentiation on uniform
//! periodic grids over `[0, 2π)`.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Modes smaller than this fraction of the largest are dropped before
/// spectral differentiation.
pub const DERIVATIVE_FLOOR: f64 = 1e-14;

/// Fourier coefficients `c_k` of samples on `θ_j = 2πj/n`, so that
/// `f(θ) = Σ_k c_k e^{ikθ}` with `k` in `[-n/2, n/2)` and the Nyquist mode split
/// symmetrically.
#[derive(Debug, Clone)]
pub struct PeriodicSeries {
    coeffs: Vec<Complex64>,
}

fn fft(data: &mut [Complex64], inverse: bool) {
    let mut planner = FftPlanner::new();
    let plan = if inverse { planner.plan_fft_inverse(data.len()) } else { planner.plan_fft_forward(data.len()) };
    plan.process(data);
}

/// Uniform periodic nodes `2πj/n`, `j = 0..n`.
pub fn periodic_nodes(n: usize) -> Vec<f64> {
    (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
}

impl PeriodicSeries {
    pub fn from_complex(samples: &[Complex64]) -> Self {
        let n = samples.len();
        let mut data = samples.to_vec();
        fft(&mut data, false);
        for c in data.iter_mut() {
            *c /= n as f64;
        }
        Self { coeffs: data }
    }

    pub fn from_real(samples: &[f64]) -> Self {
        let z: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_complex(&z)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Signed wavenumber of storage index `idx`.
    pub fn wavenumber(&self, idx: usize) -> i64 {
        let n = self.coeffs.len();
        if idx < n.div_ceil(2) {
            idx as i64
        } else {
            idx as i64 - n as i64
        }
    }

    /// Coefficient of `e^{ikθ}` (zero outside the resolved band).
    pub fn coefficient(&self, k: i64) -> Complex64 {
        let n = self.coeffs.len() as i64;
        if k.abs() > n / 2 {
            return Complex64::new(0.0, 0.0);
        }
        let idx = k.rem_euclid(n) as usize;
        if n % 2 == 0 && k.abs() == n / 2 {
            return self.coeffs[idx] * 0.5;
        }
        self.coeffs[idx]
    }

    fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.norm()))
    }

    /// Largest coefficient with `|k| > n/4`, relative to the largest overall.
    pub fn high_band_fraction(&self) -> f64 {
        let n = self.coeffs.len() as i64;
        let max = self.max_abs();
        if max == 0.0 {
            return 0.0;
        }
        let mut hi = 0.0_f64;
        for (idx, c) in self.coeffs.iter().enumerate() {
            if self.wavenumber(idx).abs() > n / 4 {
                hi = hi.max(c.norm());
            }
        }
        hi / max
    }

    /// Band limit `K` beyond which every coefficient is negligible.
    fn band(&self) -> i64 {
        let max = self.max_abs();
        let mut k = 0;
        for (idx, c) in self.coeffs.iter().enumerate() {
            if c.norm() > 1e-18 * max {
                k = k.max(self.wavenumber(idx).abs());
            }
        }
        k
    }

    /// Reusable evaluator for repeated off-grid evaluation.
    pub fn evaluator(&self) -> TrigEvaluator {
        let k_max = self.band();
        TrigEvaluator {
            pos: (0..=k_max).map(|k| self.coefficient(k)).collect(),
            neg: (0..=k_max).map(|k| self.coefficient(-k)).collect(),
        }
    }

    /// Trigonometric interpolant at arbitrary points.
    pub fn eval_many(&self, thetas: &[f64]) -> Vec<Complex64> {
        let ev = self.evaluator();
        thetas.iter().map(|&t| ev.eval(t)).collect()
    }

    /// Series of the θ-derivative.
    pub fn derivative_series(&self) -> Self {
        let n = self.coeffs.len();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, &c)| {
                let k = self.wavenumber(idx);
                if n.is_multiple_of(2) && k == -(n as i64 / 2) {
                    Complex64::new(0.0, 0.0)
                } else {
                    c * Complex64::new(0.0, k as f64)
                }
            })
            .collect();
        Self { coeffs }
    }

    /// Largest coefficient magnitude with `|k| > n/4`.
    pub fn high_band_max(&self) -> f64 {
        let n = self.coeffs.len() as i64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(idx, _)| self.wavenumber(*idx).abs() > n / 4)
            .fold(0.0_f64, |m, (_, c)| m.max(c.norm()))
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        self.eval_many(&[theta])[0]
    }

    /// Samples of the `order`-th θ-derivative on the original nodes, with
    /// modes below `floor·max|c|` removed.
    pub fn derivative_samples(&self, order: u32, floor: f64) -> Vec<Complex64> {
        let n = self.coeffs.len();
        let max = self.max_abs();
        let mut data: Vec<Complex64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, &c)| {
                if c.norm() <= floor * max {
                    return Complex64::new(0.0, 0.0);
                }
                let k = self.wavenumber(idx);
                if n.is_multiple_of(2) && k == -(n as i64 / 2) && order % 2 == 1 {
                    return Complex64::new(0.0, 0.0);
                }
                c * Complex64::new(0.0, k as f64).powu(order)
            })
            .collect();
        fft(&mut data, true);
        data
    }

    /// Real parts of [`Self::derivative_samples`].
    pub fn derivative_real(&self, order: u32, floor: f64) -> Vec<f64> {
        self.derivative_samples(order, floor).iter().map(|c| c.re).collect()
    }

    /// Samples on the original nodes.
    pub fn samples(&self) -> Vec<Complex64> {
        let mut data = self.coeffs.clone();
        fft(&mut data, true);
        data
    }
}

/// Band-limited trigonometric polynomial with precomputed coefficients.
#[derive(Debug, Clone)]
pub struct TrigEvaluator {
    pos: Vec<Complex64>,
    neg: Vec<Complex64>,
}

impl TrigEvaluator {
    pub fn eval(&self, t: f64) -> Complex64 {
        self.eval_with_derivative(t).0
    }

    /// Value and θ-derivative at `t`.
    pub fn eval_with_derivative(&self, t: f64) -> (Complex64, Complex64) {
        let step = Complex64::from_polar(1.0, t);
        let mut e = Complex64::new(1.0, 0.0);
        let mut acc = self.pos[0];
        let mut dacc = Complex64::new(0.0, 0.0);
        for k in 1..self.pos.len() {
            e *= step;
            if k % 64 == 0 {
                e = Complex64::from_polar(1.0, k as f64 * t);
            }
            let a = self.pos[k] * e;
            let b = self.neg[k] * e.conj();
            acc += a + b;
            dacc += (a - b) * Complex64::new(0.0, k as f64);
        }
        (acc, dacc)
    }
}
