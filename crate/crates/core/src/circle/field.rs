use num_complex::Complex64;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use crate::numerics::spectral::{periodic_nodes, PeriodicSeries, DERIVATIVE_FLOOR};
use crate::{Error, Result, ToleranceSet};

/// A smooth complex function on the unit circle sampled at `z_j = e^{iθ_j}`.
///
/// A vector field `f(z) ∂_z` corresponds to the real field `F(θ) ∂_θ` with
/// `f(e^{iθ}) = i e^{iθ} F(θ)`; such fields are exactly the fixed points of
/// [`CircleFunction::gamma_conjugate`].
#[derive(Debug, Clone, PartialEq)]
pub struct CircleFunction {
    samples: Vec<Complex64>,
}

fn zs(n: usize) -> impl Iterator<Item = Complex64> {
    periodic_nodes(n).into_iter().map(|t| Complex64::from_polar(1.0, t))
}

impl CircleFunction {
    pub fn from_samples(samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() < 8 {
            return Err(Error::InvalidGrid("need at least 8 samples".into()));
        }
        Ok(Self { samples })
    }

    /// Samples `f(e^{iθ_j})`.
    pub fn from_fn<F: Fn(Complex64) -> Complex64>(n: usize, f: F) -> Self {
        Self { samples: zs(n).map(f).collect() }
    }

    /// `f(z) = iz·F(θ)` for a real field `F`.
    pub fn from_real_field<F: Fn(f64) -> f64>(n: usize, field: F) -> Self {
        let samples = periodic_nodes(n).into_iter().map(|t| Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, t) * field(t)).collect();
        Self { samples }
    }

    /// Laurent polynomial `Σ_k a_k z^k` from `(k, a_k)` pairs.
    pub fn from_laurent(n: usize, terms: &[(i64, Complex64)]) -> Self {
        Self::from_fn(n, |z| terms.iter().map(|&(k, a)| a * z.powi(k as i32)).sum())
    }

    /// Generator of rotations, `iz` (real field `1`).
    pub fn rotation(n: usize) -> Self {
        Self::from_fn(n, |z| Complex64::i() * z)
    }

    /// Generator of translations, `(i/2)(1+z)²` (real field `1 + cos θ`).
    pub fn translation(n: usize) -> Self {
        Self::from_fn(n, |z| Complex64::new(0.0, 0.5) * (1.0 + z) * (1.0 + z))
    }

    /// Generator of special conformal maps, `−(i/2)(1−z)²` (real field `1 − cos θ`).
    pub fn special_conformal(n: usize) -> Self {
        Self::from_fn(n, |z| Complex64::new(0.0, -0.5) * (1.0 - z) * (1.0 - z))
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// `(Γf)(z) = −z²·conj(f(z))`.
    pub fn gamma_conjugate(&self) -> Self {
        let samples = zs(self.len()).zip(&self.samples).map(|(z, f)| -z * z * f.conj()).collect();
        Self { samples }
    }

    /// Whether `Γf = f` within `tol`.
    pub fn is_gamma_real(&self, tol: f64) -> bool {
        self.gamma_conjugate().samples.iter().zip(&self.samples).all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Real field `F(θ) = f(e^{iθ})/(ie^{iθ})` (real part).
    pub fn real_field(&self) -> Vec<f64> {
        zs(self.len()).zip(&self.samples).map(|(z, f)| (f / (Complex64::i() * z)).re).collect()
    }

    /// Coefficient of `z^k`.
    pub fn laurent_coefficient(&self, k: i64) -> Complex64 {
        PeriodicSeries::from_complex(&self.samples).coefficient(k)
    }

    /// Complex derivative `d f/dz = (1/(iz))·df/dθ`, taken spectrally.
    pub fn z_derivative(&self) -> Self {
        let d = PeriodicSeries::from_complex(&self.samples).derivative_samples(1, DERIVATIVE_FLOOR);
        let samples = zs(self.len()).zip(d).map(|(z, dt)| dt / (Complex64::i() * z)).collect();
        Self { samples }
    }

    /// `∮ f(z) dz` by the trapezoidal rule in θ.
    pub fn contour_integral(&self) -> Complex64 {
        let n = self.len() as f64;
        zs(self.len()).zip(&self.samples).map(|(z, f)| f * Complex64::i() * z).sum::<Complex64>() * (2.0 * PI / n)
    }

    /// Largest Laurent coefficient with `|k| > n/4`.
    pub fn resolution_error(&self) -> f64 {
        PeriodicSeries::from_complex(&self.samples).high_band_max()
    }

    pub fn check_resolution(&self, tol: &ToleranceSet) -> Result<()> {
        let e = self.resolution_error();
        if e > tol.resolution {
            return Err(Error::ResolutionTooLow(format!("circle function spectral tail {e:.3e}")));
        }
        Ok(())
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self { samples: self.samples.iter().map(|f| f * a).collect() }
    }

    pub fn sup_distance(&self, other: &Self) -> f64 {
        self.samples.iter().zip(&other.samples).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl Add for &CircleFunction {
    type Output = CircleFunction;
    fn add(self, o: &CircleFunction) -> CircleFunction {
        CircleFunction { samples: self.samples.iter().zip(&o.samples).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CircleFunction {
    type Output = CircleFunction;
    fn sub(self, o: &CircleFunction) -> CircleFunction {
        CircleFunction { samples: self.samples.iter().zip(&o.samples).map(|(a, b)| a - b).collect() }
    }
}

impl Mul for &CircleFunction {
    type Output = CircleFunction;
    fn mul(self, o: &CircleFunction) -> CircleFunction {
        CircleFunction { samples: self.samples.iter().zip(&o.samples).map(|(a, b)| a * b).collect() }
    }
}

/// `Γf`.
pub fn gamma_conjugate(f: &CircleFunction) -> CircleFunction {
    f.gamma_conjugate()
}

/// `(1/48π) ∮ (f g''' − f''' g) dz` as a complex number.
pub fn virasoro_cocycle_complex(f: &CircleFunction, g: &CircleFunction) -> Complex64 {
    let f3 = f.z_derivative().z_derivative().z_derivative();
    let g3 = g.z_derivative().z_derivative().z_derivative();
    let integrand = &(f * &g3) - &(&f3 * g);
    integrand.contour_integral() / (48.0 * PI)
}

/// Real part of [`virasoro_cocycle_complex`] (the whole value for Γ-real fields).
pub fn virasoro_cocycle(f: &CircleFunction, g: &CircleFunction) -> f64 {
    virasoro_cocycle_complex(f, g).re
}
