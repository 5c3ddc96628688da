use crate::{Error, Result};

/// Light-ray Möbius map `u ↦ (au+b)/(cu+d)` with `ad − bc = 1`, identified
/// with its negation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusElement {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl MobiusElement {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det - 1.0).abs().le(&1e-14) {
            return Err(Error::InvalidParameter(format!("Möbius determinant {det} ≠ 1")));
        }
        Ok(Self { a, b, c, d })
    }

    /// Rescales an arbitrary matrix with positive determinant to unit determinant.
    pub fn normalized(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > 0.0) {
            return Err(Error::InvalidParameter("Möbius matrix must have positive determinant".into()));
        }
        let s = det.sqrt();
        Ok(Self { a: a / s, b: b / s, c: c / s, d: d / s })
    }

    pub fn identity() -> Self {
        Self { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    /// `u ↦ u + s`.
    pub fn translation(s: f64) -> Self {
        Self { a: 1.0, b: s, c: 0.0, d: 1.0 }
    }

    /// `u ↦ λu`.
    pub fn dilation(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidParameter("dilation parameter must be positive".into()));
        }
        let r = lambda.sqrt();
        Ok(Self { a: r, b: 0.0, c: 0.0, d: 1.0 / r })
    }

    /// `u ↦ u/(1 − su)`, the conjugate of a translation by the half-turn.
    pub fn special_conformal(s: f64) -> Self {
        Self { a: 1.0, b: 0.0, c: -s, d: 1.0 }
    }

    /// Rotation of the circle by `φ` seen on the light ray.
    pub fn rotation(phi: f64) -> Self {
        let (s, c) = (phi / 2.0).sin_cos();
        Self { a: c, b: s, c: -s, d: c }
    }

    /// `u ↦ u/ε + α`.
    pub fn affine(slope: f64, offset: f64) -> Result<Self> {
        if !(slope > 0.0) {
            return Err(Error::InvalidParameter("affine slope must be positive".into()));
        }
        let r = slope.sqrt();
        Ok(Self { a: r, b: offset / r, c: 0.0, d: 1.0 / r })
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// Image of `u` (infinite at the pole).
    pub fn apply(&self, u: f64) -> f64 {
        (self.a * u + self.b) / (self.c * u + self.d)
    }

    /// Derivative `1/(cu+d)²`.
    pub fn derivative(&self, u: f64) -> f64 {
        1.0 / (self.c * u + self.d).powi(2)
    }

    /// Image of the homogeneous pair `(p, q)` representing `p/q`.
    pub fn apply_homogeneous(&self, p: f64, q: f64) -> (f64, f64) {
        (self.a * p + self.b * q, self.c * p + self.d * q)
    }

    /// `self ∘ other`.
    pub fn compose(&self, o: &Self) -> Self {
        Self {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Whether the point at infinity is fixed (`c = 0`).
    pub fn fixes_infinity(&self) -> bool {
        self.c == 0.0
    }

    /// Equality as maps, i.e. up to overall sign.
    pub fn approx_eq(&self, o: &Self, tol: f64) -> bool {
        let same = [(self.a - o.a), (self.b - o.b), (self.c - o.c), (self.d - o.d)].iter().all(|x| x.abs() <= tol);
        let neg = [(self.a + o.a), (self.b + o.b), (self.c + o.c), (self.d + o.d)].iter().all(|x| x.abs() <= tol);
        same || neg
    }
}
