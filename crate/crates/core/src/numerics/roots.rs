use super::function::Interval;
use crate::{Error, Result};

/// Root of a continuous function with a sign change on a finite bracket
/// (Brent's bisection/secant/inverse-quadratic hybrid).
pub fn find_root_monotone<F: Fn(f64) -> f64>(g: F, bracket: Interval) -> Result<f64> {
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    if !bracket.is_finite() {
        return Err(Error::InvalidInterval { lo: a, hi: b });
    }
    let (mut fa, mut fb) = (g(a), g(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::NoSignChange { lo: a, hi: b });
    }
    let scale = fa.abs().max(fb.abs());
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut bisected = true;
    for _ in 0..300 {
        if fb.abs() < 1e-12 * scale * 1e-3 || (b - a).abs() <= 4.0 * f64::EPSILON * b.abs().max(1e-300) {
            return Ok(b);
        }
        let mut s = if fa != fc && fb != fc {
            a * fb * fc / ((fa - fb) * (fa - fc)) + b * fa * fc / ((fb - fa) * (fb - fc)) + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo = (3.0 * a + b) / 4.0;
        let out_of_range = !((s > lo.min(b)) && (s < lo.max(b)));
        let slow = if bisected { (s - b).abs() >= (b - c).abs() / 2.0 } else { (s - b).abs() >= (c - d).abs() / 2.0 };
        if out_of_range || slow {
            s = 0.5 * (a + b);
            bisected = true;
        } else {
            bisected = false;
        }
        let fs = g(s);
        d = c;
        c = b;
        fc = fb;
        if fa.signum() != fs.signum() {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
        if fb == 0.0 {
            return Ok(b);
        }
    }
    if fb.abs() < 1e-12 * scale {
        Ok(b)
    } else {
        Err(Error::NoConvergence)
    }
}
