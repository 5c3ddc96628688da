use num_complex::Complex64;
use std::f64::consts::PI;

use crate::{Error, Result};

/// Continuous branch of `arg` along the sequence, starting from the principal
/// value of the first sample.
pub fn unwrap_phase(samples: &[Complex64]) -> Result<Vec<f64>> {
    unwrap_phase_with_step(samples, PI)
}

/// As [`unwrap_phase`], rejecting any step whose principal size reaches `max_step`.
pub fn unwrap_phase_with_step(samples: &[Complex64], max_step: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(samples.len());
    let Some(first) = samples.first() else {
        return Ok(out);
    };
    if samples.iter().any(|z| !(z.re.is_finite() && z.im.is_finite()) || z.norm() == 0.0) {
        return Err(Error::UndersampledPhase);
    }
    let mut acc = first.arg();
    out.push(acc);
    for w in samples.windows(2) {
        let d = (w[1] / w[0]).arg();
        if d.abs() >= max_step.min(PI * (1.0 - 1e-12)) {
            return Err(Error::UndersampledPhase);
        }
        acc += d;
        out.push(acc);
    }
    Ok(out)
}
