use num_complex::Complex64;
use std::f64::consts::PI;

use super::diffeo::CircleDiffeo;
use crate::numerics::spectral::{PeriodicSeries, DERIVATIVE_FLOOR};
use crate::numerics::unwrap_phase_with_step;
use crate::{Result, ToleranceSet};

/// `log σ̊'(e^{iθ_j})` with the imaginary part continued from the principal
/// value at `θ = 0`. Here `σ̊'(z) = ρ'(θ)·e^{i(ρ(θ)−θ)}`.
fn log_derivative(rho: &CircleDiffeo) -> Result<(Vec<f64>, Vec<f64>)> {
    let d = rho.derivative_samples(1);
    let lift = rho.lift_at_nodes();
    let samples: Vec<Complex64> = d.iter().zip(&lift).zip(rho.nodes()).map(|((a, r), t)| Complex64::from_polar(*a, r - t)).collect();
    let arg = unwrap_phase_with_step(&samples, PI / 2.0)?;
    Ok((d.iter().map(|x| x.ln()).collect(), arg))
}

/// Bott cocycle
/// `B(σ₁, σ₂) = −(1/48π)·Re ∮ log((σ₁∘σ₂)'(z)) · d/dz log σ₂'(z) dz`.
pub fn bott_cocycle(s1: &CircleDiffeo, s2: &CircleDiffeo) -> Result<f64> {
    bott_cocycle_with(s1, s2, &ToleranceSet::default())
}

pub fn bott_cocycle_with(s1: &CircleDiffeo, s2: &CircleDiffeo, tol: &ToleranceSet) -> Result<f64> {
    let s12 = s1.compose_with(s2, tol)?;
    let (re12, im12) = log_derivative(&s12)?;
    let (re2, im2) = log_derivative(s2)?;
    let dre2 = PeriodicSeries::from_real(&re2).derivative_real(1, DERIVATIVE_FLOOR);
    let dim2 = PeriodicSeries::from_real(&im2).derivative_real(1, DERIVATIVE_FLOOR);
    let n = s2.len() as f64;
    let sum: f64 = (0..s2.len()).map(|j| re12[j] * dre2[j] - im12[j] * dim2[j]).sum();
    Ok(-(sum * 2.0 * PI / n) / (48.0 * PI))
}
