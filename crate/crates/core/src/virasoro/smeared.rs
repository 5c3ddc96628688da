use nalgebra::DMatrix;
use num_complex::Complex64;

use super::module::VermaModule;
use crate::circle::CircleFunction;
use crate::{Error, Result};

fn complexify(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}

/// `Θ(f) = −i Σ_n f_{n+1} L_n` for `f(z) = Σ f_k z^k`, modes with `|n| > N`
/// dropped.
pub fn theta_matrix(vm: &VermaModule, f: &CircleFunction) -> Result<DMatrix<Complex64>> {
    let dim = vm.ortho_map()?.dim();
    let mut out = DMatrix::<Complex64>::zeros(dim, dim);
    let n = vm.n_max as i32;
    for k in -n..=n {
        let coef = f.laurent_coefficient(k as i64 + 1);
        if coef == Complex64::new(0.0, 0.0) {
            continue;
        }
        let l = vm.mode_matrix(k)?;
        out += complexify(&l.matrix) * (-Complex64::i() * coef);
    }
    Ok(out)
}

/// Rotation, translation and special conformal generators
/// `H = Θ(iz)`, `P = Θ((i/2)(1+z)²)`, `K = Θ(−(i/2)(1−z)²)`.
pub struct MobiusGenerators {
    pub h: DMatrix<Complex64>,
    pub p: DMatrix<Complex64>,
    pub k: DMatrix<Complex64>,
}

const GENERATOR_NODES: usize = 64;

pub fn mobius_generators(vm: &VermaModule) -> Result<MobiusGenerators> {
    if vm.n_max < 2 {
        return Err(Error::InvalidParameter("Möbius generators need N ≥ 2".into()));
    }
    let n = GENERATOR_NODES;
    Ok(MobiusGenerators {
        h: theta_matrix(vm, &CircleFunction::rotation(n))?,
        p: theta_matrix(vm, &CircleFunction::translation(n))?,
        k: theta_matrix(vm, &CircleFunction::special_conformal(n))?,
    })
}

/// `⟨ψ|Θ(f)|ψ⟩` for the orthonormal basis vector `ψ = e_state` of a
/// vacuum module.
pub fn vacuum_expectation_profile(vm: &VermaModule, f: &CircleFunction, state: usize) -> Result<Complex64> {
    if vm.hw.h != 0.0 {
        return Err(Error::InvalidParameter("no vacuum in this module".into()));
    }
    let dim = vm.ortho_map()?.dim();
    if state >= dim {
        return Err(Error::InvalidParameter(format!("state {state} outside the {dim}-dimensional truncation")));
    }
    Ok(theta_matrix(vm, f)?[(state, state)])
}
