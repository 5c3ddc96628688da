use nalgebra::DMatrix;
use serde::Serialize;

use super::module::{HighestWeight, VermaModule};
use crate::{Error, Result};

fn max_abs_cols(m: &DMatrix<f64>, cols: usize) -> f64 {
    m.columns(0, cols).iter().fold(0.0_f64, |a, x| a.max(x.abs()))
}

/// `‖[L_m, L_n] − (m−n)L_{m+n} − (c/12)m(m²−1)δ_{m+n,0}‖_max` on the
/// columns of level at most `N − |m| − |n|`.
pub fn commutator_check(vm: &VermaModule, m: i32, n: i32) -> Result<f64> {
    let depth = (m.unsigned_abs() + n.unsigned_abs()) as usize;
    if depth > vm.n_max {
        return Err(Error::ModeOutOfRange(format!("|m| + |n| = {depth} exceeds N = {}", vm.n_max)));
    }
    let om = vm.ortho_map()?;
    let cols = om.dim_upto(vm.n_max - depth);
    let lm = vm.mode_matrix(m)?.matrix;
    let ln = vm.mode_matrix(n)?.matrix;
    let mut r = &lm * &ln - &ln * &lm - vm.mode_matrix(m + n)?.matrix * (m - n) as f64;
    if m + n == 0 {
        let mf = m as f64;
        let central = vm.hw.c / 12.0 * (mf * mf * mf - mf);
        for i in 0..r.nrows() {
            r[(i, i)] -= central;
        }
    }
    Ok(max_abs_cols(&r, cols))
}

/// Largest commutator residual over `1 ≤ |m|, |n| ≤ k` (plus zero modes).
pub fn commutator_suite(vm: &VermaModule, k: i32) -> Result<f64> {
    let mut worst = 0.0_f64;
    for m in -k..=k {
        for n in -k..=k {
            if (m.unsigned_abs() + n.unsigned_abs()) as usize <= vm.n_max {
                worst = worst.max(commutator_check(vm, m, n)?);
            }
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GwRow {
    pub n: i32,
    pub sup_ratio: f64,
}

/// `sup_ψ ‖L_n ψ‖ / ((1+|n|)^{3/2} ‖L₀ ψ‖)` over orthonormal basis vectors of
/// level at most `N − |n|`, for `|n| ≤ N/2`. For `h = 0` the denominator
/// uses `L₀ + 1`.
pub fn gw_constant_survey(vm: &VermaModule) -> Result<Vec<GwRow>> {
    let om = vm.ortho_map()?;
    let levels = om.levels();
    let shift = if vm.hw.h == 0.0 { 1.0 } else { 0.0 };
    let half = (vm.n_max / 2) as i32;
    let mut rows = Vec::new();
    for n in -half..=half {
        let l = vm.mode_matrix(n)?.matrix;
        let cols = om.dim_upto(vm.n_max - n.unsigned_abs() as usize);
        let scale = (1.0 + n.abs() as f64).powf(1.5);
        let sup = (0..cols)
            .map(|j| {
                let num = l.column(j).norm();
                let den = scale * (vm.hw.h + levels[j] as f64 + shift);
                num / den
            })
            .fold(0.0, f64::max);
        rows.push(GwRow { n, sup_ratio: sup });
    }
    Ok(rows)
}

/// Summary of the checks run at one `(c, h, N)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VirasoroReport {
    pub c: f64,
    pub h: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub gram_min_eig_per_level: Vec<f64>,
    /// Same minimum on the unit-diagonal scaled block, relative to its largest eigenvalue.
    pub gram_min_eig_relative_per_level: Vec<f64>,
    pub null_count_per_level: Vec<usize>,
    pub commutator_max_residual: Option<f64>,
    pub gw_table: Vec<GwRow>,
    pub unitary: bool,
}

/// Modes up to `|m|, |n| ≤ 3` enter the commutator suite.
pub const SUITE_DEPTH: i32 = 3;

pub fn report(hw: HighestWeight, n: usize) -> Result<VirasoroReport> {
    let vm = VermaModule::new(hw, n);
    let unitary = vm.is_unitary();
    let (commutator_max_residual, gw_table, nulls) = if unitary {
        (Some(commutator_suite(&vm, SUITE_DEPTH.min(n as i32))?), gw_constant_survey(&vm)?, vm.ortho_map()?.null_count.clone())
    } else {
        (None, Vec::new(), Vec::new())
    };
    Ok(VirasoroReport {
        c: hw.c,
        h: hw.h,
        n,
        gram_min_eig_per_level: vm.gram_min_eigenvalues()?,
        gram_min_eig_relative_per_level: vm.gram_relative_min_eigenvalues()?,
        null_count_per_level: nulls,
        commutator_max_residual,
        gw_table,
        unitary,
    })
}
