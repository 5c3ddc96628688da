use std::collections::HashMap;
use std::sync::Mutex;

use faer::{Mat, Side};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::algebra::{level, partitions_of, ModeAction, Partition};
use crate::{Error, Result, ToleranceSet};

/// Central charge and lowest `L₀` eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HighestWeight {
    pub c: f64,
    pub h: f64,
}

impl HighestWeight {
    pub fn new(c: f64, h: f64) -> Result<Self> {
        if !(c >= 0.0 && h >= 0.0 && c.is_finite() && h.is_finite()) {
            return Err(Error::InvalidParameter(format!("need finite c, h ≥ 0 (got c = {c}, h = {h})")));
        }
        Ok(Self { c, h })
    }
}

/// Change of basis from PBW monomials to an orthonormal basis of the
/// quotient by null vectors, level by level.
#[derive(Debug, Clone)]
pub struct OrthoMap {
    /// Columns are the orthonormal vectors of each level in PBW coordinates.
    pub per_level: Vec<DMatrix<f64>>,
    /// Start of each level in the orthonormal index; `offsets[N+1]` is the
    /// dimension.
    pub offsets: Vec<usize>,
    pub null_count: Vec<usize>,
}

impl OrthoMap {
    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    /// Number of orthonormal vectors with level at most `cap`.
    pub fn dim_upto(&self, cap: usize) -> usize {
        self.offsets[(cap + 1).min(self.offsets.len() - 1)]
    }

    /// Level of every orthonormal vector.
    pub fn levels(&self) -> Vec<usize> {
        (0..self.per_level.len()).flat_map(|l| std::iter::repeat_n(l, self.offsets[l + 1] - self.offsets[l])).collect()
    }
}

/// `L_n` in the orthonormal basis. Entries are exact matrix elements;
/// products are exact only on columns of level at most `domain_level_cap`.
#[derive(Debug, Clone)]
pub struct ModeMatrix {
    pub n: i32,
    pub matrix: DMatrix<f64>,
    pub domain_level_cap: usize,
}

/// Highest-weight module truncated at level `N`.
pub struct VermaModule {
    pub hw: HighestWeight,
    pub n_max: usize,
    pub basis: Vec<Vec<Partition>>,
    pub gram: Vec<DMatrix<f64>>,
    ortho: std::result::Result<OrthoMap, Error>,
    action: Mutex<ModeAction>,
    modes: Mutex<HashMap<i32, ModeMatrix>>,
}

impl std::fmt::Debug for VermaModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("VermaModule").field("hw", &self.hw).field("n_max", &self.n_max).finish()
    }
}

/// Eigenvalues (ascending) and eigenvectors of a symmetric matrix.
pub fn symmetric_eigen(m: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let k = m.nrows();
    if k == 0 {
        return Ok((DVector::zeros(0), DMatrix::zeros(0, 0)));
    }
    let a = Mat::<f64>::from_fn(k, k, |i, j| m[(i, j)]);
    let evd = a.self_adjoint_eigen(Side::Lower).map_err(|e| Error::CrossCheckFailed(format!("eigendecomposition failed: {e:?}")))?;
    let (s, u) = (evd.S().column_vector(), evd.U());
    Ok((DVector::from_fn(k, |i, _| s[i]), DMatrix::from_fn(k, k, |i, j| u[(i, j)])))
}

fn index_of(basis: &[Partition]) -> HashMap<&[u32], usize> {
    basis.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect()
}

/// `⟨μ|ν⟩` for all pairs at each level `0..=n`.
pub fn gram_matrix(hw: HighestWeight, n: usize) -> Vec<DMatrix<f64>> {
    let basis: Vec<Vec<Partition>> = (0..=n as u32).map(partitions_of).collect();
    let mut act = ModeAction::new(hw.c, hw.h);
    gram_levels(&basis, &mut act)
}

fn gram_levels(basis: &[Vec<Partition>], act: &mut ModeAction) -> Vec<DMatrix<f64>> {
    let mut grams: Vec<DMatrix<f64>> = Vec::with_capacity(basis.len());
    for (l, b) in basis.iter().enumerate() {
        let k = b.len();
        let mut g = DMatrix::zeros(k, k);
        if l == 0 {
            g[(0, 0)] = 1.0;
            grams.push(g);
            continue;
        }
        for (j, nu) in b.iter().enumerate() {
            for (i, mu) in b.iter().enumerate().filter(|(i, _)| *i <= j) {
                // ⟨μ|ν⟩ = ⟨μ'| L_{μ₁} ν⟩ with μ' = μ minus its first part.
                let a = mu[0];
                let sub = &mu[1..];
                let lower = l - a as usize;
                let idx = index_of(&basis[lower]);
                let isub = idx[sub];
                let mut s = 0.0;
                for (p, x) in act.apply(a as i32, nu) {
                    s += x * grams[lower][(isub, idx[p.as_slice()])];
                }
                g[(i, j)] = s;
                g[(j, i)] = s;
            }
        }
        grams.push(g);
    }
    grams
}

/// `D⁻¹ G D⁻¹` with `D = diag(√|G_ii|)`, and the diagonal `D`.
fn unit_diagonal(g: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>) {
    let k = g.nrows();
    let dmax = (0..k).map(|i| g[(i, i)].abs()).fold(0.0, f64::max);
    let d: Vec<f64> = (0..k).map(|i| if g[(i, i)].abs() > 1e-300 * dmax.max(1e-300) { g[(i, i)].abs().sqrt() } else { 1.0 }).collect();
    (DMatrix::from_fn(k, k, |i, j| g[(i, j)] / (d[i] * d[j])), d)
}

/// Per-level orthonormalisation of the Gram form. The Gram block is first
/// scaled to unit diagonal; eigenvalues below `null_threshold·max` are
/// quotiented, and eigenvalues below `−null_threshold·max` make the weight
/// non-unitary.
pub fn orthonormalize(gram: &[DMatrix<f64>], null_threshold: f64) -> Result<OrthoMap> {
    let mut per_level = Vec::with_capacity(gram.len());
    let mut offsets = vec![0];
    let mut null_count = Vec::with_capacity(gram.len());
    for (l, g) in gram.iter().enumerate() {
        let k = g.nrows();
        let (s, d) = unit_diagonal(g);
        let (values, vectors) = symmetric_eigen(&s)?;
        let max = values.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        if let Some(neg) = values.iter().find(|&&x| x < -null_threshold * max) {
            return Err(Error::NotUnitary(format!("non-unitary highest weight: Gram eigenvalue {neg:.3e} at level {l}")));
        }
        let keep: Vec<usize> = (0..k).filter(|&i| values[i] > null_threshold * max).collect();
        let b = DMatrix::from_fn(k, keep.len(), |r, col| {
            let i = keep[col];
            vectors[(r, i)] / (d[r] * values[i].sqrt())
        });
        null_count.push(k - keep.len());
        offsets.push(offsets[l] + keep.len());
        per_level.push(b);
    }
    Ok(OrthoMap { per_level, offsets, null_count })
}

impl VermaModule {
    /// Basis, Gram blocks and (when the form is positive semidefinite)
    /// orthonormal basis up to level `n`.
    pub fn new(hw: HighestWeight, n: usize) -> Self {
        Self::with_tolerances(hw, n, &ToleranceSet::default())
    }

    pub fn with_tolerances(hw: HighestWeight, n: usize, tol: &ToleranceSet) -> Self {
        let basis: Vec<Vec<Partition>> = (0..=n as u32).map(partitions_of).collect();
        let mut act = ModeAction::new(hw.c, hw.h);
        let gram = gram_levels(&basis, &mut act);
        let ortho = orthonormalize(&gram, tol.null_threshold);
        Self { hw, n_max: n, basis, gram, ortho, action: Mutex::new(act), modes: Mutex::new(HashMap::new()) }
    }

    pub fn basis_size(&self) -> usize {
        self.basis.iter().map(Vec::len).sum()
    }

    pub fn ortho_map(&self) -> Result<&OrthoMap> {
        self.ortho.as_ref().map_err(Clone::clone)
    }

    pub fn is_unitary(&self) -> bool {
        self.ortho.is_ok()
    }

    /// Smallest eigenvalue of each Gram block.
    pub fn gram_min_eigenvalues(&self) -> Result<Vec<f64>> {
        self.gram.iter().map(|g| Ok(symmetric_eigen(g)?.0.iter().copied().fold(f64::INFINITY, f64::min))).collect()
    }

    /// Smallest over largest eigenvalue of each Gram block after scaling to
    /// unit diagonal; the quantity compared against the null threshold.
    pub fn gram_relative_min_eigenvalues(&self) -> Result<Vec<f64>> {
        self.gram
            .iter()
            .map(|g| {
                let (values, _) = symmetric_eigen(&unit_diagonal(g).0)?;
                let max = values.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
                let min = values.iter().copied().fold(f64::INFINITY, f64::min);
                Ok(if max > 0.0 { min / max } else { 0.0 })
            })
            .collect()
    }

    /// `L_n` in the orthonormal basis.
    pub fn mode_matrix(&self, n: i32) -> Result<ModeMatrix> {
        if n.unsigned_abs() as usize > self.n_max {
            return Err(Error::ModeOutOfRange(format!("|{n}| exceeds truncation level {}", self.n_max)));
        }
        if let Some(m) = self.modes.lock().expect("mode cache").get(&n) {
            return Ok(m.clone());
        }
        let om = self.ortho_map()?;
        let dim = om.dim();
        let mut out = DMatrix::zeros(dim, dim);
        let mut act = self.action.lock().expect("mode action");
        for l in 0..=self.n_max {
            let target = l as i64 - n as i64;
            if target < 0 || target > self.n_max as i64 {
                continue;
            }
            let t = target as usize;
            let (src, dst) = (&self.basis[l], &self.basis[t]);
            if om.per_level[l].ncols() == 0 || om.per_level[t].ncols() == 0 {
                continue;
            }
            let idx = index_of(dst);
            let mut a = DMatrix::zeros(dst.len(), src.len());
            for (j, nu) in src.iter().enumerate() {
                for (p, x) in act.apply(n, nu) {
                    debug_assert_eq!(level(&p) as usize, t);
                    a[(idx[p.as_slice()], j)] += x;
                }
            }
            let block = om.per_level[t].transpose() * &self.gram[t] * a * &om.per_level[l];
            out.view_mut((om.offsets[t], om.offsets[l]), (block.nrows(), block.ncols())).copy_from(&block);
        }
        let m = ModeMatrix { n, matrix: out, domain_level_cap: self.n_max - n.unsigned_abs() as usize };
        self.modes.lock().expect("mode cache").insert(n, m.clone());
        Ok(m)
    }
}
