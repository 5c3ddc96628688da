use serde::{Deserialize, Serialize};

/// Every numerical threshold used by the library, gathered in one place and
/// passed explicitly to the operations that make decisions with them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceSet {
    /// Default relative tolerance.
    pub rel: f64,
    /// Default absolute tolerance.
    pub abs: f64,
    /// Relative cutoff below which a weight counts as zero.
    pub zero_threshold: f64,
    /// Spectral energy fraction allowed in the top band of a periodic grid.
    pub resolution: f64,
    /// Relative sup-norm discrepancy allowed between the two Schwarzian forms.
    pub schwarzian_cross_check: f64,
    /// Relative eigenvalue cutoff separating null from positive Gram directions.
    pub null_threshold: f64,
    /// Minimum admissible |du/dλ|, |dv/dλ| along a worldline.
    pub null_slope_min: f64,
}

impl Default for ToleranceSet {
    fn default() -> Self {
        Self {
            rel: 1e-10,
            abs: 1e-12,
            zero_threshold: 1e-14,
            resolution: 1e-10,
            schwarzian_cross_check: 1e-6,
            null_threshold: 1e-9,
            null_slope_min: 1e-8,
        }
    }
}

impl ToleranceSet {
    /// Returns a copy with the relative tolerance replaced.
    pub fn with_rel(mut self, rel: f64) -> Self {
        self.rel = rel;
        self
    }
}
