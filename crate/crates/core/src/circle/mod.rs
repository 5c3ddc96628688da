//! The universal cover of orientation-preserving circle diffeomorphisms and
//! its light-ray picture.
//!
//! Lifts are stored by their periodic part on a uniform θ-grid and evaluated
//! off-grid by trigonometric interpolation. Light-ray reparametrisations are
//! related to lifts by the Cayley transform `z = (1+iv)/(1−iv)`, under which
//! `θ = 2·arctan v`.

mod cocycle;
mod diffeo;
mod field;
mod line;
mod mobius;
mod schwarzian;

pub use cocycle::{bott_cocycle, bott_cocycle_with};
pub use diffeo::{CircleDiffeo, SubgroupKind, DEFAULT_NODES};
pub use field::{gamma_conjugate, virasoro_cocycle, virasoro_cocycle_complex, CircleFunction};
pub use line::{cayley, inverse_cayley, lift_line_reparam, lift_mobius, LineReparam};
pub use mobius::MobiusElement;
pub use schwarzian::{circle_map_samples, schwarzian, schwarzian_from_derivative, HasSchwarzian, Schwarzian};

/// Shorthand for [`CircleDiffeo::compose`].
pub fn compose(a: &CircleDiffeo, b: &CircleDiffeo) -> crate::Result<CircleDiffeo> {
    a.compose(b)
}

/// Shorthand for [`CircleDiffeo::invert`].
pub fn invert(a: &CircleDiffeo) -> crate::Result<CircleDiffeo> {
    a.invert()
}

/// Shorthand for [`CircleDiffeo::subgroup_element`] on the default grid.
pub fn subgroup_element(kind: SubgroupKind, param: f64) -> crate::Result<CircleDiffeo> {
    CircleDiffeo::subgroup_element(kind, param, DEFAULT_NODES)
}
