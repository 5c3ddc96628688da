//! Numerical machinery for sharp quantum energy inequalities in two-dimensional
//! conformal field theory.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`] holds grid functions, quadrature, finite differences, phase
//!   unwrapping and root finding.
//! * [`weights`] implements smearing weights `G` and the bound functional
//!   `-(c/12π)∫((√G)')²`.
//! * [`circle`] models lifts of circle diffeomorphisms, light-ray
//!   reparametrisations, Schwarzian derivatives and the Bott/Virasoro cocycles.
//! * [`qei`] builds the regularised families whose transformed vacua saturate
//!   the bound.
//! * [`applications`] covers worldline, worldvolume, moving-mirror and
//!   unweighted-average applications.
//! * [`virasoro`] provides level-truncated highest-weight modules.

pub mod applications;
pub mod circle;
pub mod error;
pub mod numerics;
pub mod qei;
pub mod tolerance;
pub mod virasoro;
pub mod weights;

pub use error::{Error, Result};
pub use tolerance::ToleranceSet;
