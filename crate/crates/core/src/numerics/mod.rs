//! Shared numerical kernels: grid functions with tail models, quadrature,
//! finite differences, cumulative integrals, phase unwrapping, root finding
//! and periodic spectral tools.

mod diff;
mod function;
mod phase;
mod quadrature;
mod roots;
pub mod spectral;

pub use diff::{differentiate, fornberg_weights};
pub use function::{composite_nodes, uniform_nodes, Evaluator, Grid, Interval, RealFunction, Tail};
pub use phase::{unwrap_phase, unwrap_phase_with_step};
pub use quadrature::{cumulative_integral, integrate, integrate_samples, GAUSS_LEGENDRE_8};
pub use roots::find_root_monotone;

#[cfg(test)]
mod tests;
