//! The sharp bound, regularised reparametrisations that nearly saturate it,
//! and energy profiles of vacuum-descendant states.

mod family;
mod profile;
mod sharpness;

pub use family::{build_eta, build_regularized_weight, build_reparam, lambda_eps, RegularizedFamily};
pub use profile::{sharp_state_profile, sharp_state_profile_with, verify_bound, verify_bound_with, EnergyProfile, ProfileSource, Provenance};
pub use sharpness::{sharpness_experiment, sharpness_experiment_with, two_component_bound, window_weight, NPolicy, SharpnessRow, SharpnessTable, TwoComponentBound};

#[cfg(test)]
mod tests;
