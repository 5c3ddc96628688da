//! Highest-weight Virasoro modules truncated at a finite level.
//!
//! States are built from PBW monomials `L₋ₙ₁…L₋ₙₖ|h⟩` with `n₁ ≥ … ≥ nₖ > 0`.
//! The Gram form is computed recursively from `L_n† = L₋ₙ` and the Virasoro
//! relations; mode matrices are then expressed in an orthonormal basis of the
//! quotient by null vectors. A product of `k` modes is reliable only on
//! columns of level at most `N` minus the total mode depth.

mod algebra;
mod module;
mod smeared;
mod survey;

pub use algebra::{enumerate_basis, partitions_of, Partition};
pub use module::{gram_matrix, orthonormalize, symmetric_eigen, HighestWeight, ModeMatrix, OrthoMap, VermaModule};
pub use smeared::{mobius_generators, theta_matrix, vacuum_expectation_profile, MobiusGenerators};
pub use survey::{commutator_check, commutator_suite, gw_constant_survey, report, GwRow, VirasoroReport, SUITE_DEPTH};
