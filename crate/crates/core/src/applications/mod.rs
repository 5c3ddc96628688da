//! Bounds derived from the chiral inequality: worldlines, spacetime volumes,
//! moving mirrors, and the failure of unweighted half-line averages.

mod mirror;
mod record;
mod unweighted;
mod volume;
mod worldline;

pub use mirror::{mirror_bound, mirror_bound_parts, mirror_vacuum_energy, MirrorBoundParts, MirrorTrajectory};
pub use record::BoundRecord;
pub use unweighted::{anec_check, smoothed_halfline_bound, unweighted_demo, DemoParams, DemoRow, UnweightedDemo};
pub use volume::{null_averages, worldvolume_bound, NullAverages, TensorWeight};
pub use worldline::{worldline_bound, WorldlineCurve, WorldlineKind};
