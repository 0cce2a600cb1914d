//! Projection onto wald space inside the SPD cone, and approximate geodesics
//! built from it.

mod chart;
mod descent;
mod geodesic;
mod star;

pub use chart::{Chart, RESOLVE_LENGTH};
pub use descent::{project_exhaustive, project_global, project_within_orthant, ProjectOptions, ProjectionResult};
pub use geodesic::{approx_intrinsic_distance, recursive_geodesic, symmetrized_geodesic, ApproxGeodesic};
pub use star::{balanced_quartet, star_distance_profile, star_quartet};
