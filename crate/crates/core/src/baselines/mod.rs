//! Classical tree distances used for comparison.

mod bhv;
mod compare;
mod maxflow;
mod pathdiff;

pub use bhv::{bhv_distance, bhv_geodesic, BhvGeodesic, SupportBlock};
pub use compare::{compare_metrics, pearson, DistanceMatrixReport, PairFailure, TreeMetric};
pub use maxflow::min_vertex_cover;
pub use pathdiff::path_difference_distance;
