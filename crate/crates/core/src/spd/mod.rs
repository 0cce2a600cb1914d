//! Covariance embedding of walds into symmetric positive definite matrices
//! and the affine-invariant geometry there.

mod covariance;
mod frechet;
mod gaussian;
mod gradient;
mod matrix;

pub use covariance::{covariance_matrix, covariance_of, extrinsic_cov_distance, forest_covariance};
pub use frechet::{frechet_mean_spd, FrechetResult};
pub use gaussian::GaussianMetric;
pub use gradient::{grad_sq_dist, grad_sq_dist_dirs};
pub use matrix::{
    spd_distance, spd_exp, spd_geodesic, spd_geodesic_symmetric, spd_log, spd_sq_distance, spd_sqrt, SpdMatrix,
    EIGEN_FLOOR,
};
