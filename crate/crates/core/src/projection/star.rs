//! Distance from a balanced four-leaf tree to the family of star trees.

use rayon::prelude::*;

use super::descent::ProjectOptions;
use super::geodesic::{approx_intrinsic_distance, symmetrized_geodesic};
use crate::error::{Error, Result};
use crate::forest::{wald_from_newick, Param, Wald};

/// `((1,2),(3,4))` with every weight equal to `lambda0`.
pub fn balanced_quartet(lambda0: f64) -> Result<Wald> {
    let l = lambda0;
    wald_from_newick(&format!("((1:{l},2:{l}):{l},(3:{l},4:{l}));"), Param::Lambda)
}

/// Four-leaf star with every weight equal to `lambda`.
pub fn star_quartet(lambda: f64) -> Result<Wald> {
    let l = lambda;
    wald_from_newick(&format!("(1:{l},2:{l},3:{l},4:{l});"), Param::Lambda)
}

/// Approximate intrinsic distance from [`balanced_quartet`]`(lambda0)` to
/// [`star_quartet`]`(λ)` for every `λ` in `grid`, using the symmetrized
/// construction with `k` steps.
pub fn star_distance_profile(lambda0: f64, grid: &[f64], k: usize, opts: &ProjectOptions) -> Result<Vec<(f64, f64)>> {
    if !(lambda0 > 0.0 && lambda0 <= 1.0) {
        return Err(Error::arg(format!("lambda0 = {lambda0} is outside (0, 1]")));
    }
    if let Some(bad) = grid.iter().find(|&&l| !(l > 0.0 && l <= 1.0)) {
        return Err(Error::OutsideDomain(format!(
            "star weight {bad} gives a singular covariance or is not a weight"
        )));
    }
    let g = balanced_quartet(lambda0)?;
    grid.par_iter()
        .map(|&l| {
            let f = star_quartet(l)?;
            Ok((l, approx_intrinsic_distance(&symmetrized_geodesic(&g, &f, k, opts)?)))
        })
        .collect()
}
