use nalgebra::DMatrix;

use super::matrix::{spd_exp, SpdMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct FrechetResult {
    pub mean: SpdMatrix,
    pub iterations: usize,
    /// Frobenius norm of the mean tangent vector at the result.
    pub residual: f64,
}

/// Karcher mean under the affine-invariant metric by the fixed-point
/// iteration `M ← M^{1/2} exp(mean_k log(M^{-1/2} S_k M^{-1/2})) M^{1/2}`,
/// started at the arithmetic mean.
pub fn frechet_mean_spd(sample: &[SpdMatrix], tol: f64, max_iter: usize) -> Result<FrechetResult> {
    let first = sample.first().ok_or_else(|| Error::arg("empty sample"))?;
    let n = first.dim();
    if sample.iter().any(|s| s.dim() != n) {
        return Err(Error::arg("matrices of different sizes"));
    }
    let mut sum = DMatrix::zeros(n, n);
    for s in sample {
        sum += s.matrix();
    }
    let mut m = SpdMatrix::new(sum / sample.len() as f64)?;
    for it in 0..=max_iter {
        let (h, r) = m.sqrt_pair();
        let mut t = DMatrix::zeros(n, n);
        for s in sample {
            t += SpdMatrix::new(&r * s.matrix() * &r)?.log();
        }
        t /= sample.len() as f64;
        let residual = t.norm();
        if residual < tol {
            return Ok(FrechetResult {
                mean: m,
                iterations: it,
                residual,
            });
        }
        if it == max_iter {
            break;
        }
        m = SpdMatrix::new(&h * spd_exp(&t)? * &h)?;
    }
    Err(Error::NonConvergence(format!(
        "Fréchet mean after {max_iter} iterations"
    )))
}
