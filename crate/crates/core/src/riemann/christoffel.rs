use nalgebra::DMatrix;

use super::{metric_inverse, MetricProvider};
use crate::error::Result;

/// `Γ^k_ij = ½ Σ_l g^{kl} (∂_j g_li + ∂_i g_lj − ∂_l g_ij)`, returned as one
/// `d × d` matrix `(i, j)` per upper index `k`.
pub fn christoffel<M: MetricProvider + ?Sized>(m: &M, x: &[f64]) -> Result<Vec<DMatrix<f64>>> {
    let (g, dg) = m.metric_derivs(x)?;
    christoffel_from(&g, &dg)
}

pub(crate) fn christoffel_from(g: &DMatrix<f64>, dg: &[DMatrix<f64>]) -> Result<Vec<DMatrix<f64>>> {
    let d = g.nrows();
    let ginv = metric_inverse(g)?;
    // First kind: Γ_lij = ½ (∂_j g_li + ∂_i g_lj − ∂_l g_ij).
    let first: Vec<DMatrix<f64>> = (0..d)
        .map(|l| DMatrix::from_fn(d, d, |i, j| 0.5 * (dg[j][(l, i)] + dg[i][(l, j)] - dg[l][(i, j)])))
        .collect();
    Ok((0..d)
        .map(|k| {
            let mut gk = DMatrix::zeros(d, d);
            for (l, fl) in first.iter().enumerate() {
                gk += fl * ginv[(k, l)];
            }
            gk
        })
        .collect())
}
