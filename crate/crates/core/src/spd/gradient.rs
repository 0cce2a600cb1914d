use nalgebra::DMatrix;

use super::matrix::SpdMatrix;
use crate::error::{Error, Result};
use crate::forest::{Param, Wald};

/// `∂_i d²(S0, S) = tr(log(S0^{-1/2} S S0^{-1/2}) S0^{1/2} S⁻¹ ∂_iS S0^{-1/2})`
/// for a family of tangent directions `∂_iS`, together with `d²` itself.
pub fn grad_sq_dist_dirs(s0: &SpdMatrix, s: &SpdMatrix, dirs: &[DMatrix<f64>]) -> (f64, Vec<f64>) {
    let (h, r) = s0.sqrt_pair();
    let x = SpdMatrix::new(&r * s.matrix() * &r);
    let (d2, l) = match x {
        Ok(x) => {
            let l = x.log();
            let e = nalgebra::SymmetricEigen::new(l.clone()).eigenvalues;
            (0.5 * e.iter().map(|v| v * v).sum::<f64>(), l)
        }
        Err(_) => return (f64::INFINITY, vec![f64::NAN; dirs.len()]),
    };
    // Cyclic form: tr(K ∂_iS) with K = S0^{-1/2} L S0^{1/2} S⁻¹.
    let k = &r * l * &h * s.inverse();
    let kt = k.transpose();
    (d2, dirs.iter().map(|a| kt.component_mul(a).sum()).collect())
}

/// Gradient of `d_cov²(S0, S_w)` over the splits of `w`, in either chart.
pub fn grad_sq_dist(s0: &SpdMatrix, w: &Wald, param: Param) -> Result<Vec<f64>> {
    if s0.dim() != w.n_leaves() {
        return Err(Error::arg("matrix size does not match the leaf count"));
    }
    let s = super::covariance_of(w)?;
    let dirs: Vec<DMatrix<f64>> = w
        .topology()
        .split_matrices()
        .iter()
        .map(|sg| -s.matrix().component_mul(sg))
        .collect();
    let (_, mut g) = grad_sq_dist_dirs(s0, &s, &dirs);
    if param == Param::Lambda {
        for (gi, l) in g.iter_mut().zip(w.lambda()) {
            *gi /= 1.0 - l;
        }
    }
    Ok(g)
}
