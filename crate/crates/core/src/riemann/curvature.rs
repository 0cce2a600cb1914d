use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::christoffel::christoffel_from;
use super::MetricProvider;
use crate::error::{Error, Result};

fn gamma_at<M: MetricProvider + ?Sized>(m: &M, x: &[f64]) -> Result<Vec<DMatrix<f64>>> {
    let (g, dg) = m.metric_derivs(x)?;
    christoffel_from(&g, &dg)
}

/// `∂_i Γ` by central differences with one Richardson extrapolation.
fn gamma_derivs<M: MetricProvider + ?Sized>(m: &M, x: &[f64], h: f64) -> Result<Vec<Vec<DMatrix<f64>>>> {
    let d = x.len();
    let mut y = x.to_vec();
    let mut central = |i: usize, h: f64| -> Result<Vec<DMatrix<f64>>> {
        y[i] = x[i] + h;
        let p = gamma_at(m, &y)?;
        y[i] = x[i] - h;
        let q = gamma_at(m, &y)?;
        y[i] = x[i];
        Ok(p.iter().zip(&q).map(|(a, b)| (a - b) / (2.0 * h)).collect())
    };
    (0..d)
        .map(|i| {
            let coarse = central(i, h)?;
            let fine = central(i, h / 2.0)?;
            Ok(fine.iter().zip(&coarse).map(|(f, c)| (f * 4.0 - c) / 3.0).collect())
        })
        .collect()
}

/// `R^l_ijk = ∂_i Γ^l_jk − ∂_j Γ^l_ik + Γ^l_im Γ^m_jk − Γ^l_jm Γ^m_ik`,
/// indexed `r[l][i][j][k]`, so that `R(X, Y)Z = R^l_ijk X^i Y^j Z^k ∂_l`.
pub fn curvature_tensor<M: MetricProvider + ?Sized>(m: &M, x: &[f64], h: f64) -> Result<Vec<Vec<Vec<Vec<f64>>>>> {
    let d = x.len();
    let gamma = gamma_at(m, x)?;
    let dgamma = gamma_derivs(m, x, h)?;
    let mut r = vec![vec![vec![vec![0.0; d]; d]; d]; d];
    for l in 0..d {
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let mut v = dgamma[i][l][(j, k)] - dgamma[j][l][(i, k)];
                    for mm in 0..d {
                        v += gamma[l][(i, mm)] * gamma[mm][(j, k)] - gamma[l][(j, mm)] * gamma[mm][(i, k)];
                    }
                    r[l][i][j][k] = v;
                }
            }
        }
    }
    Ok(r)
}

/// Sectional curvature `⟨R(u,v)v, u⟩ / (|u|²|v|² − ⟨u,v⟩²)` of the plane
/// spanned by `u` and `v`, with coordinate step `1e-4` for the derivatives of
/// the Christoffel symbols.
pub fn sectional_curvature<M: MetricProvider + ?Sized>(m: &M, x: &[f64], u: &[f64], v: &[f64]) -> Result<f64> {
    let d = x.len();
    let g = m.metric(x)?;
    let (uu, vv) = (DVector::from_column_slice(u), DVector::from_column_slice(v));
    let guu = uu.dot(&(&g * &uu));
    let gvv = vv.dot(&(&g * &vv));
    let guv = uu.dot(&(&g * &vv));
    let gram = guu * gvv - guv * guv;
    if !(gram > 1e-14 * guu * gvv) {
        return Err(Error::arg("tangent vectors span a degenerate plane"));
    }
    let r = curvature_tensor(m, x, 1e-4)?;
    let mut w = DVector::zeros(d);
    for l in 0..d {
        let mut s = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    s += r[l][i][j][k] * u[i] * v[j] * v[k];
                }
            }
        }
        w[l] = s;
    }
    Ok(uu.dot(&(&g * w)) / gram)
}

/// Sectional curvatures at `x` of `count` planes whose spanning vectors are
/// drawn uniformly from the cube `[-1, 1]^d`. Deterministic per seed.
pub fn random_plane_curvatures<M: MetricProvider + ?Sized>(
    m: &M,
    x: &[f64],
    count: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = x.len();
    (0..count)
        .map(|_| {
            let u: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            sectional_curvature(m, x, &u, &v)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::riemann::Euclidean;

    struct Sphere;
    impl MetricProvider for Sphere {
        fn dim(&self) -> usize {
            2
        }
        fn metric(&self, x: &[f64]) -> Result<DMatrix<f64>> {
            Ok(DMatrix::from_diagonal(&DVector::from_vec(vec![
                1.0,
                x[0].sin().powi(2),
            ])))
        }
    }

    #[test]
    fn round_sphere_has_unit_curvature() {
        let k = sectional_curvature(&Sphere, &[1.1, 0.4], &[1.0, 0.0], &[0.3, 1.0]).unwrap();
        assert!((k - 1.0).abs() < 1e-4, "{k}");
    }

    #[test]
    fn flat_space_has_zero_curvature() {
        let k = sectional_curvature(&Euclidean { dim: 3 }, &[0.0; 3], &[1.0, 0.0, 0.0], &[0.0, 1.0, 1.0]).unwrap();
        assert!(k.abs() < 1e-6);
    }
}
