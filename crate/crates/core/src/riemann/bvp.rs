use nalgebra::{DMatrix, DVector};

use super::shoot::{shoot_geodesic, GeodesicPath, ShootOptions, Termination};
use super::MetricProvider;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct ConnectOptions {
    pub dt: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for ConnectOptions {
    fn default() -> Self {
        ConnectOptions {
            dt: 1e-2,
            tol: 1e-8,
            max_iter: 50,
        }
    }
}

/// Geodesic from `x0` to `x1` on unit time by Newton iteration on the initial
/// velocity, with a finite-difference Jacobian of the shooting map. Fails if
/// the geodesic leaves the chart.
pub fn connect_geodesic<M: MetricProvider + ?Sized>(
    m: &M,
    x0: &[f64],
    x1: &[f64],
    opts: &ConnectOptions,
) -> Result<GeodesicPath> {
    let d = m.dim();
    let sopts = ShootOptions {
        dt: opts.dt,
        max_time: 1.0,
        pendant_clamp: false,
        ..ShootOptions::default()
    };
    let endpoint = |v: &[f64]| -> Result<(GeodesicPath, DVector<f64>)> {
        let p = shoot_geodesic(m, x0, v, &sopts)?;
        if p.termination != Termination::ReachedTime {
            return Err(Error::NonConvergence(format!(
                "shot left the orthant ({})",
                p.termination.as_str()
            )));
        }
        let r = DVector::from_iterator(d, p.last().iter().zip(x1).map(|(a, b)| a - b));
        Ok((p, r))
    };
    let mut v: Vec<f64> = x1.iter().zip(x0).map(|(a, b)| a - b).collect();
    for _ in 0..opts.max_iter {
        let (path, r) = endpoint(&v)?;
        if r.norm() < opts.tol {
            return Ok(path);
        }
        let h = 1e-6;
        let mut jac = DMatrix::zeros(d, d);
        for j in 0..d {
            let mut w = v.clone();
            w[j] += h;
            let (_, rj) = endpoint(&w)?;
            jac.set_column(j, &((rj - &r) / h));
        }
        let step = jac
            .lu()
            .solve(&r)
            .ok_or_else(|| Error::NonConvergence("singular shooting Jacobian".into()))?;
        // Damp the update until the residual decreases.
        let mut s = 1.0;
        loop {
            let trial: Vec<f64> = v.iter().zip(step.iter()).map(|(a, b)| a - s * b).collect();
            if let Ok((_, rt)) = endpoint(&trial) {
                if rt.norm() < r.norm() {
                    v = trial;
                    break;
                }
            }
            s /= 2.0;
            if s < 1e-6 {
                return Err(Error::NonConvergence("geodesic shooting stalled".into()));
            }
        }
    }
    Err(Error::NonConvergence("geodesic shooting did not converge".into()))
}
