//! Riemannian machinery over an abstract metric: Christoffel symbols, RK4
//! geodesic shooting, path lengths and sectional curvature.

mod bvp;
mod christoffel;
mod curvature;
mod shoot;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::forest::{lam, len, Param};

pub use bvp::{connect_geodesic, ConnectOptions};
pub use christoffel::christoffel;
pub use curvature::{curvature_tensor, random_plane_curvatures, sectional_curvature};
pub use shoot::{path_length, shoot_geodesic, GeodesicPath, ShootOptions, Termination};

/// What a coordinate stands for, which decides how a shoot reacts when the
/// coordinate reaches a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordRole {
    Internal,
    Pendant,
    Free,
}

/// Box domain of a chart.
#[derive(Debug, Clone)]
pub struct Guard {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub roles: Vec<CoordRole>,
    /// Edge-parameter chart, if the coordinates are edge lengths or weights.
    pub chart: Option<Param>,
}

impl Guard {
    pub fn unbounded(dim: usize) -> Guard {
        Guard {
            lower: vec![f64::NEG_INFINITY; dim],
            upper: vec![f64::INFINITY; dim],
            roles: vec![CoordRole::Free; dim],
            chart: None,
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(&v, (&lo, &hi))| v >= lo && v <= hi)
    }

    /// Distances of coordinate `k` to its lower and upper bound, measured in
    /// edge weights for edge charts.
    pub(crate) fn proximity(&self, k: usize, x: f64) -> (f64, f64) {
        match self.chart {
            Some(Param::Length) => {
                let l = lam(x.max(0.0));
                (l, 1.0 - l)
            }
            Some(Param::Lambda) => (x, 1.0 - x),
            None => (x - self.lower[k], self.upper[k] - x),
        }
    }
}

/// A Riemannian metric on an open box of `R^d`.
pub trait MetricProvider: Sync {
    fn dim(&self) -> usize;

    /// `g(x)`, symmetric positive definite inside the guard.
    fn metric(&self, x: &[f64]) -> Result<DMatrix<f64>>;

    /// `g(x)` together with `∂g/∂x_l` for each `l`. The default uses central
    /// differences with step `1e-5`.
    fn metric_derivs(&self, x: &[f64]) -> Result<(DMatrix<f64>, Vec<DMatrix<f64>>)> {
        let g = self.metric(x)?;
        Ok((g, fd_metric_derivs(self, x, 1e-5)?))
    }

    fn guard(&self) -> Guard {
        Guard::unbounded(self.dim())
    }
}

pub fn fd_metric_derivs<M: MetricProvider + ?Sized>(m: &M, x: &[f64], h: f64) -> Result<Vec<DMatrix<f64>>> {
    let mut out = Vec::with_capacity(x.len());
    let mut y = x.to_vec();
    for l in 0..x.len() {
        y[l] = x[l] + h;
        let gp = m.metric(&y)?;
        y[l] = x[l] - h;
        let gm = m.metric(&y)?;
        y[l] = x[l];
        out.push((gp - gm) / (2.0 * h));
    }
    Ok(out)
}

/// Inverse of a metric via its eigendecomposition. Condition numbers above
/// `1e12` are reported as singular.
pub fn metric_inverse(g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let e = SymmetricEigen::new(g.clone());
    let max = e.eigenvalues.max();
    let min = e.eigenvalues.min();
    if !(min > 1e-12 * max) || !min.is_finite() || !max.is_finite() {
        return Err(Error::SingularMetric(max / min));
    }
    let d = DMatrix::from_diagonal(&e.eigenvalues.map(|v| 1.0 / v));
    Ok(&e.eigenvectors * d * e.eigenvectors.transpose())
}

/// Flat metric `I`.
#[derive(Debug, Clone)]
pub struct Euclidean {
    pub dim: usize,
}

impl MetricProvider for Euclidean {
    fn dim(&self) -> usize {
        self.dim
    }

    fn metric(&self, _x: &[f64]) -> Result<DMatrix<f64>> {
        Ok(DMatrix::identity(self.dim, self.dim))
    }

    fn metric_derivs(&self, _x: &[f64]) -> Result<(DMatrix<f64>, Vec<DMatrix<f64>>)> {
        Ok((
            DMatrix::identity(self.dim, self.dim),
            vec![DMatrix::zeros(self.dim, self.dim); self.dim],
        ))
    }
}

/// A metric given in edge lengths, re-expressed in weights `λ = 1 - e^{-ℓ}`.
///
/// With `J = dℓ/dλ = 1/(1-λ)` per coordinate, `g^λ_ij = J_i J_j g_ij` and the
/// derivative picks up `dJ/dλ = J²` from the Jacobian itself.
#[derive(Debug, Clone)]
pub struct LambdaChart<M> {
    pub inner: M,
}

impl<M> LambdaChart<M> {
    pub fn new(inner: M) -> Self {
        LambdaChart { inner }
    }
}

impl<M: MetricProvider> LambdaChart<M> {
    fn lengths(&self, x: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        if x.iter().any(|&v| !(0.0..1.0).contains(&v)) {
            return Err(Error::OutsideDomain(format!("weights {x:?}")));
        }
        Ok((
            x.iter().map(|&v| len(v)).collect(),
            x.iter().map(|&v| 1.0 / (1.0 - v)).collect(),
        ))
    }
}

impl<M: MetricProvider> MetricProvider for LambdaChart<M> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn metric(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let (l, j) = self.lengths(x)?;
        let g = self.inner.metric(&l)?;
        Ok(DMatrix::from_fn(g.nrows(), g.ncols(), |a, b| j[a] * j[b] * g[(a, b)]))
    }

    fn metric_derivs(&self, x: &[f64]) -> Result<(DMatrix<f64>, Vec<DMatrix<f64>>)> {
        let (l, j) = self.lengths(x)?;
        let (g, dg) = self.inner.metric_derivs(&l)?;
        let d = g.nrows();
        let gl = DMatrix::from_fn(d, d, |a, b| j[a] * j[b] * g[(a, b)]);
        let dgl = (0..d)
            .map(|k| {
                DMatrix::from_fn(d, d, |a, b| {
                    let mut v = j[a] * j[b] * j[k] * dg[k][(a, b)];
                    if a == k {
                        v += j[a] * j[a] * j[b] * g[(a, b)];
                    }
                    if b == k {
                        v += j[a] * j[b] * j[b] * g[(a, b)];
                    }
                    v
                })
            })
            .collect();
        Ok((gl, dgl))
    }

    fn guard(&self) -> Guard {
        let inner = self.inner.guard();
        let d = self.dim();
        Guard {
            lower: vec![0.0; d],
            upper: vec![1.0; d],
            roles: inner.roles,
            chart: Some(Param::Lambda),
        }
    }
}

/// Tangent vector in length coordinates mapped to weight coordinates at the
/// point with lengths `l`.
pub fn velocity_to_lambda(l: &[f64], v: &[f64]) -> Vec<f64> {
    l.iter().zip(v).map(|(&li, &vi)| (-li).exp() * vi).collect()
}

pub fn velocity_to_length(lambda: &[f64], v: &[f64]) -> Vec<f64> {
    lambda.iter().zip(v).map(|(&li, &vi)| vi / (1.0 - li)).collect()
}
