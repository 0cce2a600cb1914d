use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::forest::Topology;
use crate::riemann::{Guard, MetricProvider};
use crate::twostate::edge_guard;

/// Fisher metric of the Gaussian leaf model on one orthant in edge lengths:
/// `g_ij = ½ tr(S⁻¹ A_i S⁻¹ A_j)` with `A_i = ∂_i S = −S∘σ^i`.
#[derive(Debug, Clone)]
pub struct GaussianMetric {
    topology: Topology,
    sigmas: Vec<DMatrix<f64>>,
    scale: f64,
}

impl GaussianMetric {
    pub fn new(topology: &Topology) -> Result<Self> {
        if !topology.is_fully_resolved() {
            return Err(Error::arg("the Gaussian metric needs a fully resolved topology"));
        }
        Ok(GaussianMetric {
            topology: topology.clone(),
            sigmas: topology.split_matrices(),
            scale: 1.0,
        })
    }

    /// Uses `c·S` instead of `S`; the metric does not change.
    pub fn with_scale(mut self, c: f64) -> Self {
        self.scale = c;
        self
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn split_matrices(&self) -> &[DMatrix<f64>] {
        &self.sigmas
    }

    /// `S(ℓ) = c·exp(−Σ_e ℓ_e σ^e)` entrywise.
    pub fn covariance(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.topology.n_leaves();
        let mut expo = DMatrix::zeros(n, n);
        for (s, &l) in self.sigmas.iter().zip(x) {
            expo += s * l;
        }
        expo.map(|e| self.scale * (-e).exp())
    }

    fn pieces(&self, x: &[f64]) -> Result<(DMatrix<f64>, DMatrix<f64>, Vec<DMatrix<f64>>)> {
        if x.len() != self.sigmas.len() {
            return Err(Error::arg(format!("expected {} coordinates", self.sigmas.len())));
        }
        let s = self.covariance(x);
        let sinv = s
            .clone()
            .cholesky()
            .ok_or(Error::NotPositiveDefinite(f64::NAN))?
            .inverse();
        let b = self.sigmas.iter().map(|sg| -(&sinv * s.component_mul(sg))).collect();
        Ok((s, sinv, b))
    }
}

fn trace_prod(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.component_mul(&b.transpose()).sum()
}

impl MetricProvider for GaussianMetric {
    fn dim(&self) -> usize {
        self.sigmas.len()
    }

    fn metric(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let (_, _, b) = self.pieces(x)?;
        let m = b.len();
        Ok(DMatrix::from_fn(m, m, |i, j| 0.5 * trace_prod(&b[i], &b[j])))
    }

    /// With `B_i = S⁻¹A_i`, `∂_k S⁻¹ = −S⁻¹A_kS⁻¹` and `∂_k A_i = S∘σ^k∘σ^i`:
    /// `∂_k g_ij = ½ [tr(D_ki B_j) + tr(B_i D_kj) − tr(B_k B_i B_j) − tr(B_i B_k B_j)]`
    /// where `D_ki = S⁻¹(S∘σ^k∘σ^i)`.
    fn metric_derivs(&self, x: &[f64]) -> Result<(DMatrix<f64>, Vec<DMatrix<f64>>)> {
        let (s, sinv, b) = self.pieces(x)?;
        let m = b.len();
        let g = DMatrix::from_fn(m, m, |i, j| 0.5 * trace_prod(&b[i], &b[j]));
        let prod: Vec<Vec<DMatrix<f64>>> = (0..m).map(|k| (0..m).map(|i| &b[k] * &b[i]).collect()).collect();
        let d: Vec<Vec<DMatrix<f64>>> = (0..m)
            .map(|k| {
                (0..m)
                    .map(|i| &sinv * s.component_mul(&self.sigmas[k]).component_mul(&self.sigmas[i]))
                    .collect()
            })
            .collect();
        let dg = (0..m)
            .map(|k| {
                DMatrix::from_fn(m, m, |i, j| {
                    0.5 * (trace_prod(&d[k][i], &b[j]) + trace_prod(&b[i], &d[k][j])
                        - trace_prod(&prod[k][i], &b[j])
                        - trace_prod(&prod[i][k], &b[j]))
                })
            })
            .collect();
        Ok((g, dg))
    }

    fn guard(&self) -> Guard {
        edge_guard(&self.topology)
    }
}
