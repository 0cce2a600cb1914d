use nalgebra::DMatrix;
use rayon::prelude::*;

use super::distribution::{check_cap, DEFAULT_CAP};
use super::pruning::Pruner;
use crate::error::{Error, Result};
use crate::forest::{lam, Param, Topology, Wald};
use crate::riemann::{CoordRole, Guard, MetricProvider};

/// Upper bound on edge-length coordinates used by length charts.
pub const LENGTH_CAP: f64 = 40.0;

/// Fisher information of the two-state model on one orthant, in edge-length
/// coordinates: `g_ij = Σ_s ∂_i p ∂_j p / p`.
#[derive(Debug, Clone)]
pub struct TwoStateMetric {
    topology: Topology,
    pruner: Pruner,
}

impl TwoStateMetric {
    pub fn new(topology: &Topology) -> Result<Self> {
        Self::with_cap(topology, DEFAULT_CAP)
    }

    pub fn with_cap(topology: &Topology, cap: usize) -> Result<Self> {
        check_cap(topology.n_leaves(), cap)?;
        let lambda = vec![0.5; topology.len()];
        let w = Wald::new(topology.clone(), lambda)?;
        Ok(TwoStateMetric {
            topology: topology.clone(),
            pruner: Pruner::for_wald(&w),
        })
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    fn lambdas(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.topology.len() {
            return Err(Error::arg(format!("expected {} coordinates", self.topology.len())));
        }
        if x.iter().any(|v| !(*v >= 0.0)) {
            return Err(Error::OutsideDomain(format!("negative length in {x:?}")));
        }
        Ok(x.iter().map(|&l| lam(l)).collect())
    }

    fn half(&self) -> u64 {
        1u64 << self.pruner.n_leaves().saturating_sub(1)
    }
}

/// Sums per-character terms in character order so results do not depend on
/// thread scheduling.
fn ordered_sum<T: Send>(items: Vec<T>, zero: T, add: impl Fn(T, T) -> T) -> T {
    items.into_iter().fold(zero, add)
}

impl MetricProvider for TwoStateMetric {
    fn dim(&self) -> usize {
        self.topology.len()
    }

    fn metric(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let lambda = self.lambdas(x)?;
        let m = lambda.len();
        let terms: Vec<DMatrix<f64>> = (0..self.half())
            .into_par_iter()
            .map(|s| {
                let mut g = vec![0.0; m];
                let p = self.pruner.prob_grad(&lambda, s, &mut g);
                DMatrix::from_fn(m, m, |i, j| g[i] * g[j] / p)
            })
            .collect();
        // Complements contribute identical terms.
        Ok(ordered_sum(terms, DMatrix::zeros(m, m), |a, b| a + b) * 2.0)
    }

    /// `∂_k g_ij = Σ_s (H_ki G_j + G_i H_kj)/p − G_i G_j G_k/p²`.
    fn metric_derivs(&self, x: &[f64]) -> Result<(DMatrix<f64>, Vec<DMatrix<f64>>)> {
        let lambda = self.lambdas(x)?;
        let m = lambda.len();
        let terms: Vec<(DMatrix<f64>, Vec<DMatrix<f64>>)> = (0..self.half())
            .into_par_iter()
            .map(|s| {
                let mut g = vec![0.0; m];
                let mut h = DMatrix::zeros(m, m);
                let p = self.pruner.prob_hess(&lambda, s, &mut g, &mut h);
                let gm = DMatrix::from_fn(m, m, |i, j| g[i] * g[j] / p);
                let dg = (0..m)
                    .map(|k| {
                        DMatrix::from_fn(m, m, |i, j| {
                            (h[(k, i)] * g[j] + g[i] * h[(k, j)]) / p - g[i] * g[j] * g[k] / (p * p)
                        })
                    })
                    .collect::<Vec<_>>();
                (gm, dg)
            })
            .collect();
        let zero = (DMatrix::zeros(m, m), vec![DMatrix::zeros(m, m); m]);
        let (g, dg) = ordered_sum(terms, zero, |mut a, b| {
            a.0 += b.0;
            for (x, y) in a.1.iter_mut().zip(b.1) {
                *x += y;
            }
            a
        });
        Ok((g * 2.0, dg.into_iter().map(|d| d * 2.0).collect()))
    }

    fn guard(&self) -> Guard {
        edge_guard(&self.topology)
    }
}

/// Length-chart guard for a topology: every length in `[0, LENGTH_CAP]`.
pub fn edge_guard(t: &Topology) -> Guard {
    let roles = t
        .splits()
        .iter()
        .map(|s| {
            if s.is_pendant() {
                CoordRole::Pendant
            } else {
                CoordRole::Internal
            }
        })
        .collect();
    Guard {
        lower: vec![0.0; t.len()],
        upper: vec![LENGTH_CAP; t.len()],
        roles,
        chart: Some(Param::Length),
    }
}

/// Fisher information matrix of a fully resolved wald in either chart.
pub fn fisher_info(w: &Wald, param: Param) -> Result<DMatrix<f64>> {
    if !w.is_fully_resolved() || w.lambda().iter().any(|&l| !(l > 0.0 && l < 1.0)) {
        return Err(Error::arg(
            "Fisher information needs a fully resolved wald with weights in (0, 1)",
        ));
    }
    let g = TwoStateMetric::new(w.topology())?.metric(&w.lengths())?;
    Ok(match param {
        Param::Length => g,
        Param::Lambda => {
            let c: Vec<f64> = w.lambda().iter().map(|l| 1.0 / (1.0 - l)).collect();
            DMatrix::from_fn(g.nrows(), g.ncols(), |i, j| c[i] * c[j] * g[(i, j)])
        }
    })
}
