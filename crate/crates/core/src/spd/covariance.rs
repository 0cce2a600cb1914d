use nalgebra::DMatrix;

use super::matrix::SpdMatrix;
use crate::error::Result;
use crate::forest::{leaves, Forest, Wald};

/// Leaf covariance `S_uv = Π_e μ_e^{σ^e_uv} = e^{−ℓ_uv}` of the
/// Ornstein-Uhlenbeck process; weight-one edges give exact zeros.
pub fn covariance_matrix(w: &Wald) -> DMatrix<f64> {
    let n = w.n_leaves();
    let mut s = DMatrix::zeros(n, n);
    for c in w.components() {
        for u in leaves(c) {
            for v in leaves(c) {
                s[(u, v)] = 1.0;
            }
        }
    }
    for (sp, &l) in w.splits().iter().zip(w.lambda()) {
        let mu = 1.0 - l;
        for u in leaves(sp.inner()) {
            for v in leaves(sp.outer()) {
                s[(u, v)] *= mu;
                s[(v, u)] *= mu;
            }
        }
    }
    s
}

pub fn covariance_of(w: &Wald) -> Result<SpdMatrix> {
    SpdMatrix::new(covariance_matrix(w))
}

/// Covariance of a forest that need not be canonical, by multiplying `μ`
/// along the path between each pair of leaves.
pub fn forest_covariance(f: &Forest) -> DMatrix<f64> {
    let n = f.n_leaves();
    let adj = f.adjacency();
    let mut s = DMatrix::zeros(n, n);
    for u in 0..n {
        let mut prod = vec![f64::NAN; f.n_vertices()];
        prod[u] = 1.0;
        let mut stack = vec![u];
        while let Some(v) = stack.pop() {
            for &(w, e) in &adj[v] {
                if prod[w].is_nan() {
                    prod[w] = prod[v] * (1.0 - f.edges()[e].lambda);
                    stack.push(w);
                }
            }
        }
        for v in 0..n {
            s[(u, v)] = if prod[v].is_nan() { 0.0 } else { prod[v] };
        }
    }
    s
}

/// Extrinsic distance between walds through their covariance matrices.
pub fn extrinsic_cov_distance(w1: &Wald, w2: &Wald) -> Result<f64> {
    Ok(super::spd_distance(&covariance_of(w1)?, &covariance_of(w2)?))
}
