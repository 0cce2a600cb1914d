//! Pairwise distance matrices under several metrics and their correlations.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::bhv::bhv_distance;
use super::pathdiff::path_difference_distance;
use crate::error::{Error, Result};
use crate::forest::Wald;
use crate::spd::extrinsic_cov_distance;
use crate::twostate::{extrinsic_distance, ProbMetric};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TreeMetric {
    JensenShannon,
    Hellinger,
    Cov,
    Bhv,
    PathDifference,
}

impl TreeMetric {
    pub const ALL: [TreeMetric; 5] = [
        TreeMetric::JensenShannon,
        TreeMetric::Hellinger,
        TreeMetric::Cov,
        TreeMetric::Bhv,
        TreeMetric::PathDifference,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TreeMetric::JensenShannon => "js",
            TreeMetric::Hellinger => "hellinger",
            TreeMetric::Cov => "cov",
            TreeMetric::Bhv => "bhv",
            TreeMetric::PathDifference => "pathdiff",
        }
    }

    /// Distance between two walds; `cap` bounds the leaf count for the
    /// character-distribution metrics.
    pub fn distance(&self, w1: &Wald, w2: &Wald, cap: usize) -> Result<f64> {
        match self {
            TreeMetric::JensenShannon => extrinsic_distance(w1, w2, ProbMetric::JensenShannon, cap),
            TreeMetric::Hellinger => extrinsic_distance(w1, w2, ProbMetric::Hellinger, cap),
            TreeMetric::Cov => extrinsic_cov_distance(w1, w2),
            TreeMetric::Bhv => bhv_distance(w1, w2),
            TreeMetric::PathDifference => path_difference_distance(w1, w2),
        }
    }
}

impl fmt::Display for TreeMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TreeMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<TreeMetric> {
        TreeMetric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::arg(format!("unknown metric '{s}'")))
    }
}

/// A metric evaluation that failed for one pair.
#[derive(Clone, Debug)]
pub struct PairFailure {
    pub metric: TreeMetric,
    pub i: usize,
    pub j: usize,
    pub message: String,
}

#[derive(Clone, Debug)]
pub struct DistanceMatrixReport {
    pub labels: Vec<String>,
    pub metrics: Vec<TreeMetric>,
    /// One symmetric matrix per metric, zero diagonal, NaN where the pair failed.
    pub matrices: Vec<DMatrix<f64>>,
    /// Pearson correlation between the upper triangles of each pair of
    /// matrices; NaN when undefined.
    pub correlations: DMatrix<f64>,
    pub failures: Vec<PairFailure>,
}

/// Pearson correlation, NaN when either sample has no spread or contains NaN.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    if n < 2 || n != y.len() || x.iter().chain(y).any(|v| !v.is_finite()) {
        return f64::NAN;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return f64::NAN;
    }
    (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
}

fn upper(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| m[(i, j)])
        .collect()
}

/// All pairwise distances among `trees` under each metric.
pub fn compare_metrics(trees: &[Wald], metrics: &[TreeMetric], cap: usize) -> Result<DistanceMatrixReport> {
    if let Some(w) = trees.first() {
        if trees.iter().any(|t| t.n_leaves() != w.n_leaves()) {
            return Err(Error::arg("all trees must have the same leaf count"));
        }
    }
    let n = trees.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut matrices = Vec::with_capacity(metrics.len());
    let mut failures = Vec::new();
    for &metric in metrics {
        let values: Vec<Result<f64>> = pairs
            .par_iter()
            .map(|&(i, j)| metric.distance(&trees[i], &trees[j], cap))
            .collect();
        let mut m = DMatrix::zeros(n, n);
        for (&(i, j), v) in pairs.iter().zip(values) {
            let d = v.unwrap_or_else(|e| {
                failures.push(PairFailure {
                    metric,
                    i,
                    j,
                    message: e.to_string(),
                });
                f64::NAN
            });
            m[(i, j)] = d;
            m[(j, i)] = d;
        }
        matrices.push(m);
    }
    let k = metrics.len();
    let flat: Vec<Vec<f64>> = matrices.iter().map(upper).collect();
    let correlations = DMatrix::from_fn(k, k, |a, b| pearson(&flat[a], &flat[b]));
    Ok(DistanceMatrixReport {
        labels: (1..=n).map(|i| format!("t{i}")).collect(),
        metrics: metrics.to_vec(),
        matrices,
        correlations,
        failures,
    })
}
