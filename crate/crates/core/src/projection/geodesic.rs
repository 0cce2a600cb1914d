//! Approximate wald-space geodesics from projected SPD geodesics.

use super::chart::Chart;
use super::descent::{project_global, ProjectOptions};
use crate::error::{Error, Result};
use crate::forest::Wald;
use crate::spd::{covariance_of, spd_distance, spd_geodesic, spd_geodesic_symmetric, SpdMatrix};

#[derive(Clone, Debug)]
pub struct ApproxGeodesic {
    pub points: Vec<Wald>,
    /// `d_cov` between consecutive points.
    pub segment_lengths: Vec<f64>,
    pub total_length: f64,
}

impl ApproxGeodesic {
    fn from_points(points: Vec<Wald>) -> Result<ApproxGeodesic> {
        let covs = points.iter().map(covariance_of).collect::<Result<Vec<_>>>()?;
        let segment_lengths: Vec<f64> = covs.windows(2).map(|p| spd_distance(&p[0], &p[1])).collect();
        let total_length = segment_lengths.iter().sum();
        Ok(ApproxGeodesic {
            points,
            segment_lengths,
            total_length,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Running sum of the segment lengths, starting at 0.
    pub fn cumulative_lengths(&self) -> Vec<f64> {
        std::iter::once(0.0)
            .chain(self.segment_lengths.iter().scan(0.0, |acc, s| {
                *acc += s;
                Some(*acc)
            }))
            .collect()
    }
}

fn check_pair(w1: &Wald, w2: &Wald, k: usize) -> Result<()> {
    if w1.n_leaves() != w2.n_leaves() {
        return Err(Error::arg("endpoints have different leaf counts"));
    }
    if k == 0 {
        return Err(Error::arg("k must be at least 1"));
    }
    Ok(())
}

fn step_failed(i: usize, e: Error) -> Error {
    Error::NonConvergence(format!("projection at step {i} failed: {e}"))
}

/// Steps `1/(k-i+1)` of the way from the current point to the destination
/// along the SPD geodesic and projects back, for `i = 1..k-1`. Returns
/// `k + 1` points.
pub fn recursive_geodesic(w1: &Wald, w2: &Wald, k: usize, opts: &ProjectOptions) -> Result<ApproxGeodesic> {
    check_pair(w1, w2, k)?;
    let target = covariance_of(w2)?;
    let mut points = vec![w1.clone()];
    let mut chart = Chart::from_wald(w1)?;
    let mut current = covariance_of(w1)?;
    for i in 1..k {
        let s = spd_geodesic(&current, &target, 1.0 / (k - i + 1) as f64).map_err(|e| step_failed(i, e))?;
        let r = project_global(&s, &chart, opts).map_err(|e| step_failed(i, e))?;
        current = r.chart.spd()?;
        chart = r.chart;
        points.push(r.wald);
    }
    points.push(w2.clone());
    ApproxGeodesic::from_points(points)
}

/// Grows the path from both ends at once: at step `i` the points at
/// proportions `1/(k-i+1)` and `1 - 1/(k-i+1)` along the SPD geodesic between
/// the two current fronts are projected, each seeded from its own side.
/// Returns `G_0..G_{k-1}, H_{k-1}..H_0`, `2k` points, and swapping the
/// endpoints reverses the sequence exactly.
pub fn symmetrized_geodesic(w1: &Wald, w2: &Wald, k: usize, opts: &ProjectOptions) -> Result<ApproxGeodesic> {
    check_pair(w1, w2, k)?;
    let mut front = vec![w1.clone()];
    let mut back = vec![w2.clone()];
    let (mut cg, mut ch) = (Chart::from_wald(w1)?, Chart::from_wald(w2)?);
    let (mut sg, mut sh): (SpdMatrix, SpdMatrix) = (covariance_of(w1)?, covariance_of(w2)?);
    for i in 1..k {
        let m = (k - i + 1) as u64;
        let r = spd_geodesic_symmetric(&sg, &sh, 1, m).map_err(|e| step_failed(i, e))?;
        let s = spd_geodesic_symmetric(&sg, &sh, m - 1, m).map_err(|e| step_failed(i, e))?;
        let pg = project_global(&r, &cg, opts).map_err(|e| step_failed(i, e))?;
        let ph = project_global(&s, &ch, opts).map_err(|e| step_failed(i, e))?;
        sg = pg.chart.spd()?;
        sh = ph.chart.spd()?;
        cg = pg.chart;
        ch = ph.chart;
        front.push(pg.wald);
        back.push(ph.wald);
    }
    front.extend(back.into_iter().rev());
    ApproxGeodesic::from_points(front)
}

/// Total length of an approximate geodesic.
pub fn approx_intrinsic_distance(g: &ApproxGeodesic) -> f64 {
    g.total_length
}
