//! Projection of an SPD matrix onto the covariance image of wald space.

use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;

use super::chart::Chart;
use crate::error::{Error, Result};
use crate::forest::{all_topologies, nni_splits, Split, Topology, Wald};
use crate::spd::{grad_sq_dist_dirs, spd_distance, SpdMatrix};

#[derive(Clone, Copy, Debug)]
pub struct ProjectOptions {
    /// Stop when the projected gradient norm falls below this.
    pub tol: f64,
    pub max_iter: usize,
    /// Step used first and whenever the Barzilai-Borwein step is undefined.
    pub alpha0: f64,
    /// How often the same orthant boundary may be crossed before giving up.
    pub max_crossings: usize,
    /// Lower bound on pendant lengths.
    pub pendant_floor: f64,
}

impl Default for ProjectOptions {
    fn default() -> Self {
        ProjectOptions {
            tol: 1e-8,
            max_iter: 10_000,
            alpha0: 1e-2,
            max_crossings: 10,
            pendant_floor: 1e-8,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProjectionResult {
    pub wald: Wald,
    pub chart: Chart,
    /// `d_cov(S0, S_wald)`.
    pub distance: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Topologies visited in order, starting with the seed's.
    pub orthants: Vec<Topology>,
}

/// Half squared distance and its gradient in the free lengths.
fn evaluate(s0: &SpdMatrix, c: &Chart) -> Option<(f64, Vec<f64>)> {
    let s = c.covariance();
    let dirs = c.directions(&s);
    let s = SpdMatrix::new(s).ok()?;
    let (d2, g) = grad_sq_dist_dirs(s0, &s, &dirs);
    d2.is_finite().then_some((d2, g))
}

fn is_pendant(c: &Chart, i: usize) -> bool {
    c.topology().splits()[i].is_pendant()
}

/// Number of past objective values a Barzilai-Borwein step is compared with.
const NONMONOTONE_WINDOW: usize = 10;

fn projected_gradient(c: &Chart, g: &[f64], floor: f64) -> Vec<f64> {
    (0..g.len())
        .map(|i| {
            if c.fixed()[i] || (is_pendant(c, i) && c.ell()[i] <= floor && g[i] > 0.0) {
                0.0
            } else {
                g[i]
            }
        })
        .collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Boundary identifier: the topology with the shrinking split removed.
fn boundary_key(t: &Topology, s: &Split) -> Vec<Split> {
    t.splits().iter().copied().filter(|x| x != s).collect()
}

/// Moves `c` (with lengths `trial`, some internal ones negative) into the
/// neighbouring orthants, most negative split first. Each split goes to
/// whichever of its two interchange neighbours is closer to `s0`.
fn cross_boundaries(s0: &SpdMatrix, c: &Chart, trial: &[f64]) -> Result<(Chart, Vec<Vec<Split>>)> {
    let mut negative: Vec<(f64, Split)> = trial
        .iter()
        .zip(c.topology().splits())
        .filter(|(l, _)| **l < 0.0)
        .map(|(l, s)| (*l, *s))
        .collect();
    negative.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut chart = c.with_ell(trial.iter().map(|l| l.abs()).collect());
    let mut keys = Vec::with_capacity(negative.len());
    for (_, s) in negative {
        let i = chart.topology().index_of(&s).expect("split still present");
        let l = chart.ell()[i];
        let (x, y) = nni_splits(chart.topology(), &s)?;
        let a = chart.cross(i, x, l)?;
        let b = chart.cross(i, y, l)?;
        let da = evaluate(s0, &a).map_or(f64::INFINITY, |e| e.0);
        let db = evaluate(s0, &b).map_or(f64::INFINITY, |e| e.0);
        keys.push(boundary_key(chart.topology(), &s));
        chart = if db < da { b } else { a };
    }
    Ok((chart, keys))
}

fn descend(s0: &SpdMatrix, seed: &Chart, opts: &ProjectOptions, global: bool) -> Result<ProjectionResult> {
    if s0.dim() != seed.n_leaves() {
        return Err(Error::arg("matrix size does not match the leaf count"));
    }
    let floor = opts.pendant_floor;
    let clamp = |c: &Chart, ell: Vec<f64>| -> Vec<f64> {
        ell.into_iter()
            .enumerate()
            .map(|(i, l)| if is_pendant(c, i) { l.max(floor) } else { l })
            .collect()
    };
    let mut c = seed.with_ell(clamp(seed, seed.ell().to_vec()));
    let (mut f, mut g) =
        evaluate(s0, &c).ok_or_else(|| Error::OutsideDomain("seed covariance is not positive definite".into()))?;
    let mut best = (f, c.clone());
    let mut orthants = vec![c.topology().clone()];
    let mut visits: HashMap<Vec<Split>, usize> = HashMap::new();
    let mut recent: VecDeque<f64> = VecDeque::with_capacity(NONMONOTONE_WINDOW);
    let mut alpha = opts.alpha0;
    let mut converged = false;
    let mut iterations = 0;
    'outer: while iterations < opts.max_iter {
        let pg = projected_gradient(&c, &g, floor);
        if norm(&pg) < opts.tol {
            converged = true;
            break;
        }
        iterations += 1;
        let mut a = alpha;
        let (next, crossed, fnext, gnext) = loop {
            let raw: Vec<f64> = c.ell().iter().zip(&pg).map(|(l, d)| l - a * d).collect();
            let trial = clamp(&c, raw);
            let negative = trial.iter().enumerate().any(|(i, l)| *l < 0.0 && !c.fixed()[i]);
            let (cand, keys) = match (negative, global) {
                (false, _) => (c.with_ell(trial), Vec::new()),
                (true, false) => break 'outer,
                (true, true) => cross_boundaries(s0, &c, &trial)?,
            };
            // Non-crossing steps may rise above f but not above the recent
            // maximum. Crossing steps must decrease f.
            let f_ref = if keys.is_empty() {
                recent.iter().copied().fold(f, f64::max)
            } else {
                f
            };
            match evaluate(s0, &cand).filter(|(fv, _)| *fv <= f_ref && (keys.is_empty() || *fv < f)) {
                Some((fv, gv)) => {
                    for k in &keys {
                        let n = visits.entry(k.clone()).or_insert(0);
                        *n += 1;
                        if *n > opts.max_crossings {
                            break 'outer;
                        }
                    }
                    break (cand, !keys.is_empty(), fv, gv);
                }
                None => {
                    a *= 0.5;
                    if a < 1e-300 {
                        break 'outer;
                    }
                }
            }
        };
        if crossed {
            orthants.push(next.topology().clone());
            alpha = a;
        } else {
            let s: Vec<f64> = (0..g.len())
                .map(|i| if c.fixed()[i] { 0.0 } else { next.ell()[i] - c.ell()[i] })
                .collect();
            let y: Vec<f64> = gnext.iter().zip(&g).map(|(x, y)| x - y).collect();
            let (sy, yy) = (dot(&s, &y), dot(&y, &y));
            alpha = if sy > 0.0 && yy > 0.0 { sy / yy } else { opts.alpha0 };
        }
        if recent.len() == NONMONOTONE_WINDOW {
            recent.pop_front();
        }
        recent.push_back(f);
        c = next;
        f = fnext;
        g = gnext;
        if f < best.0 {
            best = (f, c.clone());
        }
    }
    let chart = best.1;
    let wald = chart.to_wald()?;
    let distance = spd_distance(s0, &chart.spd()?);
    Ok(ProjectionResult {
        wald,
        chart,
        distance,
        iterations,
        converged,
        orthants,
    })
}

/// Gradient descent restricted to the seed's orthant. Halts, unconverged,
/// as soon as an internal length would become negative.
pub fn project_within_orthant(s0: &SpdMatrix, seed: &Chart, opts: &ProjectOptions) -> Result<ProjectionResult> {
    descend(s0, seed, opts, false)
}

/// Gradient descent that moves into a neighbouring orthant whenever an
/// internal length turns negative. Returns the best iterate found.
pub fn project_global(s0: &SpdMatrix, seed: &Chart, opts: &ProjectOptions) -> Result<ProjectionResult> {
    descend(s0, seed, opts, true)
}

/// Within-orthant projection from every fully resolved topology, seeded with
/// all lengths equal to `seed_length`; the closest result wins.
pub fn project_exhaustive(s0: &SpdMatrix, seed_length: f64, opts: &ProjectOptions) -> Result<ProjectionResult> {
    let n = s0.dim();
    let results: Vec<Result<ProjectionResult>> = all_topologies(n)
        .into_par_iter()
        .map(|t| {
            let k = t.len();
            project_within_orthant(s0, &Chart::new(t, vec![seed_length; k])?, opts)
        })
        .collect();
    let mut best: Option<ProjectionResult> = None;
    for r in results {
        let r = r?;
        if best.as_ref().is_none_or(|b| r.distance < b.distance) {
            best = Some(r);
        }
    }
    best.ok_or_else(|| Error::arg("no topology to search"))
}
