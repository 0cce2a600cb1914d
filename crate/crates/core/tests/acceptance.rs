//! Acceptance criteria. Runs as its own binary so that every criterion prints
//! one PASS/FAIL line whether or not output capture is on; exits non-zero if
//! any criterion fails. A positional argument restricts the run to criteria
//! whose name contains it.

mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{bhv_oracle, brute_char_prob, five_leaf_config, random_spd, random_tree, rng};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rayon::prelude::*;
use waldspace::baselines::{bhv_distance, compare_metrics, TreeMetric};
use waldspace::forest::{nni_splits, random_tree_forest, wald_from_newick};
use waldspace::projection::{recursive_geodesic, star_distance_profile, symmetrized_geodesic, ProjectOptions};
use waldspace::riemann::{sectional_curvature, shoot_geodesic, LambdaChart, ShootOptions, Termination};
use waldspace::spd::{
    covariance_matrix, covariance_of, grad_sq_dist, spd_distance, spd_geodesic, spd_sq_distance, GaussianMetric,
};
use waldspace::twostate::{
    char_prob_grad, char_prob_hess, f_divergence, fisher_info, full_distribution, FDivergence, TwoStateMetric,
};
use waldspace::{canonicalize, random_wald, MetricProvider, Param, RandomWald, SpdMatrix, Wald};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn perturbed(w: &Wald, delta: &[f64], h: f64, param: Param) -> Wald {
    let x: Vec<f64> = w.params(param).iter().zip(delta).map(|(a, d)| a + h * d).collect();
    Wald::from_params(w.topology().clone(), &x, param).unwrap()
}

fn unit(e: usize, d: usize) -> Vec<f64> {
    (0..d).map(|i| f64::from(u8::from(i == e))).collect()
}

fn character_normalization() -> Outcome {
    let start = Instant::now();
    let (mut worst, mut min_p) = (0.0f64, f64::INFINITY);
    for i in 0..200u64 {
        let n = 2 + (i % 7) as usize;
        let w = random_wald(n, 1000 + i, &RandomWald::default()).unwrap();
        let d = full_distribution(&w).unwrap();
        worst = worst.max((d.probs.iter().sum::<f64>() - 1.0).abs());
        min_p = min_p.min(d.probs.iter().copied().fold(f64::INFINITY, f64::min));
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-12 && min_p > 0.0 && secs < 10.0,
        format!("max |sum-1| = {worst:.2e}, min p = {min_p:.2e}, {secs:.2}s"),
    )
}

fn leaf_covariance() -> Outcome {
    let mut r = rng(2);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let n = 2 + i % 5;
        let w = random_tree(&mut r, n, 0.05, 2.0);
        let p = full_distribution(&w).unwrap().probs;
        let l = w.path_length_matrix();
        let mean = |u: usize| (0..p.len()).filter(|s| s >> u & 1 == 1).map(|s| p[s]).sum::<f64>();
        for u in 0..n {
            for v in u + 1..n {
                let both: f64 = (0..p.len())
                    .filter(|s| s >> u & 1 == 1 && s >> v & 1 == 1)
                    .map(|s| p[s])
                    .sum();
                let cov = both - mean(u) * mean(v);
                worst = worst.max((cov - 0.25 * (-l[(u, v)]).exp()).abs());
            }
        }
    }
    outcome(worst <= 1e-12, format!("max deviation {worst:.2e}"))
}

fn divergence_order() -> Outcome {
    let mut r = rng(3);
    let fs = [FDivergence::Kl, FDivergence::HellingerSquared, FDivergence::JsSquared];
    let mut min_order = [f64::INFINITY; 3];
    for case in 0..20 {
        let n = 4 + case % 3;
        let w = random_tree(&mut r, n, 0.1, 1.0);
        let d = w.lambda().len();
        let mut delta: Vec<f64> = (0..d).map(|_| r.random_range(-1.0..1.0)).collect();
        let norm = delta.iter().map(|x| x * x).sum::<f64>().sqrt();
        delta.iter_mut().for_each(|x| *x /= norm);
        let g = fisher_info(&w, Param::Length).unwrap();
        let dv = nalgebra::DVector::from_vec(delta.clone());
        let quad = (dv.transpose() * &g * &dv)[(0, 0)];
        let p = full_distribution(&w).unwrap();
        for (k, f) in fs.iter().enumerate() {
            let resid = |h: f64| {
                let q = full_distribution(&perturbed(&w, &delta, h, Param::Length)).unwrap();
                (h * h * quad - 2.0 / f.f_second() * f_divergence(&q, &p, *f).unwrap()).abs()
            };
            let order = (resid(1e-2) / resid(5e-3)).log2();
            min_order[k] = min_order[k].min(order);
        }
    }
    outcome(
        min_order.iter().all(|&o| o >= 2.5),
        format!(
            "min observed order KL {:.2}, Hellinger² {:.2}, JS² {:.2} (need ≥ 2.5, i.e. ≥ 2^1.5 reduction)",
            min_order[0], min_order[1], min_order[2]
        ),
    )
}

/// Gradient and Hessian of `p(s)` per case, compared as a vector and a
/// matrix so that entries which vanish identically (the diagonal of the
/// Hessian in weights, where `p` is multilinear) do not divide by zero.
fn derivative_exactness() -> Outcome {
    let mut r = rng(4);
    let (mut worst_g, mut worst_h) = (0.0f64, 0.0f64);
    let rel = |a: &[f64], b: &[f64]| {
        let err = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
        err / a.iter().map(|x| x * x).sum::<f64>().sqrt()
    };
    for case in 0..100 {
        let n = 3 + case % 4;
        let w = random_tree(&mut r, n, 0.1, 1.5);
        let param = if case % 2 == 0 { Param::Length } else { Param::Lambda };
        let d = w.lambda().len();
        let s = r.random_range(0..1u64 << n);
        let p = |dir: &[f64]| brute_char_prob(&perturbed(&w, dir, 1.0, param), s);
        let shifted = |pairs: &[(usize, f64)]| {
            let mut dir = vec![0.0; d];
            for &(i, h) in pairs {
                dir[i] += h;
            }
            p(&dir)
        };
        let h = 1e-5;
        let an: Vec<f64> = (0..d).map(|e| char_prob_grad(&w, s, e, param).unwrap()).collect();
        let fd: Vec<f64> = (0..d)
            .map(|e| (shifted(&[(e, h)]) - shifted(&[(e, -h)])) / (2.0 * h))
            .collect();
        worst_g = worst_g.max(rel(&an, &fd));
        let h = 1e-4;
        let p0 = p(&vec![0.0; d]);
        let mut an = Vec::with_capacity(d * d);
        let mut fd = Vec::with_capacity(d * d);
        for a in 0..d {
            for b in 0..d {
                an.push(char_prob_hess(&w, s, a, b, param).unwrap());
                fd.push(if a == b {
                    (shifted(&[(a, h)]) - 2.0 * p0 + shifted(&[(a, -h)])) / (h * h)
                } else {
                    (shifted(&[(a, h), (b, h)]) - shifted(&[(a, h), (b, -h)]) - shifted(&[(a, -h), (b, h)])
                        + shifted(&[(a, -h), (b, -h)]))
                        / (4.0 * h * h)
                });
            }
        }
        worst_h = worst_h.max(rel(&an, &fd));
    }
    outcome(
        worst_g < 1e-6 && worst_h < 1e-4,
        format!("max rel err gradient {worst_g:.2e} (< 1e-6), Hessian {worst_h:.2e} (< 1e-4), both charts"),
    )
}

fn covariance_positive_definite() -> Outcome {
    let mut r = rng(5);
    let mut min_eig = f64::INFINITY;
    let mut forests = 0;
    for i in 0..1000 {
        let n = 2 + i % 7;
        let mut f = random_tree_forest(n, &mut r);
        for e in f.edges_mut() {
            let u: f64 = r.random();
            e.lambda = if u < 0.2 {
                1.0 - 1e-6
            } else if u < 0.35 {
                1.0
            } else {
                r.random_range(1e-3..1.0 - 1e-6)
            };
        }
        let w = canonicalize(&f).unwrap();
        forests += usize::from(w.components().len() > 1);
        let e = SymmetricEigen::new(covariance_matrix(&w)).eigenvalues;
        min_eig = min_eig.min(e.iter().copied().fold(f64::INFINITY, f64::min));
    }
    outcome(
        min_eig > 0.0,
        format!("min eigenvalue {min_eig:.3e} over 1000 walds ({forests} forests)"),
    )
}

fn spd_geometry() -> Outcome {
    let mut r = rng(6);
    let (mut end, mut prop, mut cong, mut scal) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for i in 0..50 {
        let n = 2 + i % 5;
        let s1 = SpdMatrix::new(random_spd(&mut r, n, 0.2, 5.0)).unwrap();
        let s2 = SpdMatrix::new(random_spd(&mut r, n, 0.2, 5.0)).unwrap();
        let d = spd_distance(&s1, &s2);
        end = end.max((spd_geodesic(&s1, &s2, 0.0).unwrap().matrix() - s1.matrix()).amax());
        end = end.max((spd_geodesic(&s1, &s2, 1.0).unwrap().matrix() - s2.matrix()).amax());
        for t in [0.25, 0.5, 0.8] {
            let g = spd_geodesic(&s1, &s2, t).unwrap();
            prop = prop.max((spd_distance(&s1, &g) - t * d).abs());
        }
        let a = random_spd(&mut r, n, 0.5, 2.0) * DMatrix::from_fn(n, n, |i, j| if i <= j { 1.0 } else { 0.0 });
        let (c1, c2) = (s1.congruence(&a).unwrap(), s2.congruence(&a).unwrap());
        cong = cong.max((spd_distance(&c1, &c2) - d).abs());
        for c in [0.1, 0.5, 2.0, 10.0] {
            let ci = SpdMatrix::new(DMatrix::identity(n, n) * c).unwrap();
            let expect = (n as f64 / 2.0).sqrt() * f64::ln(c).abs();
            scal = scal.max((spd_distance(&SpdMatrix::identity(n), &ci) - expect).abs());
        }
    }
    outcome(
        end <= 1e-10 && prop <= 1e-10 && cong <= 1e-10 && scal <= 1e-12,
        format!("endpoints {end:.1e}, proportionality {prop:.1e}, congruence {cong:.1e}, d(I,cI) {scal:.1e}"),
    )
}

fn distance_gradient() -> Outcome {
    let mut r = rng(7);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let n = 3 + i % 4;
        let w = random_tree(&mut r, n, 0.1, 1.5);
        let s0 = if i % 2 == 0 {
            SpdMatrix::new(random_spd(&mut r, n, 0.2, 3.0)).unwrap()
        } else {
            let v = random_tree(&mut r, n, 0.1, 1.5);
            covariance_of(&v).unwrap()
        };
        let g = grad_sq_dist(&s0, &w, Param::Length).unwrap();
        let d = g.len();
        let h = 1e-6;
        let f = |x: &Wald| spd_sq_distance(&s0, &covariance_of(x).unwrap());
        let fd: Vec<f64> = (0..d)
            .map(|e| {
                (f(&perturbed(&w, &unit(e, d), h, Param::Length)) - f(&perturbed(&w, &unit(e, d), -h, Param::Length)))
                    / (2.0 * h)
            })
            .collect();
        let err = g.iter().zip(&fd).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let norm = g.iter().map(|a| a * a).sum::<f64>().sqrt();
        worst = worst.max(err / norm);
    }
    outcome(worst < 1e-6, format!("max relative error {worst:.2e}"))
}

/// Points of a shot in length coordinates, cut at the first pendant clamp.
fn locus<M: MetricProvider>(m: &M, x0: &[f64], v0: &[f64], opts: &ShootOptions) -> Vec<Vec<f64>> {
    let p = shoot_geodesic(m, x0, v0, opts).unwrap();
    let stop = p.clamped.iter().position(|&c| c).unwrap_or(p.len());
    p.x[..stop.max(1)].to_vec()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn arc_length(p: &[Vec<f64>]) -> f64 {
    p.windows(2).map(|s| dist(&s[0], &s[1])).sum()
}

/// Prefix of a polyline with Euclidean length `l`.
fn truncate(p: &[Vec<f64>], l: f64) -> Vec<Vec<f64>> {
    let mut out = vec![p[0].clone()];
    let mut acc = 0.0;
    for s in p.windows(2) {
        let d = dist(&s[0], &s[1]);
        if acc + d >= l {
            let t = if d > 0.0 { (l - acc) / d } else { 0.0 };
            out.push(s[0].iter().zip(&s[1]).map(|(a, b)| a + t * (b - a)).collect());
            return out;
        }
        acc += d;
        out.push(s[1].clone());
    }
    out
}

fn point_segment(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let ab: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
    let ap: Vec<f64> = a.iter().zip(p).map(|(x, y)| y - x).collect();
    let len2: f64 = ab.iter().map(|x| x * x).sum();
    let t = if len2 > 0.0 {
        (ab.iter().zip(&ap).map(|(x, y)| x * y).sum::<f64>() / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let q: Vec<f64> = a.iter().zip(&ab).map(|(x, d)| x + t * d).collect();
    dist(p, &q)
}

fn hausdorff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let one = |a: &[Vec<f64>], b: &[Vec<f64>]| {
        a.iter()
            .map(|p| {
                if b.len() == 1 {
                    dist(p, &b[0])
                } else {
                    b.windows(2)
                        .map(|s| point_segment(p, &s[0], &s[1]))
                        .fold(f64::INFINITY, f64::min)
                }
            })
            .fold(0.0, f64::max)
    };
    one(a, b).max(one(b, a))
}

fn two_model_agreement() -> Outcome {
    let start = Instant::now();
    let opts = ShootOptions {
        dt: 1e-2,
        max_time: 1.5,
        ..ShootOptions::default()
    };
    let mut jobs = Vec::new();
    for p in [0.1, 0.5] {
        for a in [1.0, 0.3, 0.1] {
            for j in 0..24 {
                jobs.push((p, a, j));
            }
        }
    }
    let results: Vec<(f64, f64, usize, f64)> = jobs
        .par_iter()
        .map(|&(p, a, j)| {
            let (w, i6, i7) = five_leaf_config(p, a, a);
            let x0 = w.lengths();
            let mut v0 = vec![0.0; x0.len()];
            let th = 2.0 * PI * j as f64 / 24.0;
            v0[i6] = th.cos();
            v0[i7] = th.sin();
            let two = locus(&TwoStateMetric::new(w.topology()).unwrap(), &x0, &v0, &opts);
            let gau = locus(&GaussianMetric::new(w.topology()).unwrap(), &x0, &v0, &opts);
            let l = arc_length(&two).min(arc_length(&gau));
            let dev = if l > 0.0 {
                hausdorff(&truncate(&two, l), &truncate(&gau, l)) / l
            } else {
                0.0
            };
            (p, a, j, dev)
        })
        .collect();
    let worst = results
        .iter()
        .copied()
        .fold((0.0, 0.0, 0, 0.0), |acc, r| if r.3 > acc.3 { r } else { acc });
    let within = results.iter().filter(|r| r.3 <= 0.05).count();
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst.3 <= 0.05 && secs <= 300.0,
        format!(
            "{within}/{} shots within 5%, worst relative deviation {:.2}% (pendants {}, internal {}, direction {}/24), {secs:.1}s",
            results.len(),
            100.0 * worst.3,
            worst.0,
            worst.1,
            worst.2,
        ),
    )
}

fn unit_speed<M: MetricProvider>(m: &M, x: &[f64], v: &mut [f64]) {
    let g = m.metric(x).unwrap();
    let dv = nalgebra::DVector::from_column_slice(v);
    let s = (dv.transpose() * g * &dv)[(0, 0)].sqrt();
    v.iter_mut().for_each(|c| *c /= s);
}

fn infinity_in_finite_time() -> Outcome {
    let (w, i6, i7) = five_leaf_config(0.1, 1.0, 1.0);
    let m = LambdaChart::new(GaussianMetric::new(w.topology()).unwrap());
    let x0 = w.lambda().to_vec();
    let mut v0 = vec![0.0; x0.len()];
    v0[i6] = 1.0;
    v0[i7] = 1.0;
    unit_speed(&m, &x0, &mut v0);
    let opts = ShootOptions {
        dt: 1e-3,
        max_time: 2.0,
        ..ShootOptions::default()
    };
    let p = shoot_geodesic(&m, &x0, &v0, &opts).unwrap();
    let end = p.last();
    let t = *p.t.last().unwrap();
    let both = end[i6].min(end[i7]);
    outcome(
        p.termination == Termination::HitInfinityBoundary && t <= 2.0 && both >= 0.99,
        format!(
            "{} at t = {t:.3}, internal weights ({:.4}, {:.4})",
            p.termination.as_str(),
            end[i6],
            end[i7]
        ),
    )
}

/// Shoots from each Fig. 4 start along eight directions in the internal
/// plane for metric length 0.5, or half the time to the first boundary or
/// clamp event when that comes sooner, so the far end stays inside the
/// orthant. The endpoints are then joined by the symmetrized algorithm.
fn ode_parity() -> Outcome {
    let popts = ProjectOptions::default();
    let mut jobs = Vec::new();
    for p in [0.1, 0.5] {
        for a in [1.0, 0.3, 0.1] {
            for j in 0..8 {
                jobs.push((p, a, j));
            }
        }
    }
    let rows: Vec<(f64, f64, usize, f64, f64, bool)> = jobs
        .par_iter()
        .map(|&(p, a, j)| {
            let (w, i6, i7) = five_leaf_config(p, a, a);
            let m = GaussianMetric::new(w.topology()).unwrap();
            let x0 = w.lengths();
            let th = 2.0 * PI * j as f64 / 8.0;
            let mut v0 = vec![0.0; x0.len()];
            v0[i6] = th.cos();
            v0[i7] = th.sin();
            unit_speed(&m, &x0, &mut v0);
            let mut opts = ShootOptions {
                dt: 1e-2,
                max_time: 0.5,
                ..ShootOptions::default()
            };
            let probe = shoot_geodesic(&m, &x0, &v0, &opts).unwrap();
            let clamp = probe.clamped.iter().position(|&c| c);
            if clamp.is_some() || probe.termination != Termination::ReachedTime {
                opts.max_time = 0.5 * probe.t[clamp.unwrap_or(probe.len() - 1)];
            }
            let path = shoot_geodesic(&m, &x0, &v0, &opts).unwrap();
            let inside = path.termination == Termination::ReachedTime && !path.clamped.iter().any(|&c| c);
            let f2 = Wald::from_params(w.topology().clone(), path.last(), Param::Length).unwrap();
            let g = symmetrized_geodesic(&w, &f2, 64, &popts).unwrap();
            (p, a, j, path.total_length(), g.total_length, inside)
        })
        .collect();
    let worst = rows
        .iter()
        .copied()
        .max_by(|x, y| ((x.4 - x.3).abs() / x.3).total_cmp(&((y.4 - y.3).abs() / y.3)))
        .unwrap();
    let rel = (worst.4 - worst.3).abs() / worst.3;
    let inside = rows.iter().all(|r| r.5);
    outcome(
        rel <= 0.02 && inside,
        format!(
            "max relative length difference {:.3}% (pendants {}, internal {}, direction {}/8: ODE {:.5}, symmetrized {:.5}) over {} same-orthant pairs",
            100.0 * rel,
            worst.0,
            worst.1,
            worst.2,
            worst.3,
            worst.4,
            rows.len()
        ),
    )
}

fn nni_example(which: usize, l6: f64, l7: f64) -> Wald {
    let text = match which {
        1 => format!("((1:0.1,2:0.1):{l6},3:0.1,(4:0.1,5:0.1):{l7});"),
        2 => format!("((2:0.1,3:0.1):{l6},1:0.1,(4:0.1,5:0.1):{l7});"),
        _ => format!("((2:0.1,3:0.1):{l6},5:0.1,(1:0.1,4:0.1):{l7});"),
    };
    wald_from_newick(&text, Param::Length).unwrap()
}

fn symmetrized_shorter() -> Outcome {
    let opts = ProjectOptions::default();
    let f1 = nni_example(1, 0.5, 0.5);
    let mut ok = true;
    let mut strict = false;
    let mut parts = Vec::new();
    for (name, f) in [("F1/F2", nni_example(2, 0.5, 0.5)), ("F1/F3", nni_example(3, 0.5, 0.5))] {
        let sym = symmetrized_geodesic(&f1, &f, 32, &opts).unwrap().total_length;
        let fwd = recursive_geodesic(&f1, &f, 32, &opts).unwrap().total_length;
        let bwd = recursive_geodesic(&f, &f1, 32, &opts).unwrap().total_length;
        let slack = 1e-12 * sym;
        ok &= sym <= fwd + slack && sym <= bwd + slack;
        strict |= sym < fwd.min(bwd) - slack;
        parts.push(format!(
            "{name}: symmetrized {sym:.6}, recursive {fwd:.6} / reversed {bwd:.6}"
        ));
    }
    outcome(ok && strict, parts.join("; "))
}

/// Grid: the decade `[1e-3, 1e-2]`, steps of 0.025 up to 1, and steps of
/// 0.005 just above `λ0`.
fn star_grid(l0: f64) -> Vec<f64> {
    let mut grid: Vec<f64> = (0..=4).map(|i| 10f64.powf(-3.0 + 0.25 * i as f64)).collect();
    grid.extend((1..=40).map(|i| i as f64 * 0.025));
    grid.extend((1..=12).map(|i| l0 + 0.005 * i as f64).filter(|&l| l < 1.0));
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    grid
}

fn star_profile() -> Outcome {
    let opts = ProjectOptions::default();
    let mut ok = true;
    let mut mins = Vec::new();
    let mut parts = Vec::new();
    for l0 in [0.1, 0.5, 0.9, 0.95] {
        let prof = star_distance_profile(l0, &star_grid(l0), 32, &opts).unwrap();
        let (k, &(lstar, dmin)) = prof
            .iter()
            .enumerate()
            .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
            .unwrap();
        let interior = k > 0 && k + 1 < prof.len() && lstar > l0;
        let decade: Vec<f64> = prof.iter().filter(|p| p.0 <= 1e-2 + 1e-15).map(|p| p.1).collect();
        let rising = decade.windows(2).all(|d| d[0] > d[1]);
        ok &= interior && rising;
        mins.push(dmin);
        parts.push(format!(
            "λ0={l0}: min {dmin:.4} at λ*={lstar:.3}{}",
            if rising { "" } else { " (not rising near 0)" }
        ));
    }
    let decreasing = mins.windows(2).all(|m| m[1] < m[0]);
    outcome(ok && decreasing, parts.join("; "))
}

fn curvature_signs() -> Outcome {
    let mut r = rng(13);
    let mut samples = Vec::new();
    for _ in 0..100 {
        let w = random_tree(&mut r, 5, 0.1, 1.5);
        let u: Vec<f64> = (0..7).map(|_| r.random_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..7).map(|_| r.random_range(-1.0..1.0)).collect();
        samples.push((w, u, v));
    }
    let ks: Vec<f64> = samples
        .par_iter()
        .map(|(w, u, v)| {
            let m = GaussianMetric::new(w.topology()).unwrap();
            sectional_curvature(&m, &w.lengths(), u, v).unwrap()
        })
        .collect();
    let pos = ks.iter().filter(|&&k| k > 1e-6).count();
    let neg = ks.iter().filter(|&&k| k < -1e-6).count();
    let (lo, hi) = ks
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |a, &k| (a.0.min(k), a.1.max(k)));
    outcome(
        pos > 0 && neg > 0,
        format!("{pos} positive, {neg} negative, range [{lo:.3}, {hi:.3}]"),
    )
}

fn forest_finite_distance() -> Outcome {
    let tree = wald_from_newick("((1:0.3,2:0.3):0.5,(3:0.3,4:0.3));", Param::Length).unwrap();
    let forest = wald_from_newick("((1:0.3,2:0.3):inf,(3:0.3,4:0.3));", Param::Length).unwrap();
    let g = symmetrized_geodesic(&tree, &forest, 64, &ProjectOptions::default()).unwrap();
    let finite = g.segment_lengths.iter().all(|s| s.is_finite()) && g.total_length.is_finite();
    outcome(
        finite && forest.components().len() == 2,
        format!(
            "total length {:.6} over {} segments",
            g.total_length,
            g.segment_lengths.len()
        ),
    )
}

fn bhv_baseline() -> Outcome {
    let mut r = rng(15);
    let (mut same, mut cross) = (0.0f64, 0.0f64);
    let mut crossing = 0;
    for i in 0..100 {
        let n = 4 + i % 3;
        let a = random_tree(&mut r, n, 0.05, 1.5);
        let l: Vec<f64> = (0..a.lambda().len()).map(|_| r.random_range(0.05..1.5)).collect();
        let b = Wald::from_params(a.topology().clone(), &l, Param::Length).unwrap();
        let euclid = dist(&a.lengths(), &b.lengths());
        same = same.max((bhv_distance(&a, &b).unwrap() - euclid).abs());
        let c = random_tree(&mut r, n, 0.05, 1.5);
        crossing += usize::from(c.topology() != a.topology());
        cross = cross.max((bhv_distance(&a, &c).unwrap() - bhv_oracle(&a, &c)).abs());
    }
    outcome(
        same <= 1e-12 && cross <= 1e-8,
        format!("same topology {same:.1e}, cross-orthant vs exhaustive oracle {cross:.1e} ({crossing} differing topologies)"),
    )
}

fn metric_correlation() -> Outcome {
    let mut r = rng(16);
    let base = random_tree(&mut r, 6, 0.1, 1.0);
    let mut trees = Vec::new();
    for _ in 0..50 {
        let l: Vec<f64> = base
            .lengths()
            .iter()
            .map(|x| x * (0.4 * r.random_range(-1.0..1.0f64)).exp())
            .collect();
        let mut w = Wald::from_params(base.topology().clone(), &l, Param::Length).unwrap();
        if r.random::<f64>() < 0.3 {
            let internal = w.topology().internal_indices();
            let i = internal[r.random_range(0..internal.len())];
            let (x, y) = nni_splits(w.topology(), &w.splits()[i]).unwrap();
            let s = if r.random::<bool>() { x } else { y };
            w = waldspace::forest::nni_wald(&w, i, s, w.lambda()[i]).unwrap();
        }
        trees.push(w);
    }
    let metrics = [TreeMetric::JensenShannon, TreeMetric::Cov, TreeMetric::PathDifference];
    let rep = compare_metrics(&trees, &metrics, 16).unwrap();
    let (js_cov, pd_cov) = (rep.correlations[(0, 1)], rep.correlations[(2, 1)]);
    outcome(
        js_cov > pd_cov && rep.failures.is_empty(),
        format!("corr(js, cov) = {js_cov:.4}, corr(pathdiff, cov) = {pd_cov:.4}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 16] = [
        ("character distribution normalization", character_normalization),
        ("leaf covariance from enumeration", leaf_covariance),
        ("f-divergence local quadratic order", divergence_order),
        ("analytic derivatives of character probabilities", derivative_exactness),
        ("positive definite leaf covariance", covariance_positive_definite),
        ("SPD geodesics and distance", spd_geometry),
        ("gradient of squared covariance distance", distance_gradient),
        ("two-state and Gaussian geodesic loci agree", two_model_agreement),
        (
            "Gaussian geodesic reaches infinite edges in finite time",
            infinity_in_finite_time,
        ),
        ("ODE geodesic and symmetrized projection lengths", ode_parity),
        ("symmetrized paths no longer than recursive ones", symmetrized_shorter),
        ("distance profile to the star stratum", star_profile),
        ("sectional curvature of both signs", curvature_signs),
        ("finite distance from tree to forest", forest_finite_distance),
        ("BHV distance against exhaustive search", bhv_baseline),
        ("metric correlation ordering", metric_correlation),
    ];
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failed = 0;
    let mut total = Duration::ZERO;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if filter.as_ref().is_some_and(|f| !name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let o = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        let dt = start.elapsed();
        total += dt;
        failed += usize::from(!o.pass);
        println!(
            "criterion {:>2} [{}] {name}: {} ({:.1}s)",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            dt.as_secs_f64()
        );
    }
    println!("{failed} failed, {:.1}s total", total.as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
