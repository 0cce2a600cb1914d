use nalgebra::{DMatrix, DVector};

use super::{metric_inverse, CoordRole, Guard, MetricProvider};
use crate::error::{Error, Result};

/// Why a shoot stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    ReachedTime,
    /// An internal edge shrank to zero.
    HitBhvBoundary,
    /// An edge reached infinite length (weight 1).
    HitInfinityBoundary,
    /// A pendant edge reached zero while clamping was off.
    PendantZero,
    /// A coordinate without an edge role left its box.
    LeftDomain,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::ReachedTime => "reached_time",
            Termination::HitBhvBoundary => "hit_bhv_boundary",
            Termination::HitInfinityBoundary => "hit_infinity_boundary",
            Termination::PendantZero => "pendant_zero",
            Termination::LeftDomain => "left_domain",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ShootOptions {
    pub dt: f64,
    pub max_time: f64,
    /// Pin pendant coordinates that reach zero and keep integrating.
    pub pendant_clamp: bool,
    /// Step size below which a failing step counts as having reached a bound.
    pub min_step: f64,
}

impl Default for ShootOptions {
    fn default() -> Self {
        ShootOptions {
            dt: 1e-3,
            max_time: 1.0,
            pendant_clamp: true,
            min_step: 1e-9,
        }
    }
}

/// Samples along a geodesic.
#[derive(Debug, Clone)]
pub struct GeodesicPath {
    pub t: Vec<f64>,
    pub x: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
    /// True once some pendant coordinate has been pinned at zero.
    pub clamped: Vec<bool>,
    pub cumulative_length: Vec<f64>,
    pub termination: Termination,
}

impl GeodesicPath {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn last(&self) -> &[f64] {
        self.x.last().unwrap()
    }

    pub fn total_length(&self) -> f64 {
        *self.cumulative_length.last().unwrap()
    }
}

/// `−Γ(v, v)` restricted to the coordinates that are not frozen.
fn acceleration<M: MetricProvider + ?Sized>(m: &M, x: &[f64], v: &[f64], frozen: &[bool]) -> Result<Vec<f64>> {
    let (g, dg) = m.metric_derivs(x)?;
    let active: Vec<usize> = (0..x.len()).filter(|&k| !frozen[k]).collect();
    let d = active.len();
    let mut out = vec![0.0; x.len()];
    if d == 0 {
        return Ok(out);
    }
    let gs = DMatrix::from_fn(d, d, |a, b| g[(active[a], active[b])]);
    let ginv = metric_inverse(&gs)?;
    let va = DVector::from_iterator(d, active.iter().map(|&k| v[k]));
    let sub = |m: &DMatrix<f64>| DMatrix::from_fn(d, d, |a, b| m[(active[a], active[b])]);
    let dgs: Vec<DMatrix<f64>> = active.iter().map(|&k| sub(&dg[k])).collect();
    // w_l = Σ_j v_j (∂_j g v)_l − ½ vᵀ ∂_l g v, and a = −g⁻¹ w.
    let mut w = DVector::zeros(d);
    for (j, dgj) in dgs.iter().enumerate() {
        w += dgj * &va * va[j];
    }
    for (l, dgl) in dgs.iter().enumerate() {
        w[l] -= 0.5 * va.dot(&(dgl * &va));
    }
    let a = -(ginv * w);
    for (i, &k) in active.iter().enumerate() {
        out[k] = a[i];
    }
    Ok(out)
}

fn rk4_step<M: MetricProvider + ?Sized>(
    m: &M,
    guard: &Guard,
    x: &[f64],
    v: &[f64],
    h: f64,
    frozen: &[bool],
) -> Result<(Vec<f64>, Vec<f64>)> {
    let d = x.len();
    let axpy = |a: &[f64], s: f64, b: &[f64]| -> Vec<f64> { (0..d).map(|i| a[i] + s * b[i]).collect() };
    let check = |y: &[f64]| -> Result<()> {
        if guard.contains(y) {
            Ok(())
        } else {
            Err(Error::OutsideDomain("stage left the guard".into()))
        }
    };
    let a1 = acceleration(m, x, v, frozen)?;
    let (x2, v2) = (axpy(x, h / 2.0, v), axpy(v, h / 2.0, &a1));
    check(&x2)?;
    let a2 = acceleration(m, &x2, &v2, frozen)?;
    let (x3, v3) = (axpy(x, h / 2.0, &v2), axpy(v, h / 2.0, &a2));
    check(&x3)?;
    let a3 = acceleration(m, &x3, &v3, frozen)?;
    let (x4, v4) = (axpy(x, h, &v3), axpy(v, h, &a3));
    check(&x4)?;
    let a4 = acceleration(m, &x4, &v4, frozen)?;
    let xn: Vec<f64> = (0..d)
        .map(|i| x[i] + h / 6.0 * (v[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i]))
        .collect();
    let vn: Vec<f64> = (0..d)
        .map(|i| v[i] + h / 6.0 * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i]))
        .collect();
    check(&xn)?;
    Ok((xn, vn))
}

fn segment_length<M: MetricProvider + ?Sized>(m: &M, a: &[f64], b: &[f64]) -> Result<f64> {
    let mid: Vec<f64> = a.iter().zip(b).map(|(p, q)| 0.5 * (p + q)).collect();
    let g = m.metric(&mid)?;
    let dx = DVector::from_iterator(a.len(), a.iter().zip(b).map(|(p, q)| q - p));
    Ok(dx.dot(&(g * &dx)).max(0.0).sqrt())
}

/// Integrates `ẍ^k + Γ^k_ij ẋ^i ẋ^j = 0` with classic RK4.
///
/// A step that leaves the guard (or fails to evaluate the metric) is halved
/// until it fits; once the step falls below `min_step` the path is at a
/// bound. Internal coordinates stop the shoot at their lower bound, any edge
/// coordinate stops it at its upper bound (infinite length), and pendant
/// coordinates are pinned at zero with zero velocity when clamping is on. The
/// remaining coordinates then follow the geodesic equation of the metric
/// restricted to them.
pub fn shoot_geodesic<M: MetricProvider + ?Sized>(
    m: &M,
    x0: &[f64],
    v0: &[f64],
    opts: &ShootOptions,
) -> Result<GeodesicPath> {
    let guard = m.guard();
    let d = m.dim();
    if x0.len() != d || v0.len() != d {
        return Err(Error::arg(format!("expected {d} coordinates")));
    }
    if !guard.contains(x0) {
        return Err(Error::OutsideDomain(format!("initial point {x0:?}")));
    }
    m.metric(x0)?;
    let mut frozen = vec![false; d];
    let mut x = x0.to_vec();
    let mut v = v0.to_vec();
    let mut path = GeodesicPath {
        t: vec![0.0],
        x: vec![x.clone()],
        v: vec![v.clone()],
        clamped: vec![false],
        cumulative_length: vec![0.0],
        termination: Termination::ReachedTime,
    };
    let mut t = 0.0;
    let mut h = opts.dt;
    let mut pinned = false;
    while t < opts.max_time * (1.0 - 1e-14) {
        let step = h.min(opts.max_time - t);
        match rk4_step(m, &guard, &x, &v, step, &frozen) {
            Ok((xn, vn)) => {
                let seg = segment_length(m, &x, &xn)?;
                t += step;
                x = xn;
                v = vn;
                path.t.push(t);
                path.x.push(x.clone());
                path.v.push(v.clone());
                path.clamped.push(pinned);
                path.cumulative_length
                    .push(path.cumulative_length.last().unwrap() + seg);
                h = (2.0 * h).min(opts.dt);
            }
            Err(_) if step / 2.0 >= opts.min_step => h = step / 2.0,
            Err(e) => {
                // At a bound: find the coordinate heading into the nearest one.
                let mut best: Option<(usize, bool, f64)> = None;
                for k in (0..d).filter(|&k| !frozen[k]) {
                    let (dl, du) = guard.proximity(k, x[k]);
                    if v[k] < 0.0 && best.is_none_or(|b| dl < b.2) {
                        best = Some((k, false, dl));
                    }
                    if v[k] > 0.0 && best.is_none_or(|b| du < b.2) {
                        best = Some((k, true, du));
                    }
                }
                let Some((k, upper, dist)) = best else {
                    return Err(Error::NonConvergence(format!("step underflow at t = {t}: {e}")));
                };
                if dist > 1e-3 && !matches!(e, Error::OutsideDomain(_)) {
                    return Err(Error::NonConvergence(format!("step underflow at t = {t}: {e}")));
                }
                let role = guard.roles[k];
                if !upper && role == CoordRole::Pendant && opts.pendant_clamp {
                    x[k] = guard.lower[k];
                    v[k] = 0.0;
                    frozen[k] = true;
                    pinned = true;
                    *path.x.last_mut().unwrap() = x.clone();
                    *path.v.last_mut().unwrap() = v.clone();
                    *path.clamped.last_mut().unwrap() = true;
                    h = opts.dt;
                    continue;
                }
                path.termination = match (role, upper) {
                    (CoordRole::Free, _) => Termination::LeftDomain,
                    (_, true) => Termination::HitInfinityBoundary,
                    (CoordRole::Internal, false) => Termination::HitBhvBoundary,
                    (CoordRole::Pendant, false) => Termination::PendantZero,
                };
                return Ok(path);
            }
        }
    }
    Ok(path)
}

/// `Σ sqrt(δxᵀ g(midpoint) δx)` over consecutive samples.
pub fn path_length<M: MetricProvider + ?Sized>(m: &M, path: &GeodesicPath) -> Result<f64> {
    let mut total = 0.0;
    for w in path.x.windows(2) {
        total += segment_length(m, &w[0], &w[1])?;
    }
    Ok(total)
}
