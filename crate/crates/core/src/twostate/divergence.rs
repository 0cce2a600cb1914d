//! f-divergences between character distributions.

use super::distribution::{full_distribution_capped, CharacterDistribution};
use crate::error::{Error, Result};
use crate::forest::Wald;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FDivergence {
    /// `f(t) = t log t`, giving `KL(p; q)`.
    Kl,
    /// `f(t) = −log t`, giving `KL(q; p)`.
    ReverseKl,
    /// Squared Jensen-Shannon metric, `½ KL(p; m) + ½ KL(q; m)` with `m = (p+q)/2`.
    JsSquared,
    /// Squared Hellinger metric, `Σ (√p − √q)²`.
    HellingerSquared,
}

impl FDivergence {
    pub fn f(&self, t: f64) -> f64 {
        match self {
            FDivergence::Kl => {
                if t == 0.0 {
                    0.0
                } else {
                    t * t.ln()
                }
            }
            FDivergence::ReverseKl => -t.ln(),
            FDivergence::JsSquared => {
                let a = if t == 0.0 { 0.0 } else { t * (2.0 * t / (1.0 + t)).ln() };
                0.5 * (a + (2.0 / (1.0 + t)).ln())
            }
            FDivergence::HellingerSquared => (t.sqrt() - 1.0).powi(2),
        }
    }

    /// `f''(1)`, the factor relating the divergence to the Fisher metric.
    pub fn f_second(&self) -> f64 {
        match self {
            FDivergence::Kl | FDivergence::ReverseKl => 1.0,
            FDivergence::JsSquared => 0.25,
            FDivergence::HellingerSquared => 0.5,
        }
    }

    /// `f(t) − f'(1)(t − 1)`, which has the same divergence (the linear term
    /// sums to zero) but nonnegative terms and less cancellation.
    fn f_shifted(&self, t: f64) -> f64 {
        let d = t - 1.0;
        match self {
            FDivergence::Kl => {
                if t == 0.0 {
                    1.0
                } else {
                    t * d.ln_1p() - d
                }
            }
            FDivergence::ReverseKl => d - d.ln_1p(),
            _ => self.f(t),
        }
    }
}

/// `D_f(p; q) = Σ_s q(s) f(p(s)/q(s))`.
pub fn f_divergence(p: &CharacterDistribution, q: &CharacterDistribution, f: FDivergence) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::arg(format!(
            "distributions of length {} and {}",
            p.len(),
            q.len()
        )));
    }
    if q.probs.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::arg("reference distribution has a zero entry"));
    }
    if f == FDivergence::ReverseKl && p.probs.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::arg("reverse divergence needs a positive distribution"));
    }
    Ok(p.probs
        .iter()
        .zip(&q.probs)
        .map(|(&a, &b)| b * f.f_shifted(a / b))
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbMetric {
    JensenShannon,
    Hellinger,
}

pub fn distribution_distance(p: &CharacterDistribution, q: &CharacterDistribution, metric: ProbMetric) -> Result<f64> {
    let f = match metric {
        ProbMetric::JensenShannon => FDivergence::JsSquared,
        ProbMetric::Hellinger => FDivergence::HellingerSquared,
    };
    Ok(f_divergence(p, q, f)?.max(0.0).sqrt())
}

/// Jensen-Shannon or Hellinger distance between the character distributions
/// of two walds.
pub fn extrinsic_distance(w1: &Wald, w2: &Wald, metric: ProbMetric, cap: usize) -> Result<f64> {
    if w1.n_leaves() != w2.n_leaves() {
        return Err(Error::arg("walds have different leaf counts"));
    }
    let p = full_distribution_capped(w1, cap)?;
    let q = full_distribution_capped(w2, cap)?;
    distribution_distance(&p, &q, metric)
}
