use nalgebra::DMatrix;
use rayon::prelude::*;

use super::pruning::Pruner;
use crate::error::{Error, Result};
use crate::forest::{Forest, Param, Wald};

/// Default bound on `N` for anything that enumerates all `2^N` characters.
pub const DEFAULT_CAP: usize = 16;

/// Probability vector over characters, index bit `u` holding the letter at
/// leaf `u` (leaf 1 in the least significant bit).
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterDistribution {
    pub n_leaves: usize,
    pub probs: Vec<f64>,
}

impl CharacterDistribution {
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Letters of character `index` in leaf order.
pub fn character_bits(index: u64, n: usize) -> Vec<u8> {
    (0..n).map(|u| (index >> u & 1) as u8).collect()
}

pub fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap || n >= 63 {
        return Err(Error::TooManyLeaves { n, cap });
    }
    Ok(())
}

fn check_char(w: &Wald, s: u64) -> Result<()> {
    let n = w.n_leaves();
    if n < 64 && s >> n != 0 {
        return Err(Error::arg(format!("character {s} has more than {n} letters")));
    }
    Ok(())
}

/// `p_w(s)`.
pub fn char_prob(w: &Wald, s: u64) -> Result<f64> {
    check_char(w, s)?;
    Ok(Pruner::for_wald(w).prob(w.lambda(), s))
}

/// `∂p_w(s)/∂x_e` in the chosen chart; `∂/∂λ = (1/(1-λ)) ∂/∂ℓ`.
pub fn char_prob_grad(w: &Wald, s: u64, e: usize, param: Param) -> Result<f64> {
    check_char(w, s)?;
    if e >= w.lambda().len() {
        return Err(Error::arg(format!("split index {e} out of range")));
    }
    let mut g = vec![0.0; w.lambda().len()];
    Pruner::for_wald(w).prob_grad(w.lambda(), s, &mut g);
    Ok(match param {
        Param::Length => g[e],
        Param::Lambda => g[e] / (1.0 - w.lambda()[e]),
    })
}

/// `∂²p_w(s)/∂x_a∂x_b`. In weights, with `c = 1/(1-λ)`,
/// `∂²/∂λ_a∂λ_b = c_a c_b ∂²/∂ℓ_a∂ℓ_b + δ_ab c_a² ∂/∂ℓ_a`.
pub fn char_prob_hess(w: &Wald, s: u64, a: usize, b: usize, param: Param) -> Result<f64> {
    check_char(w, s)?;
    let m = w.lambda().len();
    if a >= m || b >= m {
        return Err(Error::arg("split index out of range"));
    }
    let mut g = vec![0.0; m];
    let mut h = DMatrix::zeros(m, m);
    Pruner::for_wald(w).prob_hess(w.lambda(), s, &mut g, &mut h);
    Ok(match param {
        Param::Length => h[(a, b)],
        Param::Lambda => {
            let (ca, cb) = (1.0 / (1.0 - w.lambda()[a]), 1.0 / (1.0 - w.lambda()[b]));
            let mut v = ca * cb * h[(a, b)];
            if a == b {
                v += ca * ca * g[a];
            }
            v
        }
    })
}

/// Probabilities of all characters, computing half of them and filling the
/// rest by complement symmetry.
pub fn distribution_of(pr: &Pruner, lambda: &[f64]) -> CharacterDistribution {
    let n = pr.n_leaves();
    let half = 1u64 << n.saturating_sub(1);
    let full = (1u64 << n) - 1;
    let lower: Vec<f64> = (0..half).into_par_iter().map(|s| pr.prob(lambda, s)).collect();
    let mut probs = vec![0.0; 1 << n];
    for (s, &p) in lower.iter().enumerate() {
        probs[s] = p;
        probs[(s as u64 ^ full) as usize] = p;
    }
    CharacterDistribution { n_leaves: n, probs }
}

pub fn full_distribution(w: &Wald) -> Result<CharacterDistribution> {
    full_distribution_capped(w, DEFAULT_CAP)
}

pub fn full_distribution_capped(w: &Wald, cap: usize) -> Result<CharacterDistribution> {
    check_cap(w.n_leaves(), cap)?;
    Ok(distribution_of(&Pruner::for_wald(w), w.lambda()))
}

/// Distribution of a forest that need not be canonical.
pub fn forest_distribution(f: &Forest, cap: usize) -> Result<CharacterDistribution> {
    check_cap(f.n_leaves(), cap)?;
    let lambda: Vec<f64> = f.edges().iter().map(|e| e.lambda).collect();
    Ok(distribution_of(&Pruner::from_forest(f), &lambda))
}
