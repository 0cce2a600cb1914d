use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::graph::{canonicalize, Forest};
use super::topology::Topology;
use super::wald::Wald;
use crate::error::{Error, Result};

/// How the topology of a random wald is chosen.
#[derive(Debug, Clone, Default)]
pub enum TopologyPolicy {
    /// Uniform over fully resolved topologies.
    #[default]
    Uniform,
    /// Always this topology; only the weights are drawn.
    Fixed(Topology),
}

/// Settings for [`random_wald`]. Weights are i.i.d. uniform on `lambda_range`.
#[derive(Debug, Clone)]
pub struct RandomWald {
    pub lambda_range: (f64, f64),
    pub policy: TopologyPolicy,
}

impl Default for RandomWald {
    fn default() -> Self {
        RandomWald {
            lambda_range: (0.05, 0.95),
            policy: TopologyPolicy::Uniform,
        }
    }
}

/// Fully resolved tree on `n` leaves built by attaching leaves one at a time
/// to a uniformly chosen edge; every tree arises from exactly one sequence of
/// choices, so the topology is uniform.
pub fn random_tree_forest<R: Rng>(n: usize, rng: &mut R) -> Forest {
    let mut f = Forest::new(n);
    if n < 3 {
        if n == 2 {
            f.add_edge(0, 1, 0.5);
        }
        return f;
    }
    let c = f.add_vertex();
    for u in 0..3 {
        f.add_edge(u, c, 0.5);
    }
    for u in 3..n {
        let k = rng.random_range(0..f.edges().len());
        let e = f.edges()[k];
        let v = f.add_vertex();
        f.edges_mut()[k].b = v;
        f.add_edge(v, e.b, 0.5);
        f.add_edge(u, v, 0.5);
    }
    f
}

pub fn random_topology<R: Rng>(n: usize, rng: &mut R) -> Result<Topology> {
    if n < 2 {
        return Err(Error::arg("random trees need at least two leaves"));
    }
    Ok(canonicalize(&random_tree_forest(n, rng))?.topology().clone())
}

pub fn random_wald_with<R: Rng>(n: usize, cfg: &RandomWald, rng: &mut R) -> Result<Wald> {
    let (lo, hi) = cfg.lambda_range;
    if !(0.0 < lo && lo <= hi && hi < 1.0) {
        return Err(Error::arg(format!("weight range ({lo}, {hi}) must lie inside (0, 1)")));
    }
    let t = match &cfg.policy {
        TopologyPolicy::Uniform => random_topology(n, rng)?,
        TopologyPolicy::Fixed(t) => t.clone(),
    };
    let lambda = (0..t.len())
        .map(|_| if lo == hi { lo } else { rng.random_range(lo..hi) })
        .collect();
    Wald::new(t, lambda)
}

/// Deterministic per seed.
pub fn random_wald(n: usize, seed: u64, cfg: &RandomWald) -> Result<Wald> {
    random_wald_with(n, cfg, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Every fully resolved topology on `n` leaves, `(2n-5)!!` of them.
pub fn all_topologies(n: usize) -> Vec<Topology> {
    fn grow(f: &Forest, u: usize, n: usize, out: &mut Vec<Topology>) {
        if u == n {
            out.push(canonicalize(f).unwrap().topology().clone());
            return;
        }
        for k in 0..f.edges().len() {
            let mut g = f.clone();
            let e = g.edges()[k];
            let v = g.add_vertex();
            g.edges_mut()[k].b = v;
            g.add_edge(v, e.b, 0.5);
            g.add_edge(u, v, 0.5);
            grow(&g, u + 1, n, out);
        }
    }
    let mut out = Vec::new();
    if n == 2 {
        let mut f = Forest::new(2);
        f.add_edge(0, 1, 0.5);
        out.push(canonicalize(&f).unwrap().topology().clone());
    } else if n >= 3 {
        let mut f = Forest::new(n);
        let c = f.add_vertex();
        for u in 0..3 {
            f.add_edge(u, c, 0.5);
        }
        grow(&f, 3, n, &mut out);
    }
    out
}
