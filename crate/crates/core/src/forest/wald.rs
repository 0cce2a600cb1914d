use nalgebra::DMatrix;

use super::graph::Forest;
use super::params::{len, Param};
use super::split::{leaves, LeafSet, Split};
use super::topology::Topology;
use crate::error::{Error, Result};

/// Canonical forest: a topology and one weight `λ ∈ [0, 1)` per split.
///
/// Internal splits carry `λ > 0`; pendant splits may be 0 as long as no two
/// leaves end up coincident.
#[derive(Clone, PartialEq)]
pub struct Wald {
    topology: Topology,
    lambda: Vec<f64>,
}

impl Wald {
    pub fn new(topology: Topology, lambda: Vec<f64>) -> Result<Wald> {
        if lambda.len() != topology.len() {
            return Err(Error::arg(format!(
                "{} weights for {} splits",
                lambda.len(),
                topology.len()
            )));
        }
        for (s, &l) in topology.splits().iter().zip(&lambda) {
            if !(0.0..1.0).contains(&l) {
                return Err(Error::InvalidForest(format!(
                    "split {s} has weight {l}; canonical weights lie in [0, 1)"
                )));
            }
            if l == 0.0 && !s.is_pendant() {
                return Err(Error::InvalidForest(format!("internal split {s} has weight 0")));
            }
        }
        for c in topology.components() {
            if c.count_ones() < 2 {
                continue;
            }
            for u in leaves(c) {
                let pendant = topology.splits().iter().any(|s| {
                    s.component() == c && s.pendant_leaf().is_some() && (s.inner() == 1 << u || s.outer() == 1 << u)
                });
                if !pendant {
                    return Err(Error::InvalidForest(format!("leaf {} has no pendant edge", u + 1)));
                }
            }
        }
        let w = Wald { topology, lambda };
        w.check_coincidence()?;
        Ok(w)
    }

    /// Builds a wald from parameters in either chart.
    pub fn from_params(topology: Topology, values: &[f64], param: Param) -> Result<Wald> {
        let lambda = match param {
            Param::Lambda => values.to_vec(),
            Param::Length => values
                .iter()
                .map(|&l| super::params::lambda_from_length(l))
                .collect::<Result<_>>()?,
        };
        Wald::new(topology, lambda)
    }

    fn check_coincidence(&self) -> Result<()> {
        for c in self.topology.components() {
            let ls: Vec<usize> = leaves(c).collect();
            for (i, &u) in ls.iter().enumerate() {
                for &v in &ls[i + 1..] {
                    let positive = self
                        .topology
                        .splits()
                        .iter()
                        .zip(&self.lambda)
                        .any(|(s, &l)| l > 0.0 && s.separates(u, v));
                    if !positive {
                        return Err(Error::CoincidentLeaves(u + 1, v + 1));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n_leaves(&self) -> usize {
        self.topology.n_leaves()
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn splits(&self) -> &[Split] {
        self.topology.splits()
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.lambda.iter().map(|&l| len(l)).collect()
    }

    pub fn params(&self, param: Param) -> Vec<f64> {
        match param {
            Param::Lambda => self.lambda.clone(),
            Param::Length => self.lengths(),
        }
    }

    pub fn components(&self) -> Vec<LeafSet> {
        self.topology.components()
    }

    pub fn is_fully_resolved(&self) -> bool {
        self.topology.is_fully_resolved()
    }

    /// `ℓ_uv`, the summed length of the edges between two leaves; infinite
    /// between components.
    pub fn path_length_matrix(&self) -> DMatrix<f64> {
        let n = self.n_leaves();
        let comps = self.components();
        let comp_of = |u: usize| comps.iter().position(|c| c & (1 << u) != 0).unwrap();
        let mut m = DMatrix::zeros(n, n);
        for u in 0..n {
            for v in 0..n {
                if u != v && comp_of(u) != comp_of(v) {
                    m[(u, v)] = f64::INFINITY;
                }
            }
        }
        for (s, &l) in self.splits().iter().zip(&self.lambda) {
            let le = len(l);
            for u in leaves(s.inner()) {
                for v in leaves(s.outer()) {
                    m[(u, v)] += le;
                    m[(v, u)] += le;
                }
            }
        }
        m
    }

    /// Graph representative: leaves `0..n`, one internal vertex per non-leaf
    /// clade, one edge per split.
    pub fn to_forest(&self) -> Forest {
        self.to_forest_indexed().0
    }

    /// As [`Wald::to_forest`], also returning the split index of every edge.
    pub fn to_forest_indexed(&self) -> (Forest, Vec<usize>) {
        forest_from_splits(&self.topology, &self.lambda)
    }

    /// Same topology and weights within `tol`.
    pub fn approx_eq(&self, other: &Wald, tol: f64) -> bool {
        self.topology == other.topology && self.lambda.iter().zip(&other.lambda).all(|(a, b)| (a - b).abs() <= tol)
    }
}

impl std::fmt::Debug for Wald {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Wald{{")?;
        for (i, (s, l)) in self.splits().iter().zip(&self.lambda).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}: {l}")?;
        }
        write!(f, "}}")
    }
}

/// Graph realising a compatible split set with arbitrary weights in `[0, 1]`:
/// leaves `0..n`, one internal vertex per clade of two or more leaves (the
/// side away from the component's lowest leaf), one edge per split. Also
/// returns the split index of every edge.
pub fn forest_from_splits(t: &Topology, lambda: &[f64]) -> (Forest, Vec<usize>) {
    let n = t.n_leaves();
    let splits = t.splits();
    let mut f = Forest::new(n);
    let mut index = Vec::with_capacity(lambda.len());
    for c in t.components() {
        if c.count_ones() < 2 {
            continue;
        }
        let root = c.trailing_zeros() as usize;
        let idx: Vec<usize> = (0..splits.len()).filter(|&i| splits[i].component() == c).collect();
        let clades: Vec<LeafSet> = idx.iter().map(|&i| splits[i].inner()).collect();
        let nodes: Vec<usize> = clades
            .iter()
            .map(|&cl| {
                if cl.count_ones() == 1 {
                    cl.trailing_zeros() as usize
                } else {
                    f.add_vertex()
                }
            })
            .collect();
        for (k, &i) in idx.iter().enumerate() {
            let cl = clades[k];
            let parent = (0..clades.len())
                .filter(|&j| clades[j] != cl && clades[j] & cl == cl)
                .min_by_key(|&j| clades[j].count_ones());
            let p = parent.map_or(root, |j| nodes[j]);
            f.add_edge(nodes[k], p, lambda[i]);
            index.push(i);
        }
    }
    (f, index)
}
