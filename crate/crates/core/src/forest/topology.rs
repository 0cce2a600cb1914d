use nalgebra::DMatrix;

use super::split::{full_set, leaves, LeafSet, Split, MAX_LEAVES};
use crate::error::{Error, Result};

/// Compatible set of splits on leaves `0..n`, sorted pendant-first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Topology {
    n: usize,
    splits: Vec<Split>,
}

impl Topology {
    pub fn new(n: usize, mut splits: Vec<Split>) -> Result<Topology> {
        if n == 0 || n > MAX_LEAVES {
            return Err(Error::arg(format!("leaf count {n} outside 1..={MAX_LEAVES}")));
        }
        let all = full_set(n);
        splits.sort();
        for (i, s) in splits.iter().enumerate() {
            if s.component() & !all != 0 {
                return Err(Error::InvalidForest(format!("split {s} uses a leaf beyond {n}")));
            }
            if i > 0 && splits[i - 1] == *s {
                return Err(Error::InvalidForest(format!("split {s} appears twice")));
            }
            for t in &splits[..i] {
                if !s.compatible(t) {
                    return Err(Error::InvalidForest(format!("splits {s} and {t} are incompatible")));
                }
            }
        }
        if n >= 2 && splits.len() > 2 * n - 3 {
            return Err(Error::InvalidForest("too many splits".into()));
        }
        Ok(Topology { n, splits })
    }

    pub fn n_leaves(&self) -> usize {
        self.n
    }

    pub fn splits(&self) -> &[Split] {
        &self.splits
    }

    pub fn len(&self) -> usize {
        self.splits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.splits.is_empty()
    }

    pub fn index_of(&self, s: &Split) -> Option<usize> {
        self.splits.binary_search(s).ok()
    }

    /// Indices of splits that are not pendant.
    pub fn internal_indices(&self) -> Vec<usize> {
        (0..self.splits.len())
            .filter(|&i| !self.splits[i].is_pendant())
            .collect()
    }

    /// Connected components as leaf sets, ordered by lowest leaf. Leaves not
    /// touched by any split are singletons.
    pub fn components(&self) -> Vec<LeafSet> {
        let mut comps: Vec<LeafSet> = Vec::new();
        for s in &self.splits {
            let c = s.component();
            if !comps.contains(&c) {
                comps.push(c);
            }
        }
        let covered = comps.iter().fold(0, |a, c| a | c);
        for u in leaves(full_set(self.n) & !covered) {
            comps.push(1 << u);
        }
        comps.sort_by_key(|c| c.trailing_zeros());
        comps
    }

    /// A single tree containing all `2n - 3` possible splits.
    pub fn is_fully_resolved(&self) -> bool {
        self.n >= 2
            && self.splits.len() == 2 * self.n - 3
            && self.splits.iter().all(|s| s.component() == full_set(self.n))
    }

    /// `σ^e` for every split: `σ_uv = 1` when the edge lies on the path from
    /// leaf `u` to leaf `v`.
    pub fn split_matrices(&self) -> Vec<DMatrix<f64>> {
        self.splits
            .iter()
            .map(|s| DMatrix::from_fn(self.n, self.n, |u, v| f64::from(u8::from(s.separates(u, v)))))
            .collect()
    }

    /// Replaces split `i` by `s`, keeping the order of the other splits'
    /// parameters. Returns the permutation applied: `perm[new] = old`.
    pub(crate) fn replace(&self, i: usize, s: Split) -> (Topology, Vec<usize>) {
        let mut tagged: Vec<(Split, usize)> = self.splits.iter().copied().zip(0..).collect();
        tagged[i].0 = s;
        tagged.sort_by(|a, b| a.0.cmp(&b.0));
        let perm = tagged.iter().map(|t| t.1).collect();
        let t = Topology {
            n: self.n,
            splits: tagged.into_iter().map(|t| t.0).collect(),
        };
        (t, perm)
    }
}

impl std::fmt::Debug for Topology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Topology(n={}, {:?})", self.n, self.splits)
    }
}
