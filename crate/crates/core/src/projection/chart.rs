//! Edge-length coordinates on a maximal orthant, with edges pinned at
//! infinite length to represent forests.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::forest::{canonicalize, edge_splits, forest_from_splits, lam, len, Edge, Topology, Wald};
use crate::spd::SpdMatrix;

/// Length given to the edges introduced when a polytomy is resolved. Zero
/// keeps the chart's covariance equal to the wald's.
pub const RESOLVE_LENGTH: f64 = 0.0;

/// A fully resolved tree topology on all leaves with one length per split.
///
/// Splits with `ℓ = ∞` are fixed: they stand for edges that are absent from
/// the forest. Free splits whose leaf pairs are all separated by a fixed split
/// anyway have no influence on the covariance and are fixed as well.
#[derive(Clone, Debug)]
pub struct Chart {
    topology: Topology,
    ell: Vec<f64>,
    fixed: Vec<bool>,
    sigma: Vec<DMatrix<f64>>,
}

impl Chart {
    pub fn new(topology: Topology, mut ell: Vec<f64>) -> Result<Chart> {
        if !topology.is_fully_resolved() {
            return Err(Error::arg("a chart needs a fully resolved tree topology"));
        }
        if ell.len() != topology.len() {
            return Err(Error::arg("one length per split is required"));
        }
        if ell.iter().any(|l| l.is_nan() || *l < 0.0) {
            return Err(Error::arg("edge lengths must be non-negative"));
        }
        let sigma = topology.split_matrices();
        let mut fixed: Vec<bool> = ell.iter().map(|l| l.is_infinite()).collect();
        for i in 0..ell.len() {
            if fixed[i] {
                continue;
            }
            let n = topology.n_leaves();
            let inert = (0..n).all(|u| {
                (u + 1..n)
                    .all(|v| sigma[i][(u, v)] == 0.0 || (0..ell.len()).any(|j| fixed[j] && sigma[j][(u, v)] == 1.0))
            });
            if inert {
                fixed[i] = true;
                ell[i] = f64::INFINITY;
            }
        }
        Ok(Chart {
            topology,
            ell,
            fixed,
            sigma,
        })
    }

    /// Resolves `w` into a chart. Components are joined through infinite
    /// edges at a common hub; every vertex of degree above three is split by
    /// new edges of length [`RESOLVE_LENGTH`], so the chart may start on an
    /// orthant boundary.
    pub fn from_wald(w: &Wald) -> Result<Chart> {
        let n = w.n_leaves();
        if n < 2 {
            return Err(Error::arg("a chart needs at least two leaves"));
        }
        let mut f = w.to_forest();
        let comps = w.components();
        if comps.len() > 1 {
            let adj = f.adjacency();
            let mut anchors = Vec::with_capacity(comps.len());
            for c in comps {
                let r = c.trailing_zeros() as usize;
                if c.count_ones() == 1 {
                    anchors.push(r);
                    continue;
                }
                let (y, e) = adj[r][0];
                if y < n {
                    // Two leaves joined directly: subdivide so the hub has a
                    // vertex to attach to.
                    let half = lam(len(f.edges()[e].lambda) / 2.0);
                    let x = f.add_vertex();
                    f.edges_mut()[e] = Edge {
                        a: r,
                        b: x,
                        lambda: half,
                    };
                    f.add_edge(x, y, half);
                    anchors.push(x);
                } else {
                    anchors.push(y);
                }
            }
            if anchors.len() == 2 {
                f.add_edge(anchors[0], anchors[1], 1.0);
            } else {
                let hub = f.add_vertex();
                for a in anchors {
                    f.add_edge(a, hub, 1.0);
                }
            }
        }
        loop {
            let adj = f.adjacency();
            let Some(v) = (n..adj.len()).find(|&v| adj[v].len() > 3) else {
                break;
            };
            // Pairing two infinite edges makes the new edge inert.
            let mut incident = adj[v].clone();
            incident.sort_by_key(|&(_, e)| f.edges()[e].lambda < 1.0);
            let x = f.add_vertex();
            for &(_, e) in &incident[..2] {
                let edge = &mut f.edges_mut()[e];
                if edge.a == v {
                    edge.a = x;
                } else {
                    edge.b = x;
                }
            }
            f.add_edge(v, x, lam(RESOLVE_LENGTH));
        }
        let splits = edge_splits(&f)?;
        let topology = Topology::new(n, splits.clone())?;
        let mut ell = vec![0.0; splits.len()];
        for (s, e) in splits.iter().zip(f.edges()) {
            let i = topology.index_of(s).expect("split of its own forest");
            ell[i] = if e.lambda >= 1.0 { f64::INFINITY } else { len(e.lambda) };
        }
        Chart::new(topology, ell)
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn ell(&self) -> &[f64] {
        &self.ell
    }

    pub fn fixed(&self) -> &[bool] {
        &self.fixed
    }

    pub fn n_leaves(&self) -> usize {
        self.topology.n_leaves()
    }

    /// Same topology, new lengths for the free splits.
    pub fn with_ell(&self, ell: Vec<f64>) -> Chart {
        debug_assert_eq!(ell.len(), self.ell.len());
        let ell = ell
            .into_iter()
            .zip(&self.fixed)
            .map(|(l, &fx)| if fx { f64::INFINITY } else { l })
            .collect();
        Chart { ell, ..self.clone() }
    }

    /// `S_uv = exp(-Σ ℓ_e)` over the splits separating `u` and `v`, zero
    /// across a fixed split.
    pub fn covariance(&self) -> DMatrix<f64> {
        let n = self.n_leaves();
        let mut s = DMatrix::from_element(n, n, 1.0);
        for (sig, &l) in self.sigma.iter().zip(&self.ell) {
            let m = (-l).exp();
            for u in 0..n {
                for v in 0..n {
                    if sig[(u, v)] == 1.0 {
                        s[(u, v)] *= m;
                    }
                }
            }
        }
        s
    }

    pub fn spd(&self) -> Result<SpdMatrix> {
        SpdMatrix::new(self.covariance())
    }

    /// `∂S/∂ℓ_i = -S ∘ σ^i`, zero for fixed splits.
    pub fn directions(&self, s: &DMatrix<f64>) -> Vec<DMatrix<f64>> {
        let n = self.n_leaves();
        self.sigma
            .iter()
            .zip(&self.fixed)
            .map(|(sig, &fx)| {
                if fx {
                    DMatrix::zeros(n, n)
                } else {
                    -s.component_mul(sig)
                }
            })
            .collect()
    }

    /// The wald this chart describes.
    pub fn to_wald(&self) -> Result<Wald> {
        let lambda: Vec<f64> = self
            .ell
            .iter()
            .map(|&l| if l.is_infinite() { 1.0 } else { lam(l) })
            .collect();
        canonicalize(&forest_from_splits(&self.topology, &lambda).0)
    }

    /// Chart after replacing split `i` by `replacement` with length `l`.
    pub(crate) fn cross(&self, i: usize, replacement: crate::forest::Split, l: f64) -> Result<Chart> {
        let (t, perm) = self.topology.replace(i, replacement);
        let ell = perm
            .iter()
            .map(|&old| if old == i { l } else { self.ell[old] })
            .collect();
        Chart::new(t, ell)
    }
}
