//! Forests, splits, topologies and canonical walds.

mod graph;
mod newick;
mod nni;
mod params;
mod random;
mod split;
mod topology;
mod wald;

pub use graph::{canonicalize, edge_splits, Edge, Forest};
pub use newick::{parse_newick, parse_newick_with, to_newick, NewickOptions};
pub use nni::{nni_neighbors, nni_splits, nni_wald};
pub(crate) use params::{lam, len};
pub use params::{lambda_from_length, length_from_lambda, mu_from_lambda, Param};
pub use random::{
    all_topologies, random_topology, random_tree_forest, random_wald, random_wald_with, RandomWald, TopologyPolicy,
};
pub use split::{fmt_set, full_set, leaves, LeafSet, Split, MAX_LEAVES};
pub use topology::Topology;
pub use wald::{forest_from_splits, Wald};

/// Parses Newick text and canonicalizes it in one step.
pub fn wald_from_newick(text: &str, param: Param) -> crate::Result<Wald> {
    canonicalize(&parse_newick_with(text, NewickOptions { param, n_leaves: None })?)
}
