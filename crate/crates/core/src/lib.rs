//! Wald space of phylogenetic forests.
//!
//! Forests on leaves `1..=N` are represented canonically as [`Wald`] values: a
//! compatible set of splits with an edge weight `λ ∈ [0, 1]` per split, where
//! `λ = 1 - exp(-ℓ)` for edge length `ℓ`. Two information geometries are built
//! on top: the Fisher metric of the symmetric two-state substitution model
//! ([`twostate`]) and the affine-invariant geometry of the leaf covariance
//! matrices of an Ornstein-Uhlenbeck process ([`spd`]). The [`riemann`] module
//! integrates geodesics for either, [`projection`] approximates geodesics
//! between arbitrary walds by projecting ambient SPD geodesics, and
//! [`baselines`] provides BHV and path-difference distances for comparison.
//!
//! Leaves are numbered from 1 in Newick text and from 0 everywhere in the API.

pub mod baselines;
pub mod error;
pub mod forest;
pub mod io;
pub mod projection;
pub mod riemann;
pub mod spd;
pub mod twostate;

pub use error::{Error, ErrorKind, Result};
pub use forest::{
    canonicalize, lambda_from_length, length_from_lambda, mu_from_lambda, parse_newick, parse_newick_with, random_wald,
    to_newick, Forest, Param, RandomWald, Split, Topology, Wald,
};
pub use riemann::{GeodesicPath, MetricProvider, Termination};
pub use spd::SpdMatrix;
