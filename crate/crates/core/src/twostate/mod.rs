//! The symmetric two-state substitution model on walds: character
//! probabilities by pruning, their derivatives, the Fisher metric and
//! f-divergence based distances.

mod distribution;
mod divergence;
mod fisher;
mod pruning;
mod simulate;

pub use distribution::{
    char_prob, char_prob_grad, char_prob_hess, character_bits, distribution_of, forest_distribution, full_distribution,
    full_distribution_capped, CharacterDistribution, DEFAULT_CAP,
};
pub use divergence::{distribution_distance, extrinsic_distance, f_divergence, FDivergence, ProbMetric};
pub use fisher::{edge_guard, fisher_info, TwoStateMetric, LENGTH_CAP};
pub use pruning::Pruner;
pub use simulate::simulate_characters;
