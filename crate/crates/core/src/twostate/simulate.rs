use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::forest::Wald;

/// Draws `count` i.i.d. characters: each component is rooted at its lowest
/// leaf, the root letter is a fair coin, and each edge flips the letter with
/// probability `λ/2`.
pub fn simulate_characters(w: &Wald, count: usize, seed: u64) -> Vec<u64> {
    let f = w.to_forest();
    let adj = f.adjacency();
    let nv = f.n_vertices();
    // Preorder traversal with the weight of the edge into each vertex.
    let mut plan: Vec<(usize, usize, f64)> = Vec::new();
    let mut roots = Vec::new();
    let mut seen = vec![false; nv];
    for start in 0..nv {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        roots.push(start);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &(u, e) in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    plan.push((u, v, f.edges()[e].lambda));
                    stack.push(u);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = vec![false; nv];
    (0..count)
        .map(|_| {
            for &r in &roots {
                state[r] = rng.random_bool(0.5);
            }
            for &(v, parent, lambda) in &plan {
                state[v] = state[parent] ^ rng.random_bool(0.5 * lambda);
            }
            (0..w.n_leaves()).fold(0u64, |acc, u| acc | (u64::from(state[u]) << u))
        })
        .collect()
}
