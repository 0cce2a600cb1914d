//! Minimum-weight vertex cover of a bipartite graph via max-flow.

use std::collections::VecDeque;

/// Minimum-weight vertex cover of the bipartite graph with left weights
/// `wl`, right weights `wr` and edges `edges[i]` listing the right vertices
/// adjacent to left vertex `i`. Returns `(weight, left cover, right cover)`.
pub fn min_vertex_cover(wl: &[f64], wr: &[f64], edges: &[Vec<usize>]) -> (f64, Vec<bool>, Vec<bool>) {
    let (nl, nr) = (wl.len(), wr.len());
    let (src, sink) = (nl + nr, nl + nr + 1);
    let n = nl + nr + 2;
    let mut cap = vec![vec![0.0f64; n]; n];
    for i in 0..nl {
        cap[src][i] = wl[i];
        for &j in &edges[i] {
            cap[i][nl + j] = f64::INFINITY;
        }
    }
    for j in 0..nr {
        cap[nl + j][sink] = wr[j];
    }
    // Edmonds-Karp on a dense residual matrix; the graphs here are tiny.
    let mut flow = 0.0;
    loop {
        let mut prev = vec![usize::MAX; n];
        prev[src] = src;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if prev[v] == usize::MAX && cap[u][v] > 0.0 {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[sink] == usize::MAX {
            break;
        }
        let mut push = f64::INFINITY;
        let mut v = sink;
        while v != src {
            push = push.min(cap[prev[v]][v]);
            v = prev[v];
        }
        let mut v = sink;
        while v != src {
            let u = prev[v];
            cap[u][v] -= push;
            cap[v][u] += push;
            v = u;
        }
        flow += push;
    }
    let mut seen = vec![false; n];
    seen[src] = true;
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        for v in 0..n {
            if !seen[v] && cap[u][v] > 0.0 {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    let left = (0..nl).map(|i| !seen[i]).collect();
    let right = (0..nr).map(|j| seen[nl + j]).collect();
    (flow, left, right)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn picks_the_lighter_side() {
        let (w, l, r) = min_vertex_cover(&[0.3, 0.7], &[0.5, 0.5], &[vec![0, 1], vec![1]]);
        assert!((w - 0.8).abs() < 1e-15);
        assert_eq!(l, vec![true, false]);
        assert_eq!(r, vec![false, true]);
    }

    #[test]
    fn empty_graph_needs_no_cover() {
        let (w, l, r) = min_vertex_cover(&[0.5], &[0.5], &[vec![]]);
        assert_eq!(w, 0.0);
        assert_eq!(l, vec![false]);
        assert_eq!(r, vec![false]);
    }
}
