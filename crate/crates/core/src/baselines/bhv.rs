//! Geodesic distance in BHV tree space, pendant edges included as a
//! Euclidean factor.

use super::maxflow::min_vertex_cover;
use crate::error::{Error, Result};
use crate::forest::{Split, Wald};

/// Edges of a tree: `(split, length)` pairs, all finite.
fn edges(w: &Wald) -> Result<Vec<(Split, f64)>> {
    if w.components().len() != 1 {
        return Err(Error::arg("BHV distance needs trees, not forests"));
    }
    let lengths = w.lengths();
    if lengths.iter().any(|l| l.is_infinite()) {
        return Err(Error::arg("BHV distance needs finite edge lengths"));
    }
    Ok(w.splits().iter().copied().zip(lengths).collect())
}

fn norm(v: &[(Split, f64)]) -> f64 {
    v.iter().map(|e| e.1 * e.1).sum::<f64>().sqrt()
}

/// One pair of blocks of the geodesic support: the edges of the first tree
/// dropped together and the edges of the second tree then added.
#[derive(Clone, Debug)]
pub struct SupportBlock {
    pub dropped: Vec<(Split, f64)>,
    pub added: Vec<(Split, f64)>,
}

/// Result of the geodesic computation.
#[derive(Clone, Debug)]
pub struct BhvGeodesic {
    pub distance: f64,
    /// Squared contribution of splits shared by both trees, or present in
    /// one tree and compatible with the whole other tree.
    pub common_sq: f64,
    pub support: Vec<SupportBlock>,
}

/// Refines the support until every block passes the vertex cover test.
fn refine(a: Vec<(Split, f64)>, b: Vec<(Split, f64)>) -> Vec<SupportBlock> {
    let mut support = vec![SupportBlock { dropped: a, added: b }];
    let mut i = 0;
    while i < support.len() {
        let SupportBlock { dropped, added } = &support[i];
        let (na, nb) = (norm(dropped).powi(2), norm(added).powi(2));
        let wl: Vec<f64> = dropped.iter().map(|e| e.1 * e.1 / na).collect();
        let wr: Vec<f64> = added.iter().map(|e| e.1 * e.1 / nb).collect();
        let adj: Vec<Vec<usize>> = dropped
            .iter()
            .map(|x| (0..added.len()).filter(|&j| !x.0.compatible(&added[j].0)).collect())
            .collect();
        let (weight, cover_l, cover_r) = min_vertex_cover(&wl, &wr, &adj);
        if weight >= 1.0 - 1e-12 {
            i += 1;
            continue;
        }
        let pick = |v: &[(Split, f64)], mask: &[bool], keep: bool| -> Vec<(Split, f64)> {
            v.iter()
                .zip(mask)
                .filter(|(_, &m)| m == keep)
                .map(|(e, _)| *e)
                .collect()
        };
        // Cover C1 ∪ D2: drop C1 and add D1 first, then drop C2 and add D2.
        let first = SupportBlock {
            dropped: pick(dropped, &cover_l, true),
            added: pick(added, &cover_r, false),
        };
        let second = SupportBlock {
            dropped: pick(dropped, &cover_l, false),
            added: pick(added, &cover_r, true),
        };
        support.splice(i..=i, [first, second]);
    }
    support
}

/// Geodesic between two trees on the same leaves: shared splits (pendant
/// ones included) move linearly, the remaining internal splits follow the
/// support found by repeated max-flow refinement.
pub fn bhv_geodesic(w1: &Wald, w2: &Wald) -> Result<BhvGeodesic> {
    if w1.n_leaves() != w2.n_leaves() {
        return Err(Error::arg("trees have different leaf counts"));
    }
    let (e1, e2) = (edges(w1)?, edges(w2)?);
    let mut common_sq = 0.0;
    let mut a = Vec::new();
    for &(s, l) in &e1 {
        match e2.iter().find(|e| e.0 == s) {
            Some(&(_, m)) => common_sq += (l - m).powi(2),
            None if e2.iter().all(|e| e.0.compatible(&s)) => common_sq += l * l,
            None => a.push((s, l)),
        }
    }
    let mut b = Vec::new();
    for &(s, l) in &e2 {
        if e1.iter().any(|e| e.0 == s) {
            continue;
        }
        if e1.iter().all(|e| e.0.compatible(&s)) {
            common_sq += l * l;
        } else {
            b.push((s, l));
        }
    }
    // Zero-length edges are not really there and only confuse the ratios.
    a.retain(|e| e.1 > 0.0);
    b.retain(|e| e.1 > 0.0);
    let support = match (a.is_empty(), b.is_empty()) {
        (false, false) => refine(a, b),
        (true, true) => Vec::new(),
        _ => {
            common_sq += norm(&a).powi(2) + norm(&b).powi(2);
            Vec::new()
        }
    };
    let path_sq: f64 = support
        .iter()
        .map(|p| (norm(&p.dropped) + norm(&p.added)).powi(2))
        .sum();
    Ok(BhvGeodesic {
        distance: (common_sq + path_sq).sqrt(),
        common_sq,
        support,
    })
}

pub fn bhv_distance(w1: &Wald, w2: &Wald) -> Result<f64> {
    Ok(bhv_geodesic(w1, w2)?.distance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{wald_from_newick, Param};

    fn w(s: &str) -> Wald {
        wald_from_newick(s, Param::Length).unwrap()
    }

    #[test]
    fn same_topology_is_euclidean() {
        let a = w("((1:0.3,2:0.4):0.5,(3:0.2,4:0.3):0.4);");
        let b = w("((1:0.1,2:0.4):0.2,(3:0.2,4:0.7):0.1);");
        let d = bhv_distance(&a, &b).unwrap();
        // The two internal edges of the rooted string are one unrooted edge.
        let expect = (0.2f64.powi(2) + 0.6f64.powi(2) + 0.4f64.powi(2)).sqrt();
        assert!((d - expect).abs() < 1e-12, "{d} vs {expect}");
    }

    #[test]
    fn quartet_crossing_goes_through_the_star() {
        let a = w("((1:1,2:1):0.6,(3:1,4:1));");
        let b = w("((1:1,3:1):0.8,(2:1,4:1));");
        assert!((bhv_distance(&a, &b).unwrap() - 1.4).abs() < 1e-12);
    }
}
