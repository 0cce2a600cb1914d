use super::split::{LeafSet, Split};
use super::topology::Topology;
use super::wald::Wald;
use crate::error::{Error, Result};

/// The four subtrees around an internal split `A1 ∪ A2 | B1 ∪ B2`.
fn quartet(t: &Topology, s: &Split) -> Result<[LeafSet; 4]> {
    let sides: Vec<LeafSet> = t
        .splits()
        .iter()
        .filter(|x| x.component() == s.component())
        .flat_map(|x| [x.inner(), x.outer()])
        .collect();
    let halves = |side: LeafSet| -> Vec<LeafSet> {
        let inside: Vec<LeafSet> = sides.iter().copied().filter(|&d| d != side && d & side == d).collect();
        let mut max: Vec<LeafSet> = inside
            .iter()
            .copied()
            .filter(|&d| !inside.iter().any(|&e| e != d && e & d == d))
            .collect();
        max.sort_by_key(|d| d.trailing_zeros());
        max.dedup();
        max
    };
    let (a, b) = (halves(s.inner()), halves(s.outer()));
    if a.len() != 2 || b.len() != 2 || a[0] | a[1] != s.inner() || b[0] | b[1] != s.outer() {
        return Err(Error::arg(format!(
            "split {s} does not sit between two resolved vertices"
        )));
    }
    Ok([a[0], a[1], b[0], b[1]])
}

/// The two splits that can replace internal split `s` by a nearest neighbour
/// interchange, in a fixed order.
pub fn nni_splits(t: &Topology, s: &Split) -> Result<(Split, Split)> {
    if s.is_pendant() {
        return Err(Error::arg(format!("split {s} is pendant")));
    }
    if t.index_of(s).is_none() {
        return Err(Error::arg(format!("split {s} is not in the topology")));
    }
    let [a1, _, b1, b2] = quartet(t, s)?;
    let c = s.component();
    let x = Split::new(a1 | b1, c).unwrap();
    let y = Split::new(a1 | b2, c).unwrap();
    Ok(if x < y { (x, y) } else { (y, x) })
}

/// The two topologies adjacent to `t` across the boundary where `s` shrinks
/// to zero.
pub fn nni_neighbors(t: &Topology, s: &Split) -> Result<(Topology, Topology)> {
    let i = t
        .index_of(s)
        .ok_or_else(|| Error::arg(format!("split {s} is not in the topology")))?;
    let (x, y) = nni_splits(t, s)?;
    Ok((t.replace(i, x).0, t.replace(i, y).0))
}

/// Moves a wald across the boundary of internal split `i`, giving the new
/// split weight `lambda_new` and keeping every other weight.
pub fn nni_wald(w: &Wald, i: usize, replacement: Split, lambda_new: f64) -> Result<Wald> {
    let (t, perm) = w.topology().replace(i, replacement);
    let lambda = perm
        .iter()
        .map(|&old| if old == i { lambda_new } else { w.lambda()[old] })
        .collect();
    Wald::new(t, lambda)
}
