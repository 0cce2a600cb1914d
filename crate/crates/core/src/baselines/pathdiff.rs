use crate::error::{Error, Result};
use crate::forest::Wald;

/// `sqrt(Σ_{u<v} (ℓ_uv - ℓ'_uv)²)` over unordered leaf pairs, where `ℓ_uv` is
/// the path length between leaves. Summing over ordered pairs instead gives
/// `√2` times this value.
pub fn path_difference_distance(w1: &Wald, w2: &Wald) -> Result<f64> {
    let n = w1.n_leaves();
    if n != w2.n_leaves() {
        return Err(Error::arg("trees have different leaf counts"));
    }
    let (p, q) = (w1.path_length_matrix(), w2.path_length_matrix());
    let mut sum = 0.0;
    for u in 0..n {
        for v in u + 1..n {
            if p[(u, v)].is_infinite() || q[(u, v)].is_infinite() {
                return Err(Error::arg("path difference needs finite path lengths"));
            }
            sum += (p[(u, v)] - q[(u, v)]).powi(2);
        }
    }
    Ok(sum.sqrt())
}
