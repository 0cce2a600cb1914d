//! Reference implementations used as oracles by the integration tests. They
//! favour obviousness over speed.
#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use waldspace::forest::{random_tree_forest, Split};
use waldspace::{canonicalize, Param, Wald};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random fully resolved tree with lengths uniform on `[lo, hi]`.
pub fn random_tree(r: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Wald {
    let mut f = random_tree_forest(n, r);
    for e in f.edges_mut() {
        e.lambda = 1.0 - (-r.random_range(lo..hi)).exp();
    }
    canonicalize(&f).unwrap()
}

/// `p(s)` by summing over every assignment of states to unlabelled vertices.
pub fn brute_char_prob(w: &Wald, s: u64) -> f64 {
    let f = w.to_forest();
    let n = w.n_leaves();
    let inner = f.n_vertices() - n;
    let mut total = 0.0;
    for assign in 0..(1u64 << inner) {
        let state = |v: usize| if v < n { (s >> v) & 1 } else { (assign >> (v - n)) & 1 };
        let mut p = 1.0;
        for e in f.edges() {
            let same = state(e.a) == state(e.b);
            p *= if same { 1.0 - e.lambda / 2.0 } else { e.lambda / 2.0 };
        }
        total += p;
    }
    total * 0.5f64.powi(w.components().len() as i32)
}

/// `((1:p,2:p):a,3:p,(4:p,5:p):b)` in lengths, with the indices of the
/// `{1,2}` and `{4,5}` splits.
pub fn five_leaf_config(p: f64, a: f64, b: f64) -> (Wald, usize, usize) {
    let w =
        waldspace::forest::wald_from_newick(&format!("((1:{p},2:{p}):{a},3:{p},(4:{p},5:{p}):{b});"), Param::Length)
            .unwrap();
    let t = w.topology();
    let i12 = t.index_of(&Split::of_tree(0b00011, 5).unwrap()).unwrap();
    let i45 = t.index_of(&Split::of_tree(0b11000, 5).unwrap()).unwrap();
    (w, i12, i45)
}

/// Random SPD matrix with eigenvalues in `[lo, hi]`.
pub fn random_spd(r: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| r.random_range(-1.0..1.0));
    let q = a.qr().q();
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |_, _| r.random_range(lo..hi)));
    let m = &q * d * q.transpose();
    (&m + m.transpose()) * 0.5
}

/// BHV distance by brute force over every ordered support satisfying the
/// compatibility and ratio conditions, blocks empty on one side allowed.
pub fn bhv_oracle(w1: &Wald, w2: &Wald) -> f64 {
    let e1: Vec<(Split, f64)> = w1.splits().iter().copied().zip(w1.lengths()).collect();
    let e2: Vec<(Split, f64)> = w2.splits().iter().copied().zip(w2.lengths()).collect();
    let mut common = 0.0;
    for (s, l) in &e1 {
        if let Some((_, m)) = e2.iter().find(|e| e.0 == *s) {
            common += (l - m).powi(2);
        }
    }
    let a: Vec<(Split, f64)> = e1.iter().copied().filter(|e| !e2.iter().any(|x| x.0 == e.0)).collect();
    let b: Vec<(Split, f64)> = e2.iter().copied().filter(|e| !e1.iter().any(|x| x.0 == e.0)).collect();
    let m = a.len() + b.len();
    if m == 0 {
        return common.sqrt();
    }
    let mut best = f64::INFINITY;
    for k in 1..=m {
        let total = k.pow(m as u32);
        for code in 0..total {
            let mut c = code;
            let blocks: Vec<usize> = (0..m)
                .map(|_| {
                    let d = c % k;
                    c /= k;
                    d
                })
                .collect();
            let (ba, bb) = blocks.split_at(a.len());
            let mut na = vec![0.0; k];
            let mut nb = vec![0.0; k];
            for (i, e) in a.iter().enumerate() {
                na[ba[i]] += e.1 * e.1;
            }
            for (j, e) in b.iter().enumerate() {
                nb[bb[j]] += e.1 * e.1;
            }
            if (0..k).any(|i| na[i] == 0.0 && nb[i] == 0.0 && !block_used(ba, bb, i)) {
                continue;
            }
            let p1 = a.iter().enumerate().all(|(i, x)| {
                b.iter()
                    .enumerate()
                    .all(|(j, y)| x.0.compatible(&y.0) || ba[i] <= bb[j])
            });
            if !p1 {
                continue;
            }
            let ratio = |i: usize| {
                if nb[i] == 0.0 {
                    f64::INFINITY
                } else {
                    (na[i] / nb[i]).sqrt()
                }
            };
            if (1..k).any(|i| ratio(i - 1) > ratio(i)) {
                continue;
            }
            let len: f64 = (0..k).map(|i| (na[i].sqrt() + nb[i].sqrt()).powi(2)).sum();
            best = best.min((common + len).sqrt());
        }
    }
    best
}

fn block_used(ba: &[usize], bb: &[usize], i: usize) -> bool {
    ba.contains(&i) || bb.contains(&i)
}

/// Random wald from a resolved tree whose edges get weight exactly 1 with
/// probability `p_one` and a uniform weight in `[0.02, 0.98]` otherwise.
pub fn random_mixed(seed: u64, n: usize, p_one: f64) -> Wald {
    let mut r = rng(seed);
    let mut f = random_tree_forest(n, &mut r);
    for e in f.edges_mut() {
        e.lambda = if r.random::<f64>() < p_one {
            1.0
        } else {
            r.random_range(0.02..0.98)
        };
    }
    canonicalize(&f).unwrap()
}

/// Random tree of the given size with lengths in `[lo, hi]`, from a seed.
pub fn seeded_tree(seed: u64, n: usize, lo: f64, hi: f64) -> Wald {
    random_tree(&mut rng(seed), n, lo, hi)
}
