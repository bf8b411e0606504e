//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the evaluation code under test; membership is recomputed from raw
//! conjunct lists.

#![allow(dead_code)]

use idealforge::symcore::{Conjunct, Pred};
use rand::Rng;

pub fn pred_holds(p: &Pred, v: u64) -> bool {
    match p {
        Pred::In(f) => f.contains(&v),
        Pred::NotIn(f) => !f.contains(&v),
    }
}

pub fn raw_contains(conjuncts: &[Conjunct], p: &[u64]) -> bool {
    conjuncts.iter().any(|c| c.iter().all(|(&k, pr)| pred_holds(pr, p[k])))
}

/// All points of `[0, bound)^level`, lexicographic.
pub fn grid(level: usize, bound: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..level {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..bound).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

/// A conjunct list written without any canonicalisation: repeated
/// constraints on a coordinate are allowed to be contradictory or redundant
/// once intersected by the constructor.
pub fn raw_conjuncts<R: Rng>(rng: &mut R, level: usize, bound: u64) -> Vec<Conjunct> {
    (0..rng.gen_range(0..=3))
        .map(|_| {
            let mut c = Conjunct::new();
            for k in 0..level {
                if rng.gen_bool(0.5) {
                    let vals: std::collections::BTreeSet<u64> =
                        (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(0..bound)).collect();
                    c.insert(
                        k,
                        if rng.gen_bool(0.5) {
                            Pred::In(vals)
                        } else {
                            Pred::NotIn(vals)
                        },
                    );
                }
            }
            c
        })
        .collect()
}

/// Largest constant mentioned by a raw conjunct list.
pub fn raw_max_constant(conjuncts: &[Conjunct]) -> u64 {
    conjuncts
        .iter()
        .flat_map(|c| c.values())
        .flat_map(|p| match p {
            Pred::In(f) | Pred::NotIn(f) => f.iter().copied(),
        })
        .max()
        .unwrap_or(0)
}
