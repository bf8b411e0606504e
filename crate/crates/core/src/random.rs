//! Seeded generators for the property checks and the command-line oracles.
//!
//! Constants stay below [`CONST_BOUND`], so enumerating over `[0, 12)` sees
//! every distinction a generated set can make.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::finprime::{CertifiedSet, Multicell};
use crate::partition::FamilyId;
use crate::sumspace::SumSymbolicSet;
use crate::symcore::{Conjunct, Pred, SymbolicSet};

pub const CONST_BOUND: u64 = 8;

fn fnv1a(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// An independent stream for `(seed, label, index)`: same seed, different
/// streams per label and index.
pub fn rng_for(seed: u64, label: &str, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a(label) ^ index.rotate_left(32));
    rng
}

fn random_values<R: Rng>(rng: &mut R, max: usize) -> BTreeSet<u64> {
    let k = rng.gen_range(0..=max);
    (0..k).map(|_| rng.gen_range(0..CONST_BOUND)).collect()
}

pub fn random_pred<R: Rng>(rng: &mut R) -> Pred {
    let vals = random_values(rng, 3);
    if rng.gen_bool(0.5) {
        Pred::In(if vals.is_empty() {
            [rng.gen_range(0..CONST_BOUND)].into()
        } else {
            vals
        })
    } else {
        Pred::NotIn(vals)
    }
}

fn random_conjunct<R: Rng>(rng: &mut R, level: usize) -> Conjunct {
    let mut c = Conjunct::new();
    for k in 0..level {
        if rng.gen_bool(0.5) {
            c.insert(k, random_pred(rng));
        }
    }
    c
}

/// Up to three conjuncts, each constraining a random subset of coordinates.
pub fn random_set<R: Rng>(rng: &mut R, level: usize) -> SymbolicSet {
    let m = rng.gen_range(0..=3);
    let cs = (0..m).map(|_| random_conjunct(rng, level)).collect();
    SymbolicSet::new(level, cs).expect("coordinates in range")
}

/// A member of `Fin^level`: every conjunct pins some coordinate to a finite set.
pub fn random_small_set<R: Rng>(rng: &mut R, level: usize) -> SymbolicSet {
    let m = rng.gen_range(0..=3);
    let cs = (0..m)
        .map(|_| {
            let mut c = random_conjunct(rng, level);
            let k = rng.gen_range(0..level);
            let vals = random_values(rng, 2);
            c.insert(k, Pred::In(if vals.is_empty() { [0].into() } else { vals }));
            c
        })
        .collect();
    SymbolicSet::new(level, cs).expect("coordinates in range")
}

/// Explicit summands below 4 and a template with head width ≤ 1 and tail width ≤ 2.
pub fn random_sum_set<R: Rng>(rng: &mut R) -> SumSymbolicSet {
    let h = rng.gen_range(0..=1);
    let t = rng.gen_range(0..=2);
    let from = rng.gen_range(1..=4usize).max(h + t).max(1);
    let mut out = SumSymbolicSet::template(&random_set(rng, h), &random_set(rng, t), from).expect("valid template");
    if rng.gen_bool(0.3) {
        out = out
            .union(&SumSymbolicSet::template(&random_set(rng, h), &random_set(rng, t), from).expect("valid template"))
            .expect("union within caps");
    }
    for j in 1..from.min(4) {
        if rng.gen_bool(0.5) {
            out = out
                .with_summand(j, random_set(rng, j))
                .expect("summand below threshold");
        }
    }
    out
}

/// A sum set in `Fin_ω`: small on the tail from some index on, arbitrary on
/// finitely many summands.
pub fn random_finomega_member<R: Rng>(rng: &mut R) -> SumSymbolicSet {
    let i = rng.gen_range(1..=3);
    let p_small = random_small_set(rng, i);
    let mut out = SumSymbolicSet::tail_preimage(&p_small).expect("level >= 1");
    for j in 1..i {
        if rng.gen_bool(0.5) {
            out = out.with_summand(j, random_set(rng, j)).expect("low summand");
        }
    }
    out
}

fn random_tuple<R: Rng>(rng: &mut R, level: usize) -> Vec<u64> {
    (0..=level).map(|_| rng.gen_range(0..4)).collect()
}

/// Finite part, a couple of bundles and multicells, all at levels `≤ max_level`.
/// Bundles are small with probability `p_small`.
pub fn random_certified<R: Rng>(rng: &mut R, family: FamilyId, max_level: usize, p_small: f64) -> CertifiedSet {
    let finite = (0..rng.gen_range(0..4)).map(|_| rng.gen_range(0..64)).collect();
    let bundles = (0..rng.gen_range(0..=2))
        .map(|_| {
            let l = rng.gen_range(0..=max_level);
            let b = if rng.gen_bool(p_small) {
                random_small_set(rng, l + 1)
            } else {
                random_set(rng, l + 1)
            };
            (l, b)
        })
        .collect();
    let multicells = (0..rng.gen_range(0..=2))
        .map(|_| {
            let mut levels: Vec<usize> = (0..=max_level).collect();
            levels.shuffle(rng);
            let k = rng.gen_range(1..=levels.len());
            levels[..k]
                .iter()
                .map(|&l| (l, random_tuple(rng, l)))
                .collect::<Multicell>()
        })
        .collect();
    CertifiedSet::new(family, finite, bundles, multicells).expect("well-formed pieces")
}

/// Level ↦ tuple over `≤ levels` distinct levels below 4, entries `< 8`.
pub fn random_constraints<R: Rng>(rng: &mut R, levels: usize) -> BTreeMap<usize, Vec<u64>> {
    let mut all: Vec<usize> = (0..4).collect();
    all.shuffle(rng);
    let k = rng.gen_range(0..=levels.min(4));
    all[..k]
        .iter()
        .map(|&l| (l, (0..=l).map(|_| rng.gen_range(0..CONST_BOUND)).collect()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| rng_for(7, "x", 0).gen()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        let b: u64 = rng_for(7, "x", 1).gen();
        let c: u64 = rng_for(7, "y", 0).gen();
        assert_ne!(a[0], b);
        assert_ne!(a[0], c);
    }

    #[test]
    fn small_sets_are_small() {
        let mut rng = rng_for(1, "small", 0);
        for level in 1..=4 {
            for _ in 0..50 {
                assert!(random_small_set(&mut rng, level).fin_member().unwrap());
            }
        }
    }

    #[test]
    fn finomega_members_are_members() {
        let mut rng = rng_for(2, "fo", 0);
        for _ in 0..50 {
            let m = random_finomega_member(&mut rng);
            assert!(crate::sumspace::finomega_member(&m).unwrap().is_some());
        }
    }
}
