use std::collections::BTreeSet;

use idealforge::certificate::Certificate;
use idealforge::finprime::{
    decomposition_certificate, finprime_member, jn_member, phi, split_small, upfamily_member, validate_decomposition,
    validate_rectangle, BlockFormula, CertifiedSet, Expr,
};
use idealforge::partition::{cell_of, Constraints, FamilyId, IntersectionIter};
use idealforge::random::{random_certified, random_set, random_small_set, rng_for};
use idealforge::symcore::{Pred, SymbolicSet};
use proptest::prelude::*;
use rand::Rng;

fn fam(seed: u64) -> FamilyId {
    if seed.is_multiple_of(2) {
        FamilyId::A
    } else {
        FamilyId::B
    }
}

fn f2() -> SymbolicSet {
    SymbolicSet::atom(2, 0, Pred::not_in([0])).unwrap()
}

/// Membership from the generating family alone: multicells sit inside a
/// single cell, finite parts do not matter, and a bundle `⋃_{s∈B} X_s` is in
/// the ideal exactly when `B` is small at its level.
fn generator_oracle(a: &CertifiedSet) -> bool {
    a.bundles().values().all(|b| b.fin_member().unwrap())
}

/// `A ∩ X_{s_0} ∩ … ∩ X_{s_n}` is finite, read off the block itself. With
/// every piece of `A` at levels `≤ n`, a block is either inside a piece or
/// disjoint from it, so one element past the finite part decides.
fn block_meets_finitely(a: &CertifiedSet, stack: &[Vec<u64>]) -> bool {
    let c: Constraints = stack.iter().cloned().enumerate().collect();
    let probe = IntersectionIter::new(a.family(), c)
        .unwrap()
        .find(|m| !a.finite_part().contains(m))
        .unwrap();
    !a.certified_contains(probe)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn hierarchy_is_monotone_and_stabilises(seed in any::<u64>()) {
        let mut rng = rng_for(seed, "jn", 0);
        let a = random_certified(&mut rng, fam(seed), 2, 0.6);
        let verdicts: Vec<bool> = (0..=a.maxlevel() + 3).map(|n| jn_member(&a, n).unwrap()).collect();
        for w in verdicts.windows(2) {
            prop_assert!(!w[0] || w[1], "J_n not monotone: {:?}", verdicts);
        }
        let stable = verdicts[a.maxlevel()];
        prop_assert!(verdicts[a.maxlevel()..].iter().all(|&v| v == stable));
        let cert = finprime_member(&a).unwrap();
        prop_assert_eq!(cert.is_some(), verdicts.iter().any(|&v| v));
        prop_assert_eq!(cert.is_some(), generator_oracle(&a));
        if let Some(Certificate::Rectangle { level, smalls }) = cert {
            prop_assert!(validate_rectangle(&a, level, &smalls).unwrap());
            let Certificate::Decomposition { generators, remainder } = decomposition_certificate(&a).unwrap() else {
                unreachable!()
            };
            prop_assert!(validate_decomposition(&a, &generators, &remainder, 10_000).unwrap());
        } else {
            prop_assert!(decomposition_certificate(&a).is_err());
        }
    }

    #[test]
    fn phi_matches_block_finiteness(seed in any::<u64>()) {
        let mut rng = rng_for(seed, "phi", 0);
        let a = random_certified(&mut rng, fam(seed), 1, 0.5);
        let n = a.maxlevel();
        let formula = phi(&a, n).unwrap();
        for _ in 0..8 {
            let stack: Vec<Vec<u64>> = (0..=n).map(|l| (0..=l).map(|_| rng.gen_range(0..4)).collect()).collect();
            prop_assert_eq!(formula.eval(&stack).unwrap(), block_meets_finitely(&a, &stack), "stack {:?}", stack);
        }
    }

    #[test]
    fn ideal_axioms(seed in any::<u64>()) {
        let mut rng = rng_for(seed, "fp-ideal", 0);
        let family = fam(seed);
        let a = random_certified(&mut rng, family, 2, 0.7);
        let b = random_certified(&mut rng, family, 2, 0.7);
        let (ma, mb) = (finprime_member(&a).unwrap().is_some(), finprime_member(&b).unwrap().is_some());
        if ma && mb {
            prop_assert!(finprime_member(&a.certified_union(&b).unwrap()).unwrap().is_some());
        }
        if ma {
            // shrink every bundle and drop a multicell
            let bundles = a
                .bundles()
                .iter()
                .map(|(&l, s)| (l, s.intersection(&random_set(&mut rng, l + 1)).unwrap()))
                .collect();
            let cells = a.multicells().iter().skip(1).cloned().collect();
            let sub = CertifiedSet::new(family, a.finite_part().clone(), bundles, cells).unwrap();
            prop_assert!(finprime_member(&sub).unwrap().is_some());
        }
    }

    #[test]
    fn split_covers_the_prefix(seed in any::<u64>(), n in 0usize..=2) {
        let mut rng = rng_for(seed, "split", 0);
        let family = fam(seed);
        let a = random_certified(&mut rng, family, 2, 0.5);
        let prefix = a.enumerate_below(2_000);
        let (c, d) = split_small(family, &prefix, n);
        let mut all: Vec<u64> = c.iter().chain(&d).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(&all, &prefix);
        // recompute the side of each element from the index comparison
        for &m in &prefix {
            let low: Vec<u64> = (0..n).flat_map(|l| cell_of(family, m, l)).collect();
            let top = cell_of(family, m, n);
            let in_c = interleave(&low) <= interleave(&top);
            prop_assert_eq!(c.contains(&m), in_c);
        }
    }
}

/// Bit interleaving of a tuple as a big-endian bit vector, compared
/// lexicographically after padding to a common length.
fn interleave(t: &[u64]) -> Vec<bool> {
    let d = t.len();
    if d == 0 {
        return vec![];
    }
    let mut bits = vec![false; 64 * d];
    for (r, &v) in t.iter().enumerate() {
        for b in 0..64 {
            bits[b * d + r] = v >> b & 1 == 1;
        }
    }
    while bits.last() == Some(&false) {
        bits.pop();
    }
    bits.reverse();
    let mut padded = vec![false; 64 * 4 - bits.len()];
    padded.extend(bits);
    padded
}

#[test]
fn containment_and_union_examples() {
    let a = CertifiedSet::bundle(FamilyId::A, 0, SymbolicSet::point(&[5])).unwrap();
    let m = (0..).find(|&m| cell_of(FamilyId::A, m, 0) == vec![5]).unwrap();
    assert!(a.certified_contains(m));
    let b = CertifiedSet::bundle(FamilyId::A, 0, SymbolicSet::point(&[6])).unwrap();
    let u = a.certified_union(&b).unwrap();
    assert_eq!(u.bundles().len(), 1);
    assert_eq!(u.bundles()[&0], SymbolicSet::atom(1, 0, Pred::in_set([5, 6])).unwrap());
    assert!(a
        .certified_union(&CertifiedSet::finite_set(FamilyId::B, BTreeSet::new()))
        .is_err());

    let mc = CertifiedSet::multicell(FamilyId::A, [(0, vec![1]), (1, vec![1, 2])].into()).unwrap();
    let want: Vec<u64> = (0..10_000)
        .filter(|&m| cell_of(FamilyId::A, m, 0) == vec![1] && cell_of(FamilyId::A, m, 1) == vec![1, 2])
        .collect();
    assert_eq!(mc.enumerate_below(10_000), want);
}

#[test]
fn phi_examples() {
    let a = CertifiedSet::bundle(FamilyId::A, 0, SymbolicSet::point(&[5])).unwrap();
    let p = phi(&a, 1).unwrap();
    assert_eq!(p.expr(), &Expr::negate(Expr::Atom(0, SymbolicSet::point(&[5]))));
    for s0 in [5, 6] {
        for s1 in [[0, 0], [3, 1]] {
            let stack = vec![vec![s0], s1.to_vec()];
            assert_eq!(p.eval(&stack).unwrap(), block_meets_finitely(&a, &stack));
        }
    }
    let fin = CertifiedSet::finite_set(FamilyId::A, [1, 2, 3].into());
    assert_eq!(phi(&fin, 0).unwrap().expr(), &Expr::True);
    let mc = CertifiedSet::multicell(FamilyId::A, [(0, vec![1]), (2, vec![0, 0, 2])].into()).unwrap();
    let p = phi(&mc, 2).unwrap();
    let want = Expr::negate(Expr::and(vec![
        Expr::Atom(0, SymbolicSet::point(&[1])),
        Expr::Atom(2, SymbolicSet::point(&[0, 0, 2])),
    ]));
    assert_eq!(p.expr(), &want);
    for stack in [
        vec![vec![1], vec![0, 0], vec![0, 0, 2]],
        vec![vec![1], vec![4, 4], vec![0, 0, 1]],
        vec![vec![2], vec![0, 0], vec![0, 0, 2]],
    ] {
        assert_eq!(p.eval(&stack).unwrap(), block_meets_finitely(&mc, &stack));
    }
    assert!(phi(&mc, 1).is_err());
}

#[test]
fn upfamily_examples() {
    let five = SymbolicSet::point(&[5]);
    let w = upfamily_member(&BlockFormula::new(0, Expr::negate(Expr::Atom(0, five.clone()))).unwrap())
        .unwrap()
        .unwrap();
    assert_eq!(w, vec![five.clone()]);
    let mut rng = rng_for(0, "rect", 0);
    for _ in 0..50 {
        let s0 = rng.gen_range(0..100u64);
        if s0 != 5 {
            assert!(!w[0].contains(&[s0]).unwrap());
        }
    }
    let q = SymbolicSet::atom(2, 1, Pred::in_set([3])).unwrap();
    let w = upfamily_member(&BlockFormula::new(1, Expr::negate(Expr::Atom(1, q.clone()))).unwrap())
        .unwrap()
        .unwrap();
    assert_eq!(w[1], q);
    assert!(q.fin_member().unwrap());
    let refused = upfamily_member(&BlockFormula::new(1, Expr::negate(Expr::Atom(1, f2()))).unwrap()).unwrap();
    assert!(refused.is_none());
    let t = upfamily_member(&BlockFormula::new(2, Expr::True).unwrap())
        .unwrap()
        .unwrap();
    assert!(t.iter().all(SymbolicSet::is_empty));
}

#[test]
fn jn_and_membership_examples() {
    let fam = FamilyId::A;
    let b5 = CertifiedSet::bundle(fam, 0, SymbolicSet::point(&[5])).unwrap();
    assert!(jn_member(&b5, 0).unwrap());
    let col = CertifiedSet::bundle(fam, 1, SymbolicSet::atom(2, 0, Pred::in_set([3])).unwrap()).unwrap();
    assert!(jn_member(&col, 1).unwrap());
    let bad = CertifiedSet::bundle(fam, 1, f2()).unwrap();
    for n in 1..=3 {
        assert!(!jn_member(&bad, n).unwrap());
    }
    assert!(finprime_member(&bad).unwrap().is_none());

    let with_finite = b5
        .certified_union(&CertifiedSet::finite_set(fam, (0..10).collect()))
        .unwrap();
    match finprime_member(&with_finite).unwrap() {
        Some(Certificate::Rectangle { level, .. }) => assert_eq!(level, 0),
        other => panic!("unexpected {other:?}"),
    }
    assert!(
        finprime_member(&CertifiedSet::bundle(fam, 0, SymbolicSet::full(1)).unwrap())
            .unwrap()
            .is_none()
    );
    assert!(finprime_member(&CertifiedSet::cell(fam, &[4, 2]).unwrap())
        .unwrap()
        .is_some());
}

#[test]
fn decomposition_examples() {
    let fam = FamilyId::B;
    let b5 = CertifiedSet::bundle(fam, 0, SymbolicSet::point(&[5])).unwrap();
    let Certificate::Decomposition { generators, remainder } = decomposition_certificate(&b5).unwrap() else {
        panic!()
    };
    assert_eq!(generators, vec![(0, SymbolicSet::point(&[5]))]);
    assert!(remainder.is_empty());

    let two = b5
        .certified_union(&CertifiedSet::bundle(fam, 1, SymbolicSet::atom(2, 0, Pred::in_set([1])).unwrap()).unwrap())
        .unwrap();
    let Certificate::Decomposition { generators, remainder } = decomposition_certificate(&two).unwrap() else {
        panic!()
    };
    assert_eq!(generators.len(), 2);
    assert!(validate_decomposition(&two, &generators, &remainder, 10_000).unwrap());

    let fin = CertifiedSet::finite_set(fam, [3, 9].into());
    let Certificate::Decomposition { generators, remainder } = decomposition_certificate(&fin).unwrap() else {
        panic!()
    };
    assert!(generators.is_empty());
    assert_eq!(remainder, [3, 9].into());
    assert!(decomposition_certificate(&CertifiedSet::bundle(fam, 1, f2()).unwrap()).is_err());
}

#[test]
fn generators_are_members() {
    let mut rng = rng_for(9, "gens", 0);
    for k in 0..100u64 {
        let family = fam(k);
        let l = rng.gen_range(0..=2);
        let a = if k % 2 == 0 {
            let s: Vec<u64> = (0..=l).map(|_| rng.gen_range(0..8)).collect();
            CertifiedSet::cell(family, &s).unwrap()
        } else {
            CertifiedSet::bundle(family, l, random_small_set(&mut rng, l + 1)).unwrap()
        };
        assert!(finprime_member(&a).unwrap().is_some());
    }
    for l in 0..=2 {
        assert!(
            finprime_member(&CertifiedSet::bundle(FamilyId::A, l, SymbolicSet::full(l + 1)).unwrap())
                .unwrap()
                .is_none()
        );
    }
    assert!(split_small(FamilyId::A, &[], 2) == (vec![], vec![]));
}
