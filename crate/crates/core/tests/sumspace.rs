mod common;

use std::collections::BTreeMap;

use common::{grid, pred_holds};
use idealforge::random::{random_finomega_member, random_set, random_small_set, random_sum_set, rng_for};
use idealforge::sumspace::{
    finomega_member, finomega_member_upto, finpow_omega_member, validate_finomega_certificate, MapExpr, Region,
    SumSymbolicSet,
};
use idealforge::symcore::{Pred, SetOp, SymbolicSet};
use proptest::prelude::*;

/// Last summand inspected by the brute-force checks.
const TOP: usize = 6;

/// Point in `M_j` per the template definition: head on the first `h`
/// coordinates, tail on the last `t`, exceptional entries below the
/// threshold.
fn template_contains(m: &SumSymbolicSet, j: usize, x: &[u64]) -> bool {
    if j < m.threshold() {
        return m.exceptional().get(&j).is_some_and(|s| s.contains(x).unwrap());
    }
    let (h, t) = (m.head_width(), m.tail_width());
    let mut point = x[..h].to_vec();
    point.extend(&x[j - t..]);
    m.pattern().contains(&point).unwrap()
}

fn sample_points(seed: u64, j: usize, count: usize) -> Vec<Vec<u64>> {
    use rand::Rng;
    let mut rng = rng_for(seed, "points", j as u64);
    (0..count)
        .map(|_| (0..j).map(|_| rng.gen_range(0..10)).collect())
        .collect()
}

/// `y ∈ π_{i,j}[M_j]`: some conjunct of the slice accepts `y` on the last
/// `i` coordinates. Canonical predicates are satisfiable, so the leading
/// coordinates can always be filled.
fn projects_onto(slice: &SymbolicSet, y: &[u64]) -> bool {
    let off = slice.level() - y.len();
    slice.conjuncts().iter().any(|c| {
        c.iter()
            .filter(|(&k, _)| k >= off)
            .all(|(&k, p)| pred_holds(p, y[k - off]))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn slices_and_booleans_agree_pointwise(seed in any::<u64>()) {
        let mut rng = rng_for(seed, "sum-bool", 0);
        let (a, b) = (random_sum_set(&mut rng), random_sum_set(&mut rng));
        let ops = [
            (a.sum_combine(SetOp::Union, Some(&b)).unwrap(), 0),
            (a.sum_combine(SetOp::Intersection, Some(&b)).unwrap(), 1),
            (a.sum_combine(SetOp::Difference, Some(&b)).unwrap(), 2),
            (a.sum_combine(SetOp::Complement, None).unwrap(), 3),
        ];
        for j in 1..=TOP {
            for x in sample_points(seed, j, 40) {
                let (p, q) = (template_contains(&a, j, &x), template_contains(&b, j, &x));
                prop_assert_eq!(a.sum_contains(j, &x).unwrap(), p);
                prop_assert_eq!(a.summand_slice(j).unwrap().contains(&x).unwrap(), p);
                for (r, op) in &ops {
                    let want = match op { 0 => p || q, 1 => p && q, 2 => p && !q, _ => !p };
                    prop_assert_eq!(r.sum_contains(j, &x).unwrap(), want, "op {} j {} x {:?}", op, j, x);
                }
            }
        }
    }

    #[test]
    fn tail_union_projection_matches_summand_scan(seed in any::<u64>(), i in 1usize..=3) {
        let mut rng = rng_for(seed, "sum-proj", 0);
        let m = random_sum_set(&mut rng);
        let u = m.tail_union_projection(i).unwrap();
        // past the threshold and the head block every further summand repeats
        let last = m.threshold().max(m.head_width() + i) + 3;
        let slices: Vec<SymbolicSet> = (i..=last).map(|j| m.summand_slice(j).unwrap()).collect();
        for y in grid(i, 10) {
            let want = slices.iter().any(|s| projects_onto(s, &y));
            prop_assert_eq!(u.contains(&y).unwrap(), want, "y {:?}", y);
        }
    }

    #[test]
    fn certificates_validate_and_lift(seed in any::<u64>()) {
        let mut rng = rng_for(seed, "sum-cert", 0);
        let m = if seed % 2 == 0 { random_finomega_member(&mut rng) } else { random_sum_set(&mut rng) };
        if let Some((i, p)) = finomega_member(&m).unwrap() {
            prop_assert!(validate_finomega_certificate(&m, i, &p).unwrap());
            prop_assert!(p.complement().unwrap().fin_member().unwrap());
            for j in i..=m.threshold() + i + 2 {
                let pre = p.lift_last(j).unwrap();
                prop_assert!(m.summand_slice(j).unwrap().is_disjoint(&pre).unwrap());
            }
            let lifted = p.lift_last(i + 1).unwrap();
            prop_assert!(validate_finomega_certificate(&m, i + 1, &lifted).unwrap());
            // containment in Katětov's Fin^ω
            prop_assert!(finpow_omega_member(&m).unwrap());
        }
    }

    #[test]
    fn search_bound_is_stable(seed in any::<u64>()) {
        let mut rng = rng_for(seed, "sum-stable", 0);
        let m = random_sum_set(&mut rng);
        let bound = m.finomega_search_bound();
        let at = finomega_member_upto(&m, bound).unwrap().is_some();
        let beyond = finomega_member_upto(&m, bound + 2).unwrap().is_some();
        prop_assert_eq!(at, beyond);
    }

    #[test]
    fn ideal_axioms(seed in any::<u64>()) {
        let mut rng = rng_for(seed, "sum-ideal", 0);
        let a = if seed % 3 == 0 { random_sum_set(&mut rng) } else { random_finomega_member(&mut rng) };
        let b = if seed % 5 == 0 { random_sum_set(&mut rng) } else { random_finomega_member(&mut rng) };
        let c = random_sum_set(&mut rng);
        for decide in [
            |m: &SumSymbolicSet| finomega_member(m).unwrap().is_some(),
            |m: &SumSymbolicSet| finpow_omega_member(m).unwrap(),
        ] {
            let (ma, mb) = (decide(&a), decide(&b));
            if ma && mb {
                prop_assert!(decide(&a.union(&b).unwrap()));
            }
            if ma {
                prop_assert!(decide(&a.intersection(&c).unwrap()));
            }
            prop_assert!(!decide(&SumSymbolicSet::full()));
        }
    }

    #[test]
    fn finpow_omega_matches_summand_scan(seed in any::<u64>()) {
        let mut rng = rng_for(seed, "sum-katetov", 0);
        let m = random_sum_set(&mut rng);
        // from the threshold on the verdict per summand is constant, so the
        // last inspected summand decides the tail
        let last = m.threshold() + m.head_width() + m.tail_width() + 3;
        let tail_small = m.summand_slice(last).unwrap().fin_member().unwrap();
        for j in m.threshold().max(1)..=last {
            prop_assert_eq!(m.summand_slice(j).unwrap().fin_member().unwrap(), tail_small);
        }
        prop_assert_eq!(finpow_omega_member(&m).unwrap(), tail_small);
    }

    #[test]
    fn katetov_preimages_have_expected_certificates(seed in any::<u64>(), level in 1usize..=3) {
        let mut rng = rng_for(seed, "sum-pre", 0);
        let a = random_small_set(&mut rng, level);
        let pre = MapExpr::SumOfLastProj(level).map_preimage(&Region::Level(a.clone())).unwrap();
        let pre = pre.as_sum().unwrap();
        prop_assert!(validate_finomega_certificate(pre, level, &a.complement().unwrap()).unwrap());
        prop_assert!(finomega_member(pre).unwrap().is_some());
        let r = random_set(&mut rng, level);
        let pre_r = SumSymbolicSet::tail_preimage(&r).unwrap();
        for j in level..=TOP {
            prop_assert!(pre_r.summand_slice(j).unwrap().same_set(&r.lift_last(j).unwrap()).unwrap());
        }
    }
}

fn f(i: usize) -> SymbolicSet {
    SymbolicSet::atom(i, 0, Pred::not_in([0])).unwrap()
}

#[test]
fn summand_examples() {
    let m = SumSymbolicSet::from_summands(BTreeMap::from([(3, SymbolicSet::full(3))])).unwrap();
    assert!(m.sum_contains(3, &[1, 2, 3]).unwrap());
    assert!(SumSymbolicSet::full().complement().unwrap().is_empty());
    let head = SymbolicSet::atom(1, 0, Pred::in_set([0])).unwrap();
    let t = SumSymbolicSet::template(&head, &SymbolicSet::full(0), 2).unwrap();
    assert_eq!(
        t.summand_slice(4).unwrap(),
        SymbolicSet::atom(4, 0, Pred::in_set([0])).unwrap()
    );
}

#[test]
fn projection_examples() {
    let p0 = f(2);
    let m = SumSymbolicSet::tail_preimage(&p0).unwrap().complement().unwrap();
    let u2 = m.tail_union_projection(2).unwrap();
    assert!(u2.same_set(&p0.complement().unwrap()).unwrap());
    for j in 2..=6 {
        for y in grid(2, 6) {
            if m.summand_slice(j)
                .unwrap()
                .enumerate(4)
                .iter()
                .any(|x| x[j - 2..] == y[..])
            {
                assert!(u2.contains(&y).unwrap());
            }
        }
    }
    let only3 = SumSymbolicSet::from_summands(BTreeMap::from([(3, SymbolicSet::full(3))])).unwrap();
    assert!(only3.tail_union_projection(4).unwrap().is_empty());
    assert!(SumSymbolicSet::full().tail_union_projection(3).unwrap().is_full());
}

#[test]
fn membership_examples() {
    let only3 = SumSymbolicSet::from_summands(BTreeMap::from([(3, SymbolicSet::full(3))])).unwrap();
    let (i, p) = finomega_member(&only3).unwrap().unwrap();
    assert_eq!(i, 4);
    assert!(p.is_full());

    let p0 = f(2);
    let m = SumSymbolicSet::tail_preimage(&p0).unwrap().complement().unwrap();
    let (i, p) = finomega_member(&m).unwrap().unwrap();
    assert_eq!(i, 2);
    assert!(p.same_set(&p0).unwrap());
    assert!(finpow_omega_member(&m).unwrap());

    // last three coordinates in S × ω with S = {x0 ∈ {0}} at level 2
    let s = SymbolicSet::atom(3, 0, Pred::in_set([0])).unwrap();
    let overline = SumSymbolicSet::template(&SymbolicSet::full(0), &s, 3).unwrap();
    assert!(finomega_member(&overline).unwrap().is_some());

    assert!(finomega_member(&SumSymbolicSet::full()).unwrap().is_none());
    assert!(!finpow_omega_member(&SumSymbolicSet::full()).unwrap());

    let tail = SymbolicSet::atom(1, 0, Pred::in_set([0])).unwrap();
    let col = SumSymbolicSet::template(&SymbolicSet::full(0), &tail, 1).unwrap();
    for j in 1..=6 {
        assert!(col.summand_slice(j).unwrap().fin_member().unwrap());
    }
    assert!(finpow_omega_member(&col).unwrap());
}

#[test]
fn map_examples() {
    let p0 = f(2);
    let pre = MapExpr::SumOfLastProj(2)
        .map_preimage(&Region::Level(p0.clone()))
        .unwrap();
    assert_eq!(pre.as_sum().unwrap(), &SumSymbolicSet::tail_preimage(&p0).unwrap());
    let img = MapExpr::last_proj(2, 1)
        .map_image(&Region::Level(SymbolicSet::atom(2, 1, Pred::in_set([5])).unwrap()))
        .unwrap();
    assert_eq!(
        img.as_level().unwrap(),
        &SymbolicSet::atom(1, 0, Pred::in_set([5])).unwrap()
    );
    let four = Region::Level(SymbolicSet::atom(1, 0, Pred::in_set([4])).unwrap());
    let composed = MapExpr::compose(MapExpr::last_proj(2, 1), MapExpr::last_proj(3, 2));
    let direct = MapExpr::last_proj(3, 1);
    let a = composed.map_preimage(&four).unwrap();
    assert_eq!(a, direct.map_preimage(&four).unwrap());
    assert_eq!(
        a.as_level().unwrap(),
        &SymbolicSet::atom(3, 2, Pred::in_set([4])).unwrap()
    );
}
