//! Seeded cross-checks of the decision procedures against independent
//! oracles: brute-force enumeration over truncated universes, a direct Fin²
//! classifier, decode round trips, filter scans of the partition families
//! and re-validation of every certificate.
//!
//! Each trial draws from its own stream `(seed, suite, trial)`, so a suite
//! run is a pure function of its arguments.

use std::collections::BTreeSet;

use idealforge::embed::katetov_quasihom_check;
use idealforge::finprime::{
    decomposition_certificate, finprime_member, jn_member, validate_decomposition, validate_rectangle,
};
use idealforge::partition::{cell_of, decode, encode, enumerate_intersection};
use idealforge::quasisys::{exindlim_a, exindlim_b, exindlim_refuter};
use idealforge::random::{
    random_certified, random_constraints, random_finomega_member, random_set, random_small_set, random_sum_set, rng_for,
};
use idealforge::sumspace::{finomega_member, finpow_omega_member, validate_finomega_certificate};
use idealforge::{Certificate, Conjunct, FamilyId, Pred, QuasiHomSystem, Result, SumSymbolicSet, SymbolicSet};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const SUITES: &[&str] = &[
    "symcore-enum",
    "fin-ideal",
    "fin2-classifier",
    "sumspace-projection",
    "finomega-certificates",
    "limit-ideal",
    "exindlim-refuter",
    "partition-independence",
    "partition-roundtrip",
    "finprime-hierarchy",
    "finprime-certificates",
    "katetov",
];

/// Failure messages kept per report.
const KEEP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub trials: usize,
    /// Individual comparisons made.
    pub checks: u64,
    pub failures: usize,
    /// The first few failure messages.
    pub messages: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

struct Tally {
    checks: u64,
    failures: usize,
    messages: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.messages.len() < KEEP {
                self.messages.push(msg());
            }
        }
    }
}

pub fn run_suite(suite: &str, trials: usize, seed: u64) -> Result<SuiteReport> {
    let trial_fn: fn(&mut ChaCha8Rng, &mut Tally, usize) -> Result<()> = match suite {
        "symcore-enum" => symcore_enum,
        "fin-ideal" => fin_ideal,
        "fin2-classifier" => fin2_classifier,
        "sumspace-projection" => sumspace_projection,
        "finomega-certificates" => finomega_certificates,
        "limit-ideal" => limit_ideal,
        "exindlim-refuter" => exindlim_refuter_trial,
        "partition-independence" => partition_independence,
        "partition-roundtrip" => partition_roundtrip,
        "finprime-hierarchy" => finprime_hierarchy,
        "finprime-certificates" => finprime_certificates,
        "katetov" => katetov,
        _ => return Err(idealforge::Error::UnknownName(format!("suite {suite}"))),
    };
    let mut tally = Tally {
        checks: 0,
        failures: 0,
        messages: Vec::new(),
    };
    for t in 0..trials {
        let mut rng = rng_for(seed, suite, t as u64);
        trial_fn(&mut rng, &mut tally, t)?;
    }
    Ok(SuiteReport {
        suite: suite.to_string(),
        trials,
        checks: tally.checks,
        failures: tally.failures,
        messages: tally.messages,
    })
}

fn pred_holds(p: &Pred, v: u64) -> bool {
    match p {
        Pred::In(f) => f.contains(&v),
        Pred::NotIn(f) => !f.contains(&v),
    }
}

/// Membership straight from a conjunct list, with no canonicalisation.
fn raw_contains(conjuncts: &[Conjunct], p: &[u64]) -> bool {
    conjuncts.iter().any(|c| c.iter().all(|(&k, pr)| pred_holds(pr, p[k])))
}

fn raw_conjuncts(rng: &mut ChaCha8Rng, level: usize) -> Vec<Conjunct> {
    (0..rng.gen_range(0..=3))
        .map(|_| {
            let mut c = Conjunct::new();
            for k in 0..level {
                if rng.gen_bool(0.5) {
                    let vals: BTreeSet<u64> = (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(0..8)).collect();
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

/// Points of `[0, bound)^level` in lexicographic order.
pub fn grid(level: usize, bound: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..level {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..bound).map(move |v| {
                    let mut q: Vec<u64> = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

const ENUM_BOUND: u64 = 12;

fn symcore_enum(rng: &mut ChaCha8Rng, t: &mut Tally, trial: usize) -> Result<()> {
    let level = rng.gen_range(1..=3);
    let (ra, rb) = (raw_conjuncts(rng, level), raw_conjuncts(rng, level));
    let a = SymbolicSet::new(level, ra.clone())?;
    let b = SymbolicSet::new(level, rb.clone())?;
    let (u, i, d, c) = (a.union(&b)?, a.intersection(&b)?, a.difference(&b)?, a.complement()?);
    let points = grid(level, ENUM_BOUND);
    let mut subset = true;
    for p in &points {
        let (x, y) = (raw_contains(&ra, p), raw_contains(&rb, p));
        subset &= !x || y;
        let got = [
            a.contains(p)?,
            u.contains(p)?,
            i.contains(p)?,
            d.contains(p)?,
            c.contains(p)?,
        ];
        let want = [x, x || y, x && y, x && !y, !x];
        t.check(got == want, || {
            format!("trial {trial}: booleans at {p:?}: {got:?} vs {want:?}")
        });
    }
    t.check(a.is_subset(&b)? == subset, || format!("trial {trial}: subset"));
    t.check(
        a.enumerate(ENUM_BOUND)
            == points
                .iter()
                .filter(|p| raw_contains(&ra, p))
                .cloned()
                .collect::<Vec<_>>(),
        || format!("trial {trial}: enumerate"),
    );
    if level >= 2 {
        for v in 0..ENUM_BOUND {
            let sec = a.section_first(v)?;
            for q in grid(level - 1, ENUM_BOUND) {
                let mut p = vec![v];
                p.extend(&q);
                t.check(sec.contains(&q)? == raw_contains(&ra, &p), || {
                    format!("trial {trial}: section at {v}, point {q:?}")
                });
            }
        }
    }
    for k in 1..=level {
        let proj = a.project_last(k)?;
        // constants are below 8, so leading coordinates in [0, 9) cover every case
        let heads = grid(level - k, 9);
        for y in grid(k, ENUM_BOUND) {
            let hit = heads.iter().any(|x| {
                let mut p = x.clone();
                p.extend(&y);
                raw_contains(&ra, &p)
            });
            t.check(proj.contains(&y)? == hit, || {
                format!("trial {trial}: project_last {k} at {y:?}")
            });
        }
        let rl = raw_conjuncts(rng, k);
        let lifted = SymbolicSet::new(k, rl.clone())?.lift_last(level)?;
        for p in &points {
            t.check(lifted.contains(p)? == raw_contains(&rl, &p[level - k..]), || {
                format!("trial {trial}: lift_last from {k} at {p:?}")
            });
        }
    }
    Ok(())
}

fn fin_ideal(rng: &mut ChaCha8Rng, t: &mut Tally, trial: usize) -> Result<()> {
    let level = rng.gen_range(1..=3);
    let (a, b) = (random_set(rng, level), random_set(rng, level));
    let (ma, mb) = (a.fin_member()?, b.fin_member()?);
    t.check(!(ma && mb) || a.union(&b)?.fin_member()?, || {
        format!("trial {trial}: union of members")
    });
    t.check(!mb || a.intersection(&b)?.fin_member()?, || {
        format!("trial {trial}: subset of a member")
    });
    t.check(!(a.is_subset(&b)? && mb) || ma, || {
        format!("trial {trial}: subset closure")
    });
    t.check(!(ma && a.complement()?.fin_member()?), || {
        format!("trial {trial}: member with small complement")
    });
    t.check(!SymbolicSet::full(level).fin_member()?, || {
        format!("trial {trial}: full set is small")
    });
    Ok(())
}

/// Classifies the first-coordinate sections of a level-2 conjunct list one by
/// one: a section is finite iff every conjunct accepting its index bounds the
/// second coordinate by an `In` predicate. Indices above every constant all
/// have the section of `c + 1`.
fn fin2_by_sections(raw: &[Conjunct]) -> bool {
    let live: Vec<&Conjunct> = raw
        .iter()
        .filter(|c| !c.values().any(|p| matches!(p, Pred::In(f) if f.is_empty())))
        .collect();
    let c = live
        .iter()
        .flat_map(|cj| cj.values())
        .flat_map(|p| match p {
            Pred::In(f) | Pred::NotIn(f) => f.iter().copied(),
        })
        .max()
        .unwrap_or(0);
    let finite_section = |v: u64| {
        live.iter()
            .filter(|cj| cj.get(&0).is_none_or(|p| pred_holds(p, v)))
            .all(|cj| matches!(cj.get(&1), Some(Pred::In(_))))
    };
    let infinite_sections = (c + 1..c + 4).filter(|&v| !finite_section(v)).count();
    infinite_sections == 0
}

fn fin2_classifier(rng: &mut ChaCha8Rng, t: &mut Tally, trial: usize) -> Result<()> {
    let raw = raw_conjuncts(rng, 2);
    let s = SymbolicSet::new(2, raw.clone())?;
    let (got, want) = (s.fin_member()?, fin2_by_sections(&raw));
    t.check(got == want, || {
        format!("trial {trial}: {s} decided {got}, classifier {want}")
    });
    Ok(())
}

/// `y` is a last-coordinate image of some point of `slice`: a canonical
/// conjunct's predicates are satisfiable, so only the trailing ones matter.
fn projects_onto(slice: &SymbolicSet, y: &[u64]) -> bool {
    let off = slice.level() - y.len();
    slice.conjuncts().iter().any(|c| {
        c.iter()
            .filter(|(&k, _)| k >= off)
            .all(|(&k, p)| pred_holds(p, y[k - off]))
    })
}

fn sumspace_projection(rng: &mut ChaCha8Rng, t: &mut Tally, trial: usize) -> Result<()> {
    let m = random_sum_set(rng);
    let i = rng.gen_range(1..=3);
    let u = m.tail_union_projection(i)?;
    let last = m.threshold().max(m.head_width() + i) + 3;
    let slices = (i..=last).map(|j| m.summand_slice(j)).collect::<Result<Vec<_>>>()?;
    for y in grid(i, 10) {
        let want = slices.iter().any(|s| projects_onto(s, &y));
        t.check(u.contains(&y)? == want, || format!("trial {trial}: U_{i} at {y:?}"));
    }
    Ok(())
}

fn finomega_certificates(rng: &mut ChaCha8Rng, t: &mut Tally, trial: usize) -> Result<()> {
    let m = random_finomega_member(rng);
    match finomega_member(&m)? {
        Some((i, p)) => {
            t.check(validate_finomega_certificate(&m, i, &p)?, || {
                format!("trial {trial}: certificate ({i}, {p})")
            });
            let lifted = p.lift_last(i + 1)?;
            t.check(validate_finomega_certificate(&m, i + 1, &lifted)?, || {
                format!("trial {trial}: lifted certificate at {}", i + 1)
            });
            t.check(finpow_omega_member(&m)?, || {
                format!("trial {trial}: Fin_omega member outside Fin^omega")
            });
        }
        None => t.check(false, || format!("trial {trial}: generated member refused")),
    }
    Ok(())
}

fn limit_ideal(rng: &mut ChaCha8Rng, t: &mut Tally, trial: usize) -> Result<()> {
    let sys = QuasiHomSystem::standard();
    let pick = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.6) {
            random_finomega_member(rng)
        } else {
            random_sum_set(rng)
        }
    };
    let (a, b) = (pick(rng), pick(rng));
    let c = random_sum_set(rng);
    let (ca, cb) = (sys.limit_member(&a)?, sys.limit_member(&b)?);
    if ca.is_some() && cb.is_some() {
        t.check(sys.limit_member(&a.union(&b)?)?.is_some(), || {
            format!("trial {trial}: union")
        });
    }
    if let Some((i, p)) = ca {
        t.check(sys.limit_member(&a.intersection(&c)?)?.is_some(), || {
            format!("trial {trial}: subset")
        });
        t.check(sys.validate_limit_certificate(&a, i, &p)?, || {
            format!("trial {trial}: certificate")
        });
        t.check(sys.validate_limit_certificate(&a, i + 1, &p.lift_last(i + 1)?)?, || {
            format!("trial {trial}: lift from {i}")
        });
    }
    Ok(())
}

/// `A^c ∪ B^c` in the restricted system.
pub fn exindlim_union() -> Result<SumSymbolicSet> {
    exindlim_a().complement()?.union(&exindlim_b().complement()?)
}

/// Trial `t` covers index `t % max_i + 1`.
fn exindlim_refuter_trial(rng: &mut ChaCha8Rng, t: &mut Tally, trial: usize) -> Result<()> {
    let i = trial % 6 + 1;
    let p = random_small_set(rng, i).complement()?;
    let (j, x) = exindlim_refuter(i, &p)?;
    let ex = QuasiHomSystem::exindlim();
    let ok = exindlim_union()?.sum_contains(j, &x)? && ex.preimage(i, j, &p)?.contains(&x)?;
    t.check(ok, || format!("trial {trial}: refutation ({j}, {x:?}) of ({i}, {p})"));
    Ok(())
}

const FAMILIES: [FamilyId; 2] = [FamilyId::A, FamilyId::B];

fn partition_independence(rng: &mut ChaCha8Rng, t: &mut Tally, trial: usize) -> Result<()> {
    let fam = FAMILIES[rng.gen_range(0..2)];
    let c = random_constraints(rng, 4);
    let xs = enumerate_intersection(fam, &c, 50)?;
    t.check(xs.len() == 50, || format!("trial {trial}: only {} elements", xs.len()));
    t.check(xs.windows(2).all(|w| w[0] < w[1]), || {
        format!("trial {trial}: not ascending")
    });
    let in_cells = |m: u64| c.iter().all(|(&l, s)| &cell_of(fam, m, l) == s);
    t.check(xs.iter().all(|&m| in_cells(m)), || {
        format!("trial {trial}: element outside {c:?}")
    });
    // the filter scan is affordable while the elements stay small
    if let Some(&last) = xs.last() {
        if last < 100_000 {
            let scan: Vec<u64> = (0..=last).filter(|&m| in_cells(m)).collect();
            t.check(scan == xs, || {
                format!("trial {trial}: constructor and filter disagree on {c:?}")
            });
        }
    }
    // the partition property at the constrained levels
    for m in xs.iter().take(5) {
        for n in 0..=4 {
            t.check(cell_of(fam, *m, n).len() == n + 1, || {
                format!("trial {trial}: cell arity")
            });
        }
    }
    Ok(())
}

/// Trial `t` checks the codes `[100 t, 100 t + 100)` and one random code.
fn partition_roundtrip(rng: &mut ChaCha8Rng, t: &mut Tally, trial: usize) -> Result<()> {
    let base = trial as u64 * 100;
    for m in base..base + 100 {
        t.check(encode(&decode(m))? == m, || format!("round trip at {m}"));
    }
    let m: u64 = rng.gen();
    t.check(encode(&decode(m))? == m, || format!("round trip at {m}"));
    Ok(())
}

fn finprime_hierarchy(rng: &mut ChaCha8Rng, t: &mut Tally, trial: usize) -> Result<()> {
    let fam = FAMILIES[trial % 2];
    let a = random_certified(rng, fam, 2, 0.6);
    let top = a.maxlevel() + 3;
    let verdicts = (0..=top).map(|n| jn_member(&a, n)).collect::<Result<Vec<_>>>()?;
    t.check(verdicts.windows(2).all(|w| !w[0] || w[1]), || {
        format!("trial {trial}: J_n not monotone {verdicts:?}")
    });
    let stable = verdicts[a.maxlevel()];
    t.check(verdicts[a.maxlevel()..].iter().all(|&v| v == stable), || {
        format!("trial {trial}: no stabilisation past the maximal level {verdicts:?}")
    });
    let member = finprime_member(&a)?.is_some();
    t.check(member == verdicts.iter().any(|&v| v), || {
        format!("trial {trial}: membership vs union of J_n")
    });
    // generator oracle: a bundle over B lies in the ideal iff B is small
    let by_generators = a
        .bundles()
        .values()
        .map(SymbolicSet::fin_member)
        .collect::<Result<Vec<_>>>()?;
    t.check(member == by_generators.iter().all(|&b| b), || {
        format!("trial {trial}: membership vs generator oracle for\n{a}")
    });
    Ok(())
}

fn finprime_certificates(rng: &mut ChaCha8Rng, t: &mut Tally, trial: usize) -> Result<()> {
    let fam = FAMILIES[trial % 2];
    let a = random_certified(rng, fam, 2, 0.8);
    if let Some(Certificate::Rectangle { level, smalls }) = finprime_member(&a)? {
        t.check(validate_rectangle(&a, level, &smalls)?, || {
            format!("trial {trial}: rectangle")
        });
        if let Certificate::Decomposition { generators, remainder } = decomposition_certificate(&a)? {
            t.check(validate_decomposition(&a, &generators, &remainder, 10_000)?, || {
                format!("trial {trial}: decomposition misses part of the prefix")
            });
        }
    }
    Ok(())
}

/// Trial `t` checks `n = t % 4 + 1` with 100 samples and its broken variant.
fn katetov(_rng: &mut ChaCha8Rng, t: &mut Tally, trial: usize) -> Result<()> {
    let n = trial % 4 + 1;
    let ok = katetov_quasihom_check(n, 100, trial as u64, false)?;
    t.check(ok.passed(), || {
        format!("trial {trial}: n = {n} failed on {} samples", ok.failures.len())
    });
    let broken = katetov_quasihom_check(n, 100, trial as u64, true)?;
    t.check(!broken.passed(), || {
        format!("trial {trial}: broken map at n = {n} passed")
    });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_runs() {
        for s in SUITES {
            let r = run_suite(s, 3, 1).unwrap();
            assert!(r.passed(), "{r:?}");
            assert!(r.checks > 0, "{s}");
        }
        assert!(run_suite("nope", 1, 0).is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        assert_eq!(
            run_suite("symcore-enum", 5, 9).unwrap(),
            run_suite("symcore-enum", 5, 9).unwrap()
        );
    }

    #[test]
    fn classifier_examples() {
        let zero = SymbolicSet::atom(2, 0, Pred::in_set([0])).unwrap();
        assert!(fin2_by_sections(zero.conjuncts()));
        let f2 = SymbolicSet::atom(2, 0, Pred::not_in([0])).unwrap();
        assert!(!fin2_by_sections(f2.conjuncts()));
    }
}
