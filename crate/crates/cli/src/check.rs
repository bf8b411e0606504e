//! `check`: re-validates a verdict document from its claim and certificate.
//!
//! Membership certificates are checked directly (limit certificates,
//! rectangles, generic points, refutations). Verdicts that carry no witness
//! (a passing condition-(C) or coherence check, an oracle report) are
//! replayed from the claim.

use std::collections::BTreeMap;
use std::path::Path;

use idealforge::embed::{EmbeddingPrefix, SampledGenerator};
use idealforge::finprime::{validate_decomposition, validate_rectangle};
use idealforge::quasisys::QuasiHomSystem;
use idealforge::sumspace::validate_finomega_certificate;
use idealforge::{FamilyId, SumSymbolicSet, SymbolicSet};
use serde_json::{json, Value};

use crate::cert::*;
use crate::commands::{
    build_system, crosscheck_decision, demo_candidates, embedding_summary, parse_ideal, read_file, CmdResult, Failure,
    IdealArg, DECOMPOSITION_PREFIX, EMBED_GENERATORS,
};
use crate::doc::{Claim, Verdict, VerdictDocument, TOOL};
use crate::parse::{parse, Parsed};

pub fn check_file(path: &Path) -> CmdResult<VerdictDocument> {
    let text = read_file(path)?;
    let doc = VerdictDocument::from_json(&text)
        .map_err(|e| Failure::Usage(format!("{}: not a verdict document: {e}", path.display())))?;
    let claim = Claim::new(
        "check",
        BTreeMap::from([
            ("operation".to_string(), doc.claim.operation.clone()),
            ("digest".to_string(), doc.claim.digest.clone()),
        ]),
        vec![],
    );
    let (verdict, reason) = match check_document(&doc) {
        Ok(()) => (Verdict::Pass, Value::Null),
        Err(r) => (Verdict::Fail, Value::String(r)),
    };
    Ok(VerdictDocument::new(
        claim,
        verdict,
        json!({"kind": "check", "reason": reason}),
        json!({"checked_verdict": doc.verdict}),
        doc.seed,
    ))
}

pub fn check_document(doc: &VerdictDocument) -> CheckResult<()> {
    ensure(doc.tool == TOOL, || format!("document was written by `{}`", doc.tool))?;
    ensure(doc.claim.digest_matches(), || {
        "claim digest does not match its contents".into()
    })?;
    if doc.verdict == Verdict::UndecidedResource {
        return expect_kind(&doc.certificate, "resource");
    }
    match doc.claim.operation.as_str() {
        "member" => check_member(doc),
        "system" => check_system(doc),
        "demo" => check_demo(doc),
        "embed" => check_embed(doc),
        "oracle" => check_oracle(doc),
        "check" => Err("check documents are not themselves checked".into()),
        other => Err(format!("unknown operation `{other}`")),
    }
}

fn param<'a>(claim: &'a Claim, key: &str) -> CheckResult<&'a str> {
    claim.param(key).ok_or_else(|| format!("claim lacks parameter `{key}`"))
}

fn param_parse<T: std::str::FromStr>(claim: &Claim, key: &str) -> CheckResult<T> {
    param(claim, key)?
        .parse()
        .map_err(|_| format!("parameter `{key}` is malformed"))
}

fn seed_param(doc: &VerdictDocument) -> CheckResult<u64> {
    let seed = param_parse(&doc.claim, "seed")?;
    ensure(seed == doc.seed, || {
        "document seed differs from the claimed seed".into()
    })?;
    Ok(seed)
}

fn inputs(claim: &Claim, count: usize) -> CheckResult<Vec<Parsed>> {
    ensure(claim.inputs.len() == count, || format!("expected {count} inputs"))?;
    claim
        .inputs
        .iter()
        .map(|t| {
            parse(t)
                .map(|e| e.parsed)
                .map_err(|e| format!("input does not parse: {e}"))
        })
        .collect()
}

fn sum_input(p: Parsed) -> CheckResult<SumSymbolicSet> {
    match p {
        Parsed::Sum(m) => Ok(m),
        other => Err(format!("expected a sum-space input, found a {}", other.kind())),
    }
}

/// `true` for member, `false` for non-member.
fn membership(v: Verdict) -> CheckResult<bool> {
    match v {
        Verdict::Member => Ok(true),
        Verdict::NonMember => Ok(false),
        other => Err(format!("verdict {other:?} does not answer a membership question")),
    }
}

fn passing(v: Verdict) -> CheckResult<bool> {
    match v {
        Verdict::Pass => Ok(true),
        Verdict::Fail => Ok(false),
        other => Err(format!("verdict {other:?} does not answer a check")),
    }
}

/// The generic point decides smallness, so the verdict must be its negation.
fn check_generic_point(s: &SymbolicSet, cert: &Value, member: bool) -> CheckResult<()> {
    let point = get_tuple(cert, "point")?;
    ensure(point == generic_point(s), || "point is not the generic point".into())?;
    let contained = core(s.contains(&point))?;
    ensure(get_bool(cert, "contained")? == contained, || {
        "`contained` is wrong".into()
    })?;
    ensure(member == !contained, || {
        "verdict disagrees with the generic point".into()
    })
}

fn check_limit(cert: &Value, validate: impl Fn(usize, &SymbolicSet) -> idealforge::Result<bool>) -> CheckResult<usize> {
    expect_kind(cert, "limit")?;
    let i = get_usize(cert, "index")?;
    let p = get_set(cert, "dual")?;
    ensure(core(validate(i, &p))?, || {
        format!("limit certificate at index {i} does not validate")
    })?;
    Ok(i)
}

fn check_member(doc: &VerdictDocument) -> CheckResult<()> {
    let ideal = parse_ideal(param(&doc.claim, "ideal")?)?;
    let input = inputs(&doc.claim, 1)?.remove(0);
    let member = membership(doc.verdict)?;
    let cert = &doc.certificate;
    match (ideal, input) {
        (IdealArg::FinPow(n), Parsed::Level(s)) if s.level() == n => {
            expect_kind(cert, "generic-point")?;
            check_generic_point(&s, cert, member)
        }
        (IdealArg::FinOmega, Parsed::Sum(m)) => {
            if member {
                check_limit(cert, |i, p| validate_finomega_certificate(&m, i, p)).map(drop)
            } else {
                check_no_limit(cert, m.finomega_search_bound(), sum_tails(&m))
            }
        }
        (IdealArg::FinPowOmega, Parsed::Sum(m)) => {
            expect_kind(cert, "tail-summand")?;
            let j = get_usize(cert, "summand")?;
            ensure(j == m.threshold(), || "summand is not the template threshold".into())?;
            check_generic_point(&core(m.summand_slice(j))?, cert, member)
        }
        (IdealArg::FinPrime(fam), Parsed::Certified(a)) if a.family() == fam => {
            if member {
                expect_kind(cert, "rectangle")?;
                let level = get_usize(cert, "level")?;
                let smalls = get_array(cert, "smalls")?
                    .iter()
                    .map(|v| {
                        v.as_str()
                            .ok_or("`smalls` holds a non-string")
                            .map(crate::parse::parse_level)
                    })
                    .collect::<Result<Result<Vec<SymbolicSet>, _>, _>>()?
                    .map_err(|e| format!("`smalls`: {e}"))?;
                ensure(core(validate_rectangle(&a, level, &smalls))?, || {
                    "rectangle does not validate".into()
                })?;
                let d = field(cert, "decomposition")?;
                let generators = get_array(d, "generators")?
                    .iter()
                    .map(|g| Ok((get_usize(g, "level")?, get_set(g, "cells")?)))
                    .collect::<CheckResult<Vec<_>>>()?;
                let remainder = get_tuple(d, "remainder")?.into_iter().collect();
                let prefix = get_u64(d, "prefix")?;
                ensure(prefix >= DECOMPOSITION_PREFIX, || {
                    "decomposition prefix is too short".into()
                })?;
                ensure(
                    core(validate_decomposition(&a, &generators, &remainder, prefix))?,
                    || "decomposition does not cover the prefix".into(),
                )
            } else {
                expect_kind(cert, "large-bundle")?;
                let level = get_usize(cert, "level")?;
                let b = a
                    .bundles()
                    .get(&level)
                    .ok_or_else(|| format!("no bundle at level {level}"))?;
                let point = get_tuple(cert, "point")?;
                ensure(point == generic_point(b), || {
                    "point is not the generic point of the bundle".into()
                })?;
                ensure(core(b.contains(&point))?, || "the bundle is small".into())
            }
        }
        (ideal, other) => Err(format!("ideal {ideal} does not apply to a {}", other.kind())),
    }
}

fn system_named(name: &str) -> CheckResult<QuasiHomSystem> {
    core(match name.strip_suffix("+inf") {
        Some(base) => build_system(base, true),
        None => build_system(name, false),
    })
}

fn check_system(doc: &VerdictDocument) -> CheckResult<()> {
    let name = param(&doc.claim, "name")?;
    let extend: bool = param_parse(&doc.claim, "extend")?;
    let cert = &doc.certificate;
    match param(&doc.claim, "check")? {
        "condition-c" => {
            inputs(&doc.claim, 0)?;
            let sys = system_named(get_str(cert, "system")?)?;
            let base_name = sys.name().strip_suffix("+inf").unwrap_or(sys.name());
            ensure(base_name == name, || "certificate names another system".into())?;
            ensure(extend || !sys.is_extended(), || {
                "system was extended without --extend".into()
            })?;
            if passing(doc.verdict)? {
                expect_kind(cert, "replay")?;
                ensure(extend == sys.is_extended(), || {
                    "passing check on the wrong system".into()
                })?;
                ensure(core(sys.check_condition_c())?.is_none(), || {
                    "replay finds a violation".into()
                })
            } else {
                check_condition_c_violation(&sys, cert)
            }
        }
        "coherence" => {
            inputs(&doc.claim, 0)?;
            let sys = core(build_system(name, extend))?;
            ensure(get_str(cert, "system")? == sys.name(), || {
                "certificate names another system".into()
            })?;
            let replay = core(sys.check_coherent())?;
            if passing(doc.verdict)? {
                expect_kind(cert, "replay")?;
                ensure(replay.is_none(), || "replay finds a coherence violation".into())
            } else {
                expect_kind(cert, "coherence-violation")?;
                let v = replay.ok_or("replay finds no coherence violation")?;
                let same = get_usize(cert, "i")? == v.i
                    && get_usize(cert, "j")? == v.j
                    && get_usize(cert, "k")? == v.k
                    && get_tuple(cert, "point")? == v.point;
                ensure(same, || "violation differs from the replay".into())
            }
        }
        "limit-member" => {
            let m = sum_input(inputs(&doc.claim, 1)?.remove(0))?;
            let sys = core(build_system(name, extend))?;
            if membership(doc.verdict)? {
                check_limit(cert, |i, p| sys.validate_limit_certificate(&m, i, p)).map(drop)
            } else {
                check_no_limit(cert, sys.search_bound(&m), system_tails(&sys, &m))
            }
        }
        other => Err(format!("unknown system check `{other}`")),
    }
}

fn check_demo(doc: &VerdictDocument) -> CheckResult<()> {
    ensure(param(&doc.claim, "name")? == "exindlim", || "unknown demo".into())?;
    let max_i: usize = param_parse(&doc.claim, "max-i")?;
    let samples: usize = param_parse(&doc.claim, "samples")?;
    let seed = seed_param(doc)?;
    let mut ins = inputs(&doc.claim, 2)?.into_iter();
    let a = sum_input(ins.next().expect("two inputs"))?;
    let b = sum_input(ins.next().expect("two inputs"))?;
    let ex = QuasiHomSystem::exindlim();
    let (ac, bc) = (core(a.complement())?, core(b.complement())?);
    let union = core(ac.union(&bc))?;
    let cert = &doc.certificate;
    expect_kind(cert, "exindlim-demo")?;

    let certified_at = |key: &str, m: &SumSymbolicSet| -> CheckResult<Option<usize>> {
        match field(cert, key)? {
            Value::Null => Ok(None),
            c => check_limit(c, |i, p| ex.validate_limit_certificate(m, i, p)).map(Some),
        }
    };
    let a_ok = certified_at("a_complement", &ac)? == Some(1);
    let b_ok = certified_at("b_complement", &bc)? == Some(2);
    let u = field(cert, "union")?;
    let union_refused = if get_str(u, "kind")? == "limit" {
        check_limit(u, |i, p| ex.validate_limit_certificate(&union, i, p))?;
        false
    } else {
        check_no_limit(u, ex.search_bound(&union), system_tails(&ex, &union))?;
        true
    };

    let refutations = get_array(cert, "refutations")?;
    ensure(refutations.len() == max_i * samples, || {
        "wrong number of refutations".into()
    })?;
    let mut entries = refutations.iter();
    let mut refuted = 0usize;
    for i in 1..=max_i {
        for p in core(demo_candidates(seed, i, samples))? {
            let r = entries.next().expect("length checked");
            ensure(get_usize(r, "index")? == i, || "refutations are out of order".into())?;
            ensure(get_set(r, "candidate")? == p, || {
                format!("candidate at index {i} is not the seeded one")
            })?;
            let j = get_usize(r, "summand")?;
            let x = get_tuple(r, "point")?;
            let hit = union.sum_contains(j, &x).unwrap_or(false)
                && core(ex.preimage(i, j, &p))
                    .map(|pre| pre.contains(&x).unwrap_or(false))
                    .unwrap_or(false);
            refuted += usize::from(hit);
        }
    }
    let summary = json!({"candidates": max_i * samples, "refuted": refuted});
    ensure(doc.summary == summary, || {
        "summary does not match the certificate".into()
    })?;
    let ok = a_ok && b_ok && union_refused && refuted == max_i * samples;
    ensure(ok == passing(doc.verdict)?, || {
        "verdict does not match the certificate".into()
    })
}

fn check_embed(doc: &VerdictDocument) -> CheckResult<()> {
    let claim = &doc.claim;
    let source = FamilyId::parse(param(claim, "source")?).map_err(|e| e.to_string())?;
    let target = FamilyId::parse(param(claim, "target")?).map_err(|e| e.to_string())?;
    let count: usize = param_parse(claim, "count")?;
    let verify: bool = param_parse(claim, "verify")?;
    let levels: usize = param_parse(claim, "levels")?;
    seed_param(doc)?;
    let cert = &doc.certificate;
    expect_kind(cert, "embedding")?;
    let values = get_tuple(cert, "values")?;
    ensure(values.len() == count, || "wrong number of values".into())?;
    let generators = get_array(cert, "generators")?
        .iter()
        .map(|g| {
            Ok(SampledGenerator {
                level: get_usize(g, "level")?,
                cells: get_set(g, "cells")?,
                finite: get_tuple(g, "finite")?.into_iter().collect(),
            })
        })
        .collect::<CheckResult<Vec<_>>>()?;
    let wanted = if verify { EMBED_GENERATORS } else { 0 };
    ensure(generators.len() == wanted, || format!("expected {wanted} generators"))?;
    ensure(generators.iter().all(|g| g.level <= levels), || {
        "generator above --levels".into()
    })?;
    let f = EmbeddingPrefix { values, source, target };
    let (ok, summary) = core(embedding_summary(&f, &generators, levels))?;
    ensure(doc.summary == summary, || {
        "summary does not match the recomputed checks".into()
    })?;
    ensure(ok == passing(doc.verdict)?, || {
        "verdict does not match the recomputed checks".into()
    })
}

fn check_oracle(doc: &VerdictDocument) -> CheckResult<()> {
    let suite = param(&doc.claim, "suite")?;
    let trials: usize = param_parse(&doc.claim, "trials")?;
    let seed = seed_param(doc)?;
    let (verdict, cert, summary) = core(crosscheck_decision(suite, trials, seed))?;
    ensure(
        verdict == doc.verdict && cert == doc.certificate && summary == doc.summary,
        || "replayed report differs".into(),
    )
}
