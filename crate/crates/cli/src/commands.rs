//! The command surface. Every decision command prints one verdict document.
//! Exit codes are 0 for member or pass, 1 for non-member or fail, 2 for usage
//! and parse errors and 3 when a resource cap stops a decision.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use idealforge::embed::{build_mc_embedding, verify_embedding_prefix, EmbeddingPrefix, SampledGenerator};
use idealforge::finprime::{decomposition_certificate, finprime_member};
use idealforge::quasisys::{exindlim_a, exindlim_b, exindlim_refuter};
use idealforge::random::{random_small_set, rng_for};
use idealforge::sumspace::{finomega_member, finpow_omega_member};
use idealforge::{Certificate, CertifiedSet, FamilyId, QuasiHomSystem, SumSymbolicSet, SymbolicSet};
use rand::Rng;
use serde_json::{json, Value};

use crate::cert::{condition_c_json, generic_point, limit_json, no_limit_json, set_text, sum_tails, system_tails};
use crate::doc::{Claim, Verdict, VerdictDocument};
use crate::oracle::{run_suite, SUITES};
use crate::parse::{parse, print, Parsed};

/// Prefix of the enumeration on which decomposition covers are checked.
pub const DECOMPOSITION_PREFIX: u64 = 10_000;

/// Generators sampled by `embed mc --verify`.
pub const EMBED_GENERATORS: usize = 50;

#[derive(Debug, Parser)]
#[command(
    name = "idealforge",
    version,
    about = "Certified membership decisions for ideals on countable sets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide membership of a set in an ideal.
    Member {
        /// fin^N, finomega, finpow-omega or finprime:FAMILY
        #[arg(long, value_parser = parse_ideal)]
        ideal: IdealArg,
        #[arg(long)]
        set: PathBuf,
    },
    /// Check a built-in quasi-homomorphism system.
    System {
        #[arg(long)]
        name: SystemName,
        #[arg(long)]
        check: SystemCheck,
        /// Sum-space set for `--check limit-member`.
        #[arg(long)]
        set: Option<PathBuf>,
        /// Add the top index before checking.
        #[arg(long)]
        extend: bool,
    },
    /// Worked examples.
    Demo {
        #[command(subcommand)]
        demo: Demo,
    },
    /// Embedding constructions.
    Embed {
        #[command(subcommand)]
        embed: Embed,
    },
    /// Seeded oracle cross-checks.
    Oracle {
        #[command(subcommand)]
        oracle: Oracle,
    },
    /// Re-validate a verdict document.
    Check {
        #[arg(long)]
        doc: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum Demo {
    /// Certificates for A^c and B^c and refutations for their union.
    Exindlim {
        #[arg(long, default_value_t = 6)]
        max_i: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum Embed {
    /// Greedy embedding of the source family into the multicell ideal of the target.
    Mc {
        #[arg(long, value_parser = parse_family)]
        source: FamilyId,
        #[arg(long, value_parser = parse_family)]
        target: FamilyId,
        #[arg(long)]
        count: usize,
        /// Also check containment for sampled generators.
        #[arg(long)]
        verify: bool,
        /// Deepest generator and observation level.
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum Oracle {
    Crosscheck {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdealArg {
    FinPow(usize),
    FinOmega,
    FinPowOmega,
    FinPrime(FamilyId),
}

impl fmt::Display for IdealArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealArg::FinPow(n) => write!(f, "fin^{n}"),
            IdealArg::FinOmega => f.write_str("finomega"),
            IdealArg::FinPowOmega => f.write_str("finpow-omega"),
            IdealArg::FinPrime(fam) => write!(f, "finprime:{fam}"),
        }
    }
}

pub fn parse_ideal(s: &str) -> Result<IdealArg, String> {
    match s {
        "finomega" => return Ok(IdealArg::FinOmega),
        "finpow-omega" => return Ok(IdealArg::FinPowOmega),
        _ => {}
    }
    if let Some(n) = s.strip_prefix("fin^") {
        return match n.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(IdealArg::FinPow(n)),
            _ => Err(format!("bad exponent in `{s}`")),
        };
    }
    if let Some(fam) = s.strip_prefix("finprime:") {
        return parse_family(fam).map(IdealArg::FinPrime);
    }
    Err(format!("unknown ideal `{s}`"))
}

fn parse_family(s: &str) -> Result<FamilyId, String> {
    FamilyId::parse(s).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SystemName {
    Standard,
    Exindlim,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SystemCheck {
    Coherence,
    ConditionC,
    LimitMember,
}

fn value_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    /// A resource cap hit before any decision started, such as while parsing.
    Resource(String),
    Core(idealforge::Error),
}

impl From<idealforge::Error> for Failure {
    fn from(e: idealforge::Error) -> Self {
        Failure::Core(e)
    }
}

pub type CmdResult<T> = Result<T, Failure>;

/// Parses and runs one command line (program name first).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(doc) => Outcome {
            code: doc.verdict.exit_code(),
            stdout: doc.to_json(),
            stderr: String::new(),
        },
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (2, m),
                Failure::Resource(m) => (3, m),
                Failure::Core(e) if e.is_resource() => (3, e.to_string()),
                Failure::Core(e) => (2, e.to_string()),
            };
            Outcome {
                code,
                stdout: String::new(),
                stderr: format!("error: {msg}\n"),
            }
        }
    }
}

fn dispatch(command: Command) -> CmdResult<VerdictDocument> {
    match command {
        Command::Member { ideal, set } => member(ideal, &set),
        Command::System {
            name,
            check,
            set,
            extend,
        } => system(name, check, set.as_deref(), extend),
        Command::Demo {
            demo: Demo::Exindlim { max_i, samples, seed },
        } => demo_exindlim(max_i, samples, seed),
        Command::Embed {
            embed:
                Embed::Mc {
                    source,
                    target,
                    count,
                    verify,
                    levels,
                    seed,
                },
        } => embed_mc(source, target, count, verify, levels, seed),
        Command::Oracle {
            oracle: Oracle::Crosscheck { suite, trials, seed },
        } => crosscheck(&suite, trials, seed),
        Command::Check { doc } => crate::check::check_file(&doc),
    }
}

pub fn read_file(path: &Path) -> CmdResult<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_parsed(path: &Path) -> CmdResult<Parsed> {
    let text = read_file(path)?;
    parse(&text).map(|e| e.parsed).map_err(|e| {
        let msg = format!("{}:{e}", path.display());
        if e.resource {
            Failure::Resource(msg)
        } else {
            Failure::Usage(msg)
        }
    })
}

type Decision = (Verdict, Value, Value);

/// Runs a decision; a resource cap turns into an undecided document.
fn decide(claim: Claim, seed: u64, body: impl FnOnce() -> idealforge::Result<Decision>) -> CmdResult<VerdictDocument> {
    match body() {
        Ok((verdict, certificate, summary)) => Ok(VerdictDocument::new(claim, verdict, certificate, summary, seed)),
        Err(e) if e.is_resource() => Ok(VerdictDocument::new(
            claim,
            Verdict::UndecidedResource,
            json!({"kind": "resource", "reason": e.to_string()}),
            json!({}),
            seed,
        )),
        Err(e) => Err(e.into()),
    }
}

fn params<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn member(ideal: IdealArg, path: &Path) -> CmdResult<VerdictDocument> {
    let parsed = read_parsed(path)?;
    let claim = Claim::new("member", params([("ideal", ideal.to_string())]), vec![print(&parsed)]);
    match (ideal, parsed) {
        (IdealArg::FinPow(n), Parsed::Level(s)) if s.level() == n => decide(claim, 0, || member_fin(&s)),
        (IdealArg::FinOmega, Parsed::Sum(m)) => decide(claim, 0, || member_finomega(&m)),
        (IdealArg::FinPowOmega, Parsed::Sum(m)) => decide(claim, 0, || member_finpow_omega(&m)),
        (IdealArg::FinPrime(fam), Parsed::Certified(a)) if a.family() == fam => {
            decide(claim, 0, || member_finprime(&a))
        }
        (ideal, parsed) => Err(Failure::Usage(format!(
            "ideal {ideal} does not apply to {}",
            describe(&parsed)
        ))),
    }
}

fn describe(p: &Parsed) -> String {
    match p {
        Parsed::Level(s) => format!("a level {} set", s.level()),
        Parsed::Sum(_) => "a sum-space set".into(),
        Parsed::Certified(a) => format!("a certified set over family {}", a.family()),
    }
}

fn member_fin(s: &SymbolicSet) -> idealforge::Result<Decision> {
    let point = generic_point(s);
    let contained = s.contains(&point)?;
    let verdict = if s.fin_member()? {
        Verdict::Member
    } else {
        Verdict::NonMember
    };
    Ok((
        verdict,
        json!({"kind": "generic-point", "point": point, "contained": contained}),
        json!({"level": s.level(), "conjuncts": s.conjuncts().len()}),
    ))
}

fn member_finomega(m: &SumSymbolicSet) -> idealforge::Result<Decision> {
    let bound = m.finomega_search_bound();
    let summary = json!({"search_bound": bound});
    Ok(match finomega_member(m)? {
        Some((i, p)) => (Verdict::Member, limit_json(i, &p), summary),
        None => (Verdict::NonMember, no_limit_json(bound, sum_tails(m))?, summary),
    })
}

fn member_finpow_omega(m: &SumSymbolicSet) -> idealforge::Result<Decision> {
    let j = m.threshold();
    let slice = m.summand_slice(j)?;
    let point = generic_point(&slice);
    let contained = slice.contains(&point)?;
    let verdict = if finpow_omega_member(m)? {
        Verdict::Member
    } else {
        Verdict::NonMember
    };
    Ok((
        verdict,
        json!({"kind": "tail-summand", "summand": j, "point": point, "contained": contained}),
        json!({"threshold": j}),
    ))
}

fn member_finprime(a: &CertifiedSet) -> idealforge::Result<Decision> {
    let summary = json!({"maxlevel": a.maxlevel(), "bundles": a.bundles().len(), "multicells": a.multicells().len()});
    if let Some(Certificate::Rectangle { level, smalls }) = finprime_member(a)? {
        let Certificate::Decomposition { generators, remainder } = decomposition_certificate(a)? else {
            unreachable!("decomposition_certificate returns a decomposition");
        };
        let generators: Vec<Value> = generators
            .iter()
            .map(|(l, b)| json!({"level": l, "cells": set_text(b)}))
            .collect();
        let cert = json!({
            "kind": "rectangle",
            "level": level,
            "smalls": smalls.iter().map(set_text).collect::<Vec<_>>(),
            "decomposition": {"generators": generators, "remainder": remainder, "prefix": DECOMPOSITION_PREFIX},
        });
        return Ok((Verdict::Member, cert, summary));
    }
    for (&l, b) in a.bundles() {
        if !b.fin_member()? {
            let cert = json!({"kind": "large-bundle", "level": l, "point": generic_point(b)});
            return Ok((Verdict::NonMember, cert, summary));
        }
    }
    Err(idealforge::Error::Precondition(
        "refused set has no large bundle".into(),
    ))
}

/// The named built-in, extended by the top index when asked.
pub fn build_system(name: &str, extend: bool) -> idealforge::Result<QuasiHomSystem> {
    let sys = QuasiHomSystem::builtin(name)?;
    if extend {
        sys.extend_infinity()
    } else {
        Ok(sys)
    }
}

fn system(name: SystemName, check: SystemCheck, set: Option<&Path>, extend: bool) -> CmdResult<VerdictDocument> {
    let name = value_name(name);
    let p = params([
        ("name", name.clone()),
        ("check", value_name(check)),
        ("extend", extend.to_string()),
    ]);
    let base = QuasiHomSystem::builtin(&name)?;
    match check {
        SystemCheck::ConditionC => {
            if set.is_some() {
                return Err(Failure::Usage("--set only applies to --check limit-member".into()));
            }
            let claim = Claim::new("system", p, vec![]);
            decide(claim, 0, || {
                // a system failing (C) cannot be extended; its own violation is the answer
                let sys = match (extend, base.check_condition_c()?) {
                    (true, None) => base.extend_infinity()?,
                    _ => base,
                };
                Ok(match sys.check_condition_c()? {
                    None => (
                        Verdict::Pass,
                        json!({"kind": "replay", "system": sys.name()}),
                        json!({}),
                    ),
                    Some(v) => (Verdict::Fail, condition_c_json(&sys, &v), json!({})),
                })
            })
        }
        SystemCheck::Coherence => {
            if set.is_some() {
                return Err(Failure::Usage("--set only applies to --check limit-member".into()));
            }
            let sys = if extend { base.extend_infinity()? } else { base };
            let claim = Claim::new("system", p, vec![]);
            decide(claim, 0, || {
                Ok(match sys.check_coherent()? {
                    None => (
                        Verdict::Pass,
                        json!({"kind": "replay", "system": sys.name()}),
                        json!({}),
                    ),
                    Some(v) => (
                        Verdict::Fail,
                        json!({"kind": "coherence-violation", "system": sys.name(), "i": v.i, "j": v.j, "k": v.k,
                               "point": v.point, "direct": v.direct, "composed": v.composed}),
                        json!({}),
                    ),
                })
            })
        }
        SystemCheck::LimitMember => {
            let path = set.ok_or_else(|| Failure::Usage("--check limit-member needs --set".into()))?;
            let m = match read_parsed(path)? {
                Parsed::Sum(m) => m,
                other => {
                    return Err(Failure::Usage(format!(
                        "limit membership needs a sum-space set, not {}",
                        describe(&other)
                    )))
                }
            };
            let sys = if extend { base.extend_infinity()? } else { base };
            let claim = Claim::new("system", p, vec![print(&Parsed::Sum(m.clone()))]);
            decide(claim, 0, || {
                let bound = sys.search_bound(&m);
                let summary = json!({"search_bound": bound});
                Ok(match sys.limit_member(&m)? {
                    Some((i, q)) => (Verdict::Member, limit_json(i, &q), summary),
                    None => (
                        Verdict::NonMember,
                        no_limit_json(bound, system_tails(&sys, &m))?,
                        summary,
                    ),
                })
            })
        }
    }
}

/// The candidates `P` for index `i`: complements of seeded small sets.
pub fn demo_candidates(seed: u64, i: usize, samples: usize) -> idealforge::Result<Vec<SymbolicSet>> {
    let mut rng = rng_for(seed, "demo-exindlim", i as u64);
    (0..samples)
        .map(|_| random_small_set(&mut rng, i).complement())
        .collect()
}

fn demo_exindlim(max_i: usize, samples: usize, seed: u64) -> CmdResult<VerdictDocument> {
    if max_i == 0 {
        return Err(Failure::Usage("--max-i must be at least 1".into()));
    }
    let (a, b) = (exindlim_a(), exindlim_b());
    let claim = Claim::new(
        "demo",
        params([
            ("name", "exindlim".into()),
            ("max-i", max_i.to_string()),
            ("samples", samples.to_string()),
            ("seed", seed.to_string()),
        ]),
        vec![print(&Parsed::Sum(a.clone())), print(&Parsed::Sum(b.clone()))],
    );
    decide(claim, seed, || {
        let ex = QuasiHomSystem::exindlim();
        let (ac, bc) = (a.complement()?, b.complement()?);
        let union = ac.union(&bc)?;
        let ca = ex.limit_member(&ac)?;
        let cb = ex.limit_member(&bc)?;
        let cu = ex.limit_member(&union)?;
        let mut refutations = Vec::new();
        let mut refuted = 0usize;
        for i in 1..=max_i {
            for p in demo_candidates(seed, i, samples)? {
                let (j, x) = exindlim_refuter(i, &p)?;
                if union.sum_contains(j, &x)? && ex.preimage(i, j, &p)?.contains(&x)? {
                    refuted += 1;
                }
                refutations.push(json!({"index": i, "candidate": set_text(&p), "summand": j, "point": x}));
            }
        }
        let ok = matches!(ca, Some((1, _))) && matches!(cb, Some((2, _))) && cu.is_none() && refuted == max_i * samples;
        let limit = |c: &Option<(usize, SymbolicSet)>| c.as_ref().map_or(Value::Null, |(i, p)| limit_json(*i, p));
        let cert = json!({
            "kind": "exindlim-demo",
            "a_complement": limit(&ca),
            "b_complement": limit(&cb),
            "union": match &cu {
                Some((i, p)) => limit_json(*i, p),
                None => no_limit_json(ex.search_bound(&union), system_tails(&ex, &union))?,
            },
            "refutations": refutations,
        });
        let summary = json!({"candidates": max_i * samples, "refuted": refuted});
        Ok((if ok { Verdict::Pass } else { Verdict::Fail }, cert, summary))
    })
}

pub fn sample_generators(seed: u64, levels: usize, count: usize) -> Vec<SampledGenerator> {
    let mut rng = rng_for(seed, "embed-generators", levels as u64);
    (0..count)
        .map(|_| {
            let level = rng.gen_range(0..=levels);
            let cells = random_small_set(&mut rng, level + 1);
            let finite: BTreeSet<u64> = (0..rng.gen_range(0..5)).map(|_| rng.gen_range(0..5_000)).collect();
            SampledGenerator { level, cells, finite }
        })
        .collect()
}

pub fn generator_json(g: &SampledGenerator) -> Value {
    json!({"level": g.level, "cells": set_text(&g.cells), "finite": g.finite})
}

/// Checks on `f` against the prefix: injectivity, prescribed intersections,
/// the low-level observation up to `levels` and generator containment.
pub fn embedding_summary(
    f: &EmbeddingPrefix,
    generators: &[SampledGenerator],
    levels: usize,
) -> idealforge::Result<(bool, Value)> {
    let report = verify_embedding_prefix(f, generators)?;
    let observation = idealforge::embed::observation_failures(f, levels);
    let ok = report.passed() && observation.is_empty();
    let summary = json!({
        "count": f.len(),
        "injective": report.injective,
        "prescribed_failures": report.prescribed_failures.len(),
        "observation_failures": observation.len(),
        "generators": generators.len(),
        "containment_violations": report.containment_violations.len(),
        "trace_columns": report.trace_columns.len(),
    });
    Ok((ok, summary))
}

fn embed_mc(
    source: FamilyId,
    target: FamilyId,
    count: usize,
    verify: bool,
    levels: usize,
    seed: u64,
) -> CmdResult<VerdictDocument> {
    let claim = Claim::new(
        "embed",
        params([
            ("source", source.to_string()),
            ("target", target.to_string()),
            ("count", count.to_string()),
            ("verify", verify.to_string()),
            ("levels", levels.to_string()),
            ("seed", seed.to_string()),
        ]),
        vec![],
    );
    decide(claim, seed, || {
        let f = build_mc_embedding(source, target, count)?;
        let generators = if verify {
            sample_generators(seed, levels, EMBED_GENERATORS)
        } else {
            Vec::new()
        };
        let (ok, summary) = embedding_summary(&f, &generators, levels)?;
        let cert = json!({
            "kind": "embedding",
            "values": f.values,
            "generators": generators.iter().map(generator_json).collect::<Vec<_>>(),
        });
        Ok((if ok { Verdict::Pass } else { Verdict::Fail }, cert, summary))
    })
}

pub fn crosscheck_decision(suite: &str, trials: usize, seed: u64) -> idealforge::Result<Decision> {
    let r = run_suite(suite, trials, seed)?;
    Ok((
        if r.passed() { Verdict::Pass } else { Verdict::Fail },
        json!({"kind": "crosscheck", "failures": r.messages}),
        json!({"trials": r.trials, "checks": r.checks, "failures": r.failures}),
    ))
}

fn crosscheck(suite: &str, trials: usize, seed: u64) -> CmdResult<VerdictDocument> {
    if !SUITES.contains(&suite) {
        return Err(Failure::Usage(format!(
            "unknown suite `{suite}`; known suites: {}",
            SUITES.join(", ")
        )));
    }
    let claim = Claim::new(
        "oracle",
        params([
            ("suite", suite.to_string()),
            ("trials", trials.to_string()),
            ("seed", seed.to_string()),
        ]),
        vec![],
    );
    decide(claim, seed, || crosscheck_decision(suite, trials, seed))
}
