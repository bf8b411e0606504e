//! Embeddings into `Fin'_ω` and Katětov reductions toward `Fin_ω`.
//!
//! The copy of `Fin^{n+2}` inside `Fin'_ω` is `σ(s, k) = k`-th element of
//! `X_s`. The greedy construction sends `i` to the least unused element of
//! `X^A_{g_i(0)} ∩ … ∩ X^A_{g_i(c)}`, where `g_i(n)` is the target cell of `i`
//! at level `n` and `c` is the value of `g_i(0)`.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::partition::{cell_of, Constraints, FamilyId, IntersectionIter, MAX_STACK_LEN};
use crate::random::{random_small_set, rng_for};
use crate::sumspace::{finomega_member, validate_finomega_certificate, MapExpr, Region, SumSymbolicSet};
use crate::symcore::SymbolicSet;

/// `σ: ω^{n+2} → ω` with `σ[{s} × ω] = X_s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CopyWitness {
    pub n: usize,
    pub family: FamilyId,
}

pub fn sigma_bijection(family: FamilyId, n: usize) -> CopyWitness {
    CopyWitness { n, family }
}

impl CopyWitness {
    /// `σ(s, k)`: the `k`-th element of `X_s`, ascending.
    pub fn apply(&self, s: &[u64], k: usize) -> Result<u64> {
        if s.len() != self.n + 1 {
            return Err(Error::Arity {
                expected: self.n + 1,
                found: s.len(),
            });
        }
        IntersectionIter::new(self.family, Constraints::from([(self.n, s.to_vec())]))?
            .nth(k)
            .ok_or_else(|| Error::Bounds(format!("cell {s:?} has fewer than {} elements", k + 1)))
    }

    /// `σ^{-1}(m) = (cell, rank within the cell)`.
    pub fn invert(&self, m: u64) -> Result<(Vec<u64>, usize)> {
        let s = self.g_index(m);
        let rank = IntersectionIter::new(self.family, Constraints::from([(self.n, s.clone())]))?
            .take_while(|&x| x < m)
            .count();
        Ok((s, rank))
    }

    /// The column of `σ` holding `i`.
    pub fn g_index(&self, i: u64) -> Vec<u64> {
        cell_of(self.family, i, self.n)
    }
}

pub fn g_index(w: &CopyWitness, i: u64) -> Vec<u64> {
    w.g_index(i)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingPrefix {
    pub values: Vec<u64>,
    pub source: FamilyId,
    pub target: FamilyId,
}

impl EmbeddingPrefix {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.values.iter().all(|v| seen.insert(*v))
    }
}

/// The levels `0..=min(c, 63)` and the target cells of `i` there; deeper
/// levels always hold the zero cell in both families.
fn prescribed(target: FamilyId, i: u64) -> Constraints {
    let c = cell_of(target, i, 0)[0];
    let top = (c as usize).min(MAX_STACK_LEN - 1);
    (0..=top).map(|k| (k, cell_of(target, i, k))).collect()
}

pub fn build_mc_embedding(source: FamilyId, target: FamilyId, n: usize) -> Result<EmbeddingPrefix> {
    if n == 0 {
        return Err(Error::Precondition("embedding prefix needs N >= 1".into()));
    }
    let mut used = BTreeSet::new();
    let mut values = Vec::with_capacity(n);
    for i in 0..n as u64 {
        let v = IntersectionIter::new(source, prescribed(target, i))?
            .find(|v| !used.contains(v))
            .ok_or_else(|| Error::Bounds(format!("prescribed intersection for {i} exhausted")))?;
        used.insert(v);
        values.push(v);
    }
    Ok(EmbeddingPrefix { values, source, target })
}

/// `f(i) ∈ X^A_{g_i(k)}` for every `k ≤ g_i(0)`.
pub fn prescribed_ok(f: &EmbeddingPrefix, i: usize) -> bool {
    prescribed(f.target, i as u64)
        .iter()
        .all(|(&k, t)| &cell_of(f.source, f.values[i], k) == t)
}

/// Indices `i` with `f(i)` and `i` in different cells at some level
/// `n ≤ min(g_i(0), levels)`.
pub fn observation_failures(f: &EmbeddingPrefix, levels: usize) -> Vec<usize> {
    (0..f.len())
        .filter(|&i| {
            let c = cell_of(f.target, i as u64, 0)[0];
            (0..=levels)
                .take_while(|&n| n as u64 <= c)
                .any(|n| cell_of(f.source, f.values[i], n) != cell_of(f.target, i as u64, n))
        })
        .collect()
}

/// A generator `A = A' ∪ A''` at level `n`: `A'' = ⋃_{s∈B} X^A_s` with `B`
/// small, and a finite `A'` (which meets every cell finitely).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampledGenerator {
    pub level: usize,
    pub cells: SymbolicSet,
    pub finite: BTreeSet<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EmbeddingReport {
    pub injective: bool,
    pub prescribed_failures: Vec<usize>,
    /// `(generator, i)` with `f(i) ∈ A''` but `i` outside the low columns and outside `h_n[B × ω]`.
    pub containment_violations: Vec<(usize, usize)>,
    /// `(generator, column, count)` for the finite trace `C` split by columns.
    pub trace_columns: Vec<(usize, Vec<u64>, usize)>,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.injective && self.prescribed_failures.is_empty() && self.containment_violations.is_empty()
    }
}

/// Checks on the prefix that
/// `f^{-1}[A] ⊆ ⋃_{j<n} h_0[{j}×ω] ∪ C ∪ h_n[B×ω]` for each generator,
/// with `C = f^{-1}[A'] ∖ ⋃_{j<n} h_0[{j}×ω]`.
pub fn verify_embedding_prefix(f: &EmbeddingPrefix, generators: &[SampledGenerator]) -> Result<EmbeddingReport> {
    let mut report = EmbeddingReport {
        injective: f.is_injective(),
        ..Default::default()
    };
    for i in 0..f.len() {
        if !prescribed_ok(f, i) {
            report.prescribed_failures.push(i);
        }
    }
    for (gi, g) in generators.iter().enumerate() {
        if g.cells.level() != g.level + 1 || !g.cells.fin_member()? {
            return Err(Error::Precondition(format!("generator {gi} is not a small bundle")));
        }
        let mut trace: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
        for (i, &v) in f.values.iter().enumerate() {
            let iu = i as u64;
            let low = cell_of(f.target, iu, 0)[0] < g.level as u64;
            if low {
                continue;
            }
            let column = cell_of(f.target, iu, g.level);
            if g.finite.contains(&v) {
                *trace.entry(column.clone()).or_default() += 1;
            }
            if g.cells.contains_unchecked(&cell_of(f.source, v, g.level)) && !g.cells.contains_unchecked(&column) {
                report.containment_violations.push((gi, i));
            }
        }
        report
            .trace_columns
            .extend(trace.into_iter().map(|(col, count)| (gi, col, count)));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KatetovReport {
    pub n: usize,
    /// Certificate found for `Σ_{j≤n} ω^j`.
    pub domain_certificate: Option<(usize, SymbolicSet)>,
    pub samples: usize,
    /// Sampled `A` whose preimage had no certificate or whose expected
    /// certificate `(n+1, A^c)` did not validate.
    pub failures: Vec<SymbolicSet>,
}

impl KatetovReport {
    pub fn passed(&self) -> bool {
        self.domain_certificate.is_some() && self.failures.is_empty()
    }
}

/// `Fin^{n+1} ≤_K Fin_ω` via `Σ_{j≥n+1} π_{n+1,j}`. With `broken`, the
/// summand `n+2` map is replaced by the projection onto the first `n+1`
/// coordinates.
pub fn katetov_quasihom_check(n: usize, samples: usize, seed: u64, broken: bool) -> Result<KatetovReport> {
    if n == 0 {
        return Err(Error::Precondition("n >= 1".into()));
    }
    let level = n + 1;
    let low = SumSymbolicSet::from_summands((1..=n).map(|j| (j, SymbolicSet::full(j))).collect())?;
    let domain_certificate = finomega_member(&low)?;
    let map = MapExpr::SumOfLastProj(level);
    let first = MapExpr::Select {
        from: level + 1,
        coords: (0..level).collect(),
    };
    let mut rng = rng_for(seed, "katetov", n as u64);
    let mut failures = Vec::new();
    for _ in 0..samples {
        let a = random_small_set(&mut rng, level);
        debug_assert!(a.fin_member()?);
        let mut pre = map.map_preimage(&Region::Level(a.clone()))?.as_sum()?.clone();
        if broken {
            let bad = first.map_preimage(&Region::Level(a.clone()))?;
            pre = pre.with_summand(level + 1, bad.as_level()?.clone())?;
        }
        let found = finomega_member(&pre)?;
        let expected_ok = validate_finomega_certificate(&pre, level, &a.complement()?)?;
        if found.is_none() || !expected_ok {
            failures.push(a);
        }
    }
    Ok(KatetovReport {
        n,
        domain_certificate,
        samples,
        failures,
    })
}
