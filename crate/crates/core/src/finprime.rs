//! The ideal `Fin'_ω` on ω, generated by the copies of `Fin^{n+2}` carried by
//! the cell partitions, and its hierarchy `J_n`.
//!
//! Membership is decided on *certified sets*: a finite part, bundles
//! `⋃_{s∈B} X_s` with `B` symbolic, and multicells `⋂_l X_{u_l}`. For those,
//! `φ_n(A) = {(s_0,…,s_n) : A ∩ X_{s_0} ∩ … ∩ X_{s_n} finite}` is a boolean
//! formula over atoms "`s_l ∈ Q`", because distinct cells of one level are
//! disjoint and cells of distinct levels meet in infinite sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;

use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::partition::{cell_of, FamilyId};
use crate::symcore::{Pred, SymbolicSet};

pub type Multicell = BTreeMap<usize, Vec<u64>>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CertifiedSet {
    family: FamilyId,
    finite: BTreeSet<u64>,
    bundles: BTreeMap<usize, SymbolicSet>,
    multicells: Vec<Multicell>,
}

impl CertifiedSet {
    /// Validates arities, merges bundles per level and drops empty pieces.
    pub fn new(
        family: FamilyId,
        finite: BTreeSet<u64>,
        bundles: Vec<(usize, SymbolicSet)>,
        multicells: Vec<Multicell>,
    ) -> Result<CertifiedSet> {
        let mut merged: BTreeMap<usize, SymbolicSet> = BTreeMap::new();
        for (l, b) in bundles {
            if b.level() != l + 1 {
                return Err(Error::LevelMismatch {
                    left: b.level(),
                    right: l + 1,
                });
            }
            let b = match merged.remove(&l) {
                Some(prev) => prev.union(&b)?,
                None => b,
            };
            if !b.is_empty() {
                merged.insert(l, b);
            }
        }
        let mut cells = Vec::new();
        for u in multicells {
            if u.is_empty() {
                return Err(Error::Precondition("a multicell needs at least one level".into()));
            }
            for (&l, t) in &u {
                if t.len() != l + 1 {
                    return Err(Error::Arity {
                        expected: l + 1,
                        found: t.len(),
                    });
                }
            }
            if !cells.contains(&u) {
                cells.push(u);
            }
        }
        cells.sort();
        Ok(CertifiedSet {
            family,
            finite,
            bundles: merged,
            multicells: cells,
        })
    }

    pub fn finite_set(family: FamilyId, finite: BTreeSet<u64>) -> CertifiedSet {
        CertifiedSet {
            family,
            finite,
            bundles: BTreeMap::new(),
            multicells: Vec::new(),
        }
    }

    pub fn bundle(family: FamilyId, level: usize, b: SymbolicSet) -> Result<CertifiedSet> {
        CertifiedSet::new(family, BTreeSet::new(), vec![(level, b)], vec![])
    }

    /// The single cell `X_s`, `s` at level `s.len() − 1`.
    pub fn cell(family: FamilyId, s: &[u64]) -> Result<CertifiedSet> {
        if s.is_empty() {
            return Err(Error::Arity { expected: 1, found: 0 });
        }
        CertifiedSet::bundle(family, s.len() - 1, SymbolicSet::point(s))
    }

    pub fn multicell(family: FamilyId, u: Multicell) -> Result<CertifiedSet> {
        CertifiedSet::new(family, BTreeSet::new(), vec![], vec![u])
    }

    pub fn family(&self) -> FamilyId {
        self.family
    }

    pub fn finite_part(&self) -> &BTreeSet<u64> {
        &self.finite
    }

    pub fn bundles(&self) -> &BTreeMap<usize, SymbolicSet> {
        &self.bundles
    }

    pub fn multicells(&self) -> &[Multicell] {
        &self.multicells
    }

    /// Greatest level mentioned; 0 when only the finite part is present.
    pub fn maxlevel(&self) -> usize {
        let b = self.bundles.keys().next_back().copied();
        let m = self
            .multicells
            .iter()
            .filter_map(|u| u.keys().next_back().copied())
            .max();
        b.max(m).unwrap_or(0)
    }

    pub fn certified_contains(&self, m: u64) -> bool {
        if self.finite.contains(&m) {
            return true;
        }
        let f = self.family;
        self.bundles
            .iter()
            .any(|(&l, b)| b.contains_unchecked(&cell_of(f, m, l)))
            || self
                .multicells
                .iter()
                .any(|u| u.iter().all(|(&l, t)| &cell_of(f, m, l) == t))
    }

    fn same_family(&self, other: &CertifiedSet) -> Result<()> {
        if self.family != other.family {
            return Err(Error::FamilyMismatch(self.family.to_string(), other.family.to_string()));
        }
        Ok(())
    }

    pub fn certified_union(&self, other: &CertifiedSet) -> Result<CertifiedSet> {
        self.same_family(other)?;
        let bundles = self
            .bundles
            .iter()
            .chain(&other.bundles)
            .map(|(&l, b)| (l, b.clone()))
            .collect();
        CertifiedSet::new(
            self.family,
            self.finite.union(&other.finite).copied().collect(),
            bundles,
            self.multicells.iter().chain(&other.multicells).cloned().collect(),
        )
    }

    /// Members below `bound`, ascending.
    pub fn enumerate_below(&self, bound: u64) -> Vec<u64> {
        (0..bound).filter(|&m| self.certified_contains(m)).collect()
    }

    /// The infinite part as a formula: "the cell stack of `m` puts it in a
    /// bundle or a multicell".
    pub fn profile(&self) -> Expr {
        let mut parts: Vec<Expr> = self.bundles.iter().map(|(&l, b)| Expr::Atom(l, b.clone())).collect();
        parts.extend(self.multicells.iter().map(multicell_expr));
        Expr::or(parts)
    }
}

fn multicell_expr(u: &Multicell) -> Expr {
    Expr::and(u.iter().map(|(&l, t)| Expr::Atom(l, SymbolicSet::point(t))).collect())
}

impl fmt::Display for CertifiedSet {
    /// Body of a certified-set document (without the header line).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.finite.is_empty() {
            let vals: Vec<String> = self.finite.iter().map(u64::to_string).collect();
            writeln!(f, "finite {{{}}}", vals.join(","))?;
        }
        for (l, b) in &self.bundles {
            writeln!(f, "bundle {l}: {b}")?;
        }
        for u in &self.multicells {
            let parts: Vec<String> = u
                .iter()
                .map(|(l, t)| {
                    let vals: Vec<String> = t.iter().map(u64::to_string).collect();
                    format!("{l}: ({})", vals.join(","))
                })
                .collect();
            writeln!(f, "cell {{{}}}", parts.join(", "))?;
        }
        Ok(())
    }
}

/// Boolean expression over atoms `Atom(l, Q)` meaning `s_l ∈ Q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    True,
    False,
    Atom(usize, SymbolicSet),
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
}

impl Expr {
    pub fn negate(e: Expr) -> Expr {
        match e {
            Expr::True => Expr::False,
            Expr::False => Expr::True,
            Expr::Not(inner) => *inner,
            e => Expr::Not(Box::new(e)),
        }
    }

    pub fn and(parts: Vec<Expr>) -> Expr {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Expr::True => {}
                Expr::False => return Expr::False,
                Expr::And(inner) => out.extend(inner),
                p => out.push(p),
            }
        }
        match out.len() {
            0 => Expr::True,
            1 => out.pop().unwrap(),
            _ => Expr::And(out),
        }
    }

    pub fn or(parts: Vec<Expr>) -> Expr {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Expr::False => {}
                Expr::True => return Expr::True,
                Expr::Or(inner) => out.extend(inner),
                p => out.push(p),
            }
        }
        match out.len() {
            0 => Expr::False,
            1 => out.pop().unwrap(),
            _ => Expr::Or(out),
        }
    }

    pub fn max_level(&self) -> Option<usize> {
        match self {
            Expr::True | Expr::False => None,
            Expr::Atom(l, _) => Some(*l),
            Expr::Not(e) => e.max_level(),
            Expr::And(v) | Expr::Or(v) => v.iter().filter_map(Expr::max_level).max(),
        }
    }

    pub fn eval(&self, stack: &dyn Fn(usize) -> Vec<u64>) -> bool {
        match self {
            Expr::True => true,
            Expr::False => false,
            Expr::Atom(l, q) => q.contains_unchecked(&stack(*l)),
            Expr::Not(e) => !e.eval(stack),
            Expr::And(v) => v.iter().all(|e| e.eval(stack)),
            Expr::Or(v) => v.iter().any(|e| e.eval(stack)),
        }
    }

    fn atoms_at(&self, level: usize, out: &mut Vec<SymbolicSet>) {
        match self {
            Expr::Atom(l, q) if *l == level => {
                if !out.contains(q) {
                    out.push(q.clone());
                }
            }
            Expr::Not(e) => e.atoms_at(level, out),
            Expr::And(v) | Expr::Or(v) => v.iter().for_each(|e| e.atoms_at(level, out)),
            _ => {}
        }
    }

    /// Replaces every level-`level` atom by its truth value.
    fn substitute(&self, level: usize, atoms: &[SymbolicSet], truth: &[bool]) -> Expr {
        match self {
            Expr::Atom(l, q) if *l == level => {
                let idx = atoms.iter().position(|a| a == q).expect("atom collected");
                if truth[idx] {
                    Expr::True
                } else {
                    Expr::False
                }
            }
            Expr::Not(e) => Expr::negate(e.substitute(level, atoms, truth)),
            Expr::And(v) => Expr::and(v.iter().map(|e| e.substitute(level, atoms, truth)).collect()),
            Expr::Or(v) => Expr::or(v.iter().map(|e| e.substitute(level, atoms, truth)).collect()),
            e => e.clone(),
        }
    }
}

/// A block formula on `ω × ω² × … × ω^{n+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockFormula {
    levels: usize,
    expr: Expr,
}

impl BlockFormula {
    /// `n` is the top level; atoms must not exceed it.
    pub fn new(n: usize, expr: Expr) -> Result<BlockFormula> {
        if let Some(l) = expr.max_level() {
            if l > n {
                return Err(Error::Bounds(format!(
                    "atom at level {l} in a formula over levels 0..={n}"
                )));
            }
        }
        Ok(BlockFormula { levels: n, expr })
    }

    pub fn top_level(&self) -> usize {
        self.levels
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn eval(&self, tuples: &[Vec<u64>]) -> Result<bool> {
        if tuples.len() != self.levels + 1 {
            return Err(Error::Arity {
                expected: self.levels + 1,
                found: tuples.len(),
            });
        }
        Ok(self.expr.eval(&|l| tuples[l].clone()))
    }
}

/// Splits ω^{level+1} into the nonempty boolean regions cut out by `atoms`.
fn regions(level: usize, atoms: &[SymbolicSet]) -> Result<Vec<(SymbolicSet, Vec<bool>)>> {
    let cap = Limits::current().region_cap;
    let mut out = vec![(SymbolicSet::full(level + 1), Vec::new())];
    for q in atoms {
        let mut next = Vec::with_capacity(out.len() * 2);
        for (r, truth) in out {
            let inside = r.intersection(q)?;
            let outside = r.difference(q)?;
            if !inside.is_empty() {
                let mut t = truth.clone();
                t.push(true);
                next.push((inside, t));
            }
            if !outside.is_empty() {
                let mut t = truth;
                t.push(false);
                next.push((outside, t));
            }
        }
        if next.len() > cap {
            return Err(Error::Resource {
                what: "boolean region count",
                cap,
            });
        }
        out = next;
    }
    Ok(out)
}

/// Smallest rectangle data for the levels `level..=top`: `Some(B'_level, …)`
/// when the formula contains a product of dual-filter sets.
fn up_closure(expr: &Expr, level: usize, top: usize) -> Result<Option<Vec<SymbolicSet>>> {
    let mut atoms = Vec::new();
    expr.atoms_at(level, &mut atoms);
    let mut good = SymbolicSet::empty(level + 1);
    let mut later: Vec<SymbolicSet> = (level + 1..=top).map(|k| SymbolicSet::empty(k + 1)).collect();
    for (region, truth) in regions(level, &atoms)? {
        let residual = expr.substitute(level, &atoms, &truth);
        let witness = match residual {
            Expr::True => Some(Vec::new()),
            Expr::False => None,
            _ if level == top => None,
            r => up_closure(&r, level + 1, top)?,
        };
        if let Some(w) = witness {
            good = good.union(&region)?;
            for (acc, b) in later.iter_mut().zip(w) {
                *acc = acc.union(&b)?;
            }
        }
    }
    let small = good.complement()?;
    if !small.fin_member()? {
        return Ok(None);
    }
    let mut out = vec![small];
    out.extend(later);
    Ok(Some(out))
}

/// Decides whether `F` contains `∏_l (B'_l)^c` with every `B'_l ∈ Fin^{l+1}`,
/// returning the least such `B'` (each `B'_l` is the complement of the union
/// of the regions from which the residual formula is still good).
pub fn upfamily_member(f: &BlockFormula) -> Result<Option<Vec<SymbolicSet>>> {
    up_closure(&f.expr, 0, f.levels)
}

/// Exact `φ_n(A)` for `n ≥ maxlevel(A)`.
pub fn phi(a: &CertifiedSet, n: usize) -> Result<BlockFormula> {
    if n < a.maxlevel() {
        return Err(Error::Precondition(format!(
            "phi at n = {n} below the maximal level {}",
            a.maxlevel()
        )));
    }
    phi_truncated(a, n)
}

/// `φ_n(A)` for any `n`. Pieces reaching above `n` meet every block
/// `X_{s_0} ∩ … ∩ X_{s_n}` matching their low levels in an infinite set, so
/// a nonempty high bundle contributes `false` and a multicell contributes
/// only its atoms at levels `≤ n`.
pub fn phi_truncated(a: &CertifiedSet, n: usize) -> Result<BlockFormula> {
    let mut parts = Vec::new();
    for (&l, b) in &a.bundles {
        parts.push(if l <= n {
            Expr::negate(Expr::Atom(l, b.clone()))
        } else {
            Expr::False
        });
    }
    for u in &a.multicells {
        let low: Multicell = u.range(..=n).map(|(&l, t)| (l, t.clone())).collect();
        parts.push(Expr::negate(multicell_expr(&low)));
    }
    BlockFormula::new(n, Expr::and(parts))
}

pub fn jn_member(a: &CertifiedSet, n: usize) -> Result<bool> {
    Ok(upfamily_member(&phi_truncated(a, n)?)?.is_some())
}

/// `Fin'_ω` membership, decided at `n = maxlevel(A)` where the hierarchy has
/// stabilised: `φ_{n+1}(A) = φ_n(A) × ω^{n+2}`.
pub fn finprime_member(a: &CertifiedSet) -> Result<Option<Certificate>> {
    let n = a.maxlevel();
    Ok(upfamily_member(&phi(a, n)?)?.map(|smalls| Certificate::Rectangle { level: n, smalls }))
}

/// Generators covering `A` up to its finite part, read off the rectangle:
/// a point of `A` outside the finite part lies in a bundle or multicell, so
/// its cell stack falsifies `φ_n(A)` and hits some `B'_l`.
pub fn decomposition_certificate(a: &CertifiedSet) -> Result<Certificate> {
    let Some(Certificate::Rectangle { smalls, .. }) = finprime_member(a)? else {
        return Err(Error::Precondition("set is not in Fin'_omega".into()));
    };
    let generators = smalls.into_iter().enumerate().filter(|(_, b)| !b.is_empty()).collect();
    Ok(Certificate::Decomposition {
        generators,
        remainder: a.finite.clone(),
    })
}

/// Checks a rectangle against `A` directly: every `B'_l` is small, every
/// bundle `(l, B)` has `B ⊆ B'_l`, and every multicell has some level whose
/// tuple lies in `B'_l`.
pub fn validate_rectangle(a: &CertifiedSet, n: usize, smalls: &[SymbolicSet]) -> Result<bool> {
    if smalls.len() != n + 1 || n < a.maxlevel() {
        return Ok(false);
    }
    for (l, b) in smalls.iter().enumerate() {
        if b.level() != l + 1 || !b.fin_member()? {
            return Ok(false);
        }
    }
    for (&l, b) in &a.bundles {
        if !b.is_subset(&smalls[l])? {
            return Ok(false);
        }
    }
    for u in &a.multicells {
        if !u.iter().any(|(&l, t)| smalls[l].contains_unchecked(t)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks that generators plus the remainder cover every member of `A` below `bound`.
pub fn validate_decomposition(
    a: &CertifiedSet,
    generators: &[(usize, SymbolicSet)],
    remainder: &BTreeSet<u64>,
    bound: u64,
) -> Result<bool> {
    for (l, b) in generators {
        if b.level() != l + 1 || !b.fin_member()? {
            return Ok(false);
        }
    }
    Ok(a.enumerate_below(bound).into_iter().all(|m| {
        remainder.contains(&m)
            || generators
                .iter()
                .any(|(l, b)| b.contains_unchecked(&cell_of(a.family, m, *l)))
    }))
}

/// Index of a tuple under the bit-interleaving bijection ω^d → ω.
pub fn morton_index(t: &[u64]) -> BigUint {
    let d = t.len();
    let mut out = BigUint::default();
    for (r, &v) in t.iter().enumerate() {
        for b in 0..64 {
            if v >> b & 1 == 1 {
                out.set_bit((b * d + r) as u64, true);
            }
        }
    }
    out
}

/// Splits a prefix of a set `B` into the parts `C` and `D` of the covering
/// argument: an element with cells `(s_0, …, s_n)` goes to `C` when
/// `g⁻¹(s_0, …, s_{n−1}) ≤ h⁻¹(s_n)` and to `D` otherwise, with `h` and `g`
/// the interleaving bijections onto ω^{n+1} and ω × … × ω^n.
pub fn split_small(family: FamilyId, prefix: &[u64], n: usize) -> (Vec<u64>, Vec<u64>) {
    let mut c = Vec::new();
    let mut d = Vec::new();
    for &m in prefix {
        let low: Vec<u64> = (0..n).flat_map(|l| cell_of(family, m, l)).collect();
        let top = cell_of(family, m, n);
        if morton_index(&low) <= morton_index(&top) {
            c.push(m);
        } else {
            d.push(m);
        }
    }
    (c, d)
}

/// `{x_0 ∈ vals}` at the given level.
pub fn first_coord_in(level: usize, vals: &[u64]) -> SymbolicSet {
    SymbolicSet::atom(level, 0, Pred::in_set(vals.iter().copied())).expect("level >= 1")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> SymbolicSet {
        SymbolicSet::atom(2, 0, Pred::not_in([0])).unwrap()
    }

    fn b5() -> CertifiedSet {
        CertifiedSet::bundle(FamilyId::A, 0, first_coord_in(1, &[5])).unwrap()
    }

    #[test]
    fn contains_and_union() {
        let m = crate::partition::enumerate_intersection(FamilyId::A, &BTreeMap::from([(0, vec![5])]), 1).unwrap()[0];
        assert!(b5().certified_contains(m));
        let b6 = CertifiedSet::bundle(FamilyId::A, 0, first_coord_in(1, &[6])).unwrap();
        let u = b5().certified_union(&b6).unwrap();
        assert_eq!(u.bundles()[&0], first_coord_in(1, &[5, 6]));
        let other = CertifiedSet::finite_set(FamilyId::B, BTreeSet::new());
        assert!(b5().certified_union(&other).is_err());
    }

    #[test]
    fn phi_examples() {
        let f = phi(&b5(), 1).unwrap();
        assert_eq!(f.expr(), &Expr::negate(Expr::Atom(0, SymbolicSet::point(&[5]))));
        let fin = CertifiedSet::finite_set(FamilyId::A, (0..10).collect());
        assert_eq!(phi(&fin, 0).unwrap().expr(), &Expr::True);
        let mc = CertifiedSet::multicell(FamilyId::A, BTreeMap::from([(0, vec![1]), (2, vec![0, 0, 2])])).unwrap();
        let f = phi(&mc, 2).unwrap();
        assert_eq!(
            f.expr(),
            &Expr::negate(Expr::and(vec![
                Expr::Atom(0, SymbolicSet::point(&[1])),
                Expr::Atom(2, SymbolicSet::point(&[0, 0, 2])),
            ]))
        );
        assert!(phi(&mc, 1).is_err());
    }

    #[test]
    fn upfamily_examples() {
        let f = BlockFormula::new(0, Expr::negate(Expr::Atom(0, first_coord_in(1, &[5])))).unwrap();
        assert_eq!(upfamily_member(&f).unwrap().unwrap(), vec![first_coord_in(1, &[5])]);

        let q = SymbolicSet::atom(2, 1, Pred::in_set([3])).unwrap();
        let f = BlockFormula::new(1, Expr::negate(Expr::Atom(1, q.clone()))).unwrap();
        let w = upfamily_member(&f).unwrap().unwrap();
        assert!(w[0].is_empty());
        assert_eq!(w[1], q);

        let f = BlockFormula::new(1, Expr::negate(Expr::Atom(1, f2()))).unwrap();
        assert!(upfamily_member(&f).unwrap().is_none());

        let f = BlockFormula::new(2, Expr::True).unwrap();
        let w = upfamily_member(&f).unwrap().unwrap();
        assert_eq!(w.len(), 3);
        assert!(w.iter().all(SymbolicSet::is_empty));
    }

    #[test]
    fn jn_examples() {
        assert!(jn_member(&b5(), 0).unwrap());
        let b = CertifiedSet::bundle(FamilyId::A, 1, first_coord_in(2, &[3])).unwrap();
        assert!(jn_member(&b, 1).unwrap());
        let bad = CertifiedSet::bundle(FamilyId::A, 1, f2()).unwrap();
        for n in 0..=3 {
            assert!(!jn_member(&bad, n).unwrap());
        }
    }

    #[test]
    fn finprime_examples() {
        let a = b5()
            .certified_union(&CertifiedSet::finite_set(FamilyId::A, (0..10).collect()))
            .unwrap();
        let cert = finprime_member(&a).unwrap().unwrap();
        let Certificate::Rectangle { level, smalls } = &cert else {
            panic!("expected a rectangle")
        };
        assert_eq!(*level, 0);
        assert!(validate_rectangle(&a, 0, smalls).unwrap());

        let omega = CertifiedSet::bundle(FamilyId::A, 0, SymbolicSet::full(1)).unwrap();
        assert!(finprime_member(&omega).unwrap().is_none());
        let bad = CertifiedSet::bundle(FamilyId::A, 1, f2()).unwrap();
        assert!(finprime_member(&bad).unwrap().is_none());
        let cell = CertifiedSet::cell(FamilyId::B, &[1, 4, 2]).unwrap();
        assert!(finprime_member(&cell).unwrap().is_some());
    }

    #[test]
    fn decomposition_examples() {
        let Certificate::Decomposition { generators, remainder } = decomposition_certificate(&b5()).unwrap() else {
            panic!("expected a decomposition")
        };
        assert_eq!(generators, vec![(0, SymbolicSet::point(&[5]))]);
        assert!(remainder.is_empty());

        let two = b5()
            .certified_union(&CertifiedSet::bundle(FamilyId::A, 1, first_coord_in(2, &[0])).unwrap())
            .unwrap();
        let Certificate::Decomposition { generators, remainder } = decomposition_certificate(&two).unwrap() else {
            panic!("expected a decomposition")
        };
        assert_eq!(generators.len(), 2);
        assert!(validate_decomposition(&two, &generators, &remainder, 10_000).unwrap());

        let fin = CertifiedSet::finite_set(FamilyId::A, [3, 9].into());
        let Certificate::Decomposition { generators, remainder } = decomposition_certificate(&fin).unwrap() else {
            panic!("expected a decomposition")
        };
        assert!(generators.is_empty());
        assert_eq!(remainder, BTreeSet::from([3, 9]));

        let omega = CertifiedSet::bundle(FamilyId::A, 0, SymbolicSet::full(1)).unwrap();
        assert!(decomposition_certificate(&omega).is_err());
    }

    #[test]
    fn split_small_examples() {
        assert_eq!(split_small(FamilyId::A, &[], 2), (vec![], vec![]));
        let prefix: Vec<u64> = (0..500).collect();
        let (c, d) = split_small(FamilyId::A, &prefix, 0);
        assert_eq!(c, prefix);
        assert!(d.is_empty());
        let (c, d) = split_small(FamilyId::A, &prefix, 1);
        assert_eq!(c.len() + d.len(), prefix.len());
    }

    #[test]
    fn morton_index_interleaves() {
        assert_eq!(morton_index(&[]), BigUint::default());
        assert_eq!(morton_index(&[1, 0]), BigUint::from(1u32));
        assert_eq!(morton_index(&[0, 1]), BigUint::from(2u32));
        assert_eq!(morton_index(&[3, 0]), BigUint::from(5u32));
    }
}
