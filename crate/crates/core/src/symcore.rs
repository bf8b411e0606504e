//! Coordinate-constrained subsets of ω^n and the Fin^n membership procedure.
//!
//! A [`SymbolicSet`] is a finite union of conjuncts. Each conjunct constrains
//! some coordinates to lie in (or outside of) an explicit finite set of
//! naturals; unconstrained coordinates range over all of ω. The class is
//! closed under the boolean operations and under sections, projections onto
//! trailing coordinates and their preimages, and every question asked of it
//! here is decided exactly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::limits::Limits;

/// Constraint on a single coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pred {
    In(BTreeSet<u64>),
    NotIn(BTreeSet<u64>),
}

impl Pred {
    pub fn in_set<I: IntoIterator<Item = u64>>(values: I) -> Pred {
        Pred::In(values.into_iter().collect())
    }

    pub fn not_in<I: IntoIterator<Item = u64>>(values: I) -> Pred {
        Pred::NotIn(values.into_iter().collect())
    }

    pub fn test(&self, v: u64) -> bool {
        match self {
            Pred::In(f) => f.contains(&v),
            Pred::NotIn(f) => !f.contains(&v),
        }
    }

    /// `NotIn(∅)`: no constraint at all.
    pub fn is_trivial(&self) -> bool {
        matches!(self, Pred::NotIn(f) if f.is_empty())
    }

    /// `In(∅)`: nothing satisfies it.
    pub fn is_unsat(&self) -> bool {
        matches!(self, Pred::In(f) if f.is_empty())
    }

    pub fn negate(&self) -> Pred {
        match self {
            Pred::In(f) => Pred::NotIn(f.clone()),
            Pred::NotIn(f) => Pred::In(f.clone()),
        }
    }

    pub fn and(&self, other: &Pred) -> Pred {
        use Pred::*;
        match (self, other) {
            (In(a), In(b)) => In(a.intersection(b).copied().collect()),
            (In(a), NotIn(b)) | (NotIn(b), In(a)) => In(a.difference(b).copied().collect()),
            (NotIn(a), NotIn(b)) => NotIn(a.union(b).copied().collect()),
        }
    }

    pub fn or(&self, other: &Pred) -> Pred {
        use Pred::*;
        match (self, other) {
            (In(a), In(b)) => In(a.union(b).copied().collect()),
            (In(a), NotIn(b)) | (NotIn(b), In(a)) => NotIn(b.difference(a).copied().collect()),
            (NotIn(a), NotIn(b)) => NotIn(a.intersection(b).copied().collect()),
        }
    }

    /// Set inclusion between the denoted subsets of ω.
    pub fn is_subset(&self, other: &Pred) -> bool {
        use Pred::*;
        match (self, other) {
            (In(a), In(b)) => a.is_subset(b),
            (In(a), NotIn(b)) => a.is_disjoint(b),
            (NotIn(_), In(_)) => false,
            (NotIn(a), NotIn(b)) => b.is_subset(a),
        }
    }

    /// Least satisfying value. Panics on an unsatisfiable predicate.
    pub fn least(&self) -> u64 {
        self.least_avoiding(&BTreeSet::new())
            .expect("least() on unsatisfiable predicate")
    }

    /// Least satisfying value outside `used`, if any.
    pub fn least_avoiding(&self, used: &BTreeSet<u64>) -> Option<u64> {
        match self {
            Pred::In(f) => f.iter().copied().find(|v| !used.contains(v)),
            Pred::NotIn(f) => (0u64..).find(|v| !f.contains(v) && !used.contains(v)),
        }
    }

    pub fn constants(&self) -> &BTreeSet<u64> {
        match self {
            Pred::In(f) | Pred::NotIn(f) => f,
        }
    }
}

/// Coordinate index ↦ predicate. Absent coordinates are unconstrained.
pub type Conjunct = BTreeMap<usize, Pred>;

fn conjunct_and(a: &Conjunct, b: &Conjunct) -> Option<Conjunct> {
    let mut out = a.clone();
    for (k, p) in b {
        let merged = match out.get(k) {
            Some(q) => q.and(p),
            None => p.clone(),
        };
        if merged.is_unsat() {
            return None;
        }
        out.insert(*k, merged);
    }
    Some(out)
}

/// Syntactic inclusion; exact for satisfiable conjuncts.
fn conjunct_subset(a: &Conjunct, b: &Conjunct) -> bool {
    b.iter().all(|(k, pb)| a.get(k).is_some_and(|pa| pa.is_subset(pb)))
}

/// `a ∖ b` as a disjoint list of conjuncts.
fn conjunct_minus(a: &Conjunct, b: &Conjunct) -> Vec<Conjunct> {
    let mut pieces = Vec::new();
    let mut prefix = a.clone();
    for (k, pb) in b {
        let neg = pb.negate();
        let here = match prefix.get(k) {
            Some(pa) => pa.and(&neg),
            None => neg,
        };
        if !here.is_unsat() {
            let mut piece = prefix.clone();
            if here.is_trivial() {
                piece.remove(k);
            } else {
                piece.insert(*k, here);
            }
            pieces.push(piece);
        }
        let keep = match prefix.get(k) {
            Some(pa) => pa.and(pb),
            None => pb.clone(),
        };
        if keep.is_unsat() {
            return pieces;
        }
        prefix.insert(*k, keep);
    }
    pieces
}

fn normalize_conjunct(mut c: Conjunct) -> Option<Conjunct> {
    if c.values().any(Pred::is_unsat) {
        return None;
    }
    c.retain(|_, p| !p.is_trivial());
    Some(c)
}

/// Two conjuncts over the same coordinates that differ in exactly one
/// predicate can be merged into one.
fn try_merge(a: &Conjunct, b: &Conjunct) -> Option<Conjunct> {
    if a.len() != b.len() || !a.keys().eq(b.keys()) {
        return None;
    }
    let mut diff = None;
    for (k, pa) in a {
        if pa != &b[k] {
            if diff.is_some() {
                return None;
            }
            diff = Some(*k);
        }
    }
    let k = diff?;
    let mut out = a.clone();
    let merged = a[&k].or(&b[&k]);
    if merged.is_trivial() {
        out.remove(&k);
    } else {
        out.insert(k, merged);
    }
    Some(out)
}

fn canonicalize(conjuncts: Vec<Conjunct>) -> Vec<Conjunct> {
    let mut cs: Vec<Conjunct> = conjuncts.into_iter().filter_map(normalize_conjunct).collect();
    cs.sort();
    cs.dedup();
    loop {
        let mut changed = false;
        // drop subsumed conjuncts
        let mut i = 0;
        while i < cs.len() {
            let subsumed = (0..cs.len()).any(|j| j != i && conjunct_subset(&cs[i], &cs[j]));
            if subsumed {
                cs.remove(i);
                changed = true;
            } else {
                i += 1;
            }
        }
        // merge conjuncts differing in one coordinate
        let mut i = 0;
        while i < cs.len() {
            let mut j = i + 1;
            while j < cs.len() {
                if let Some(m) = try_merge(&cs[i], &cs[j]) {
                    cs.remove(j);
                    cs[i] = m;
                    changed = true;
                    j = i + 1;
                } else {
                    j += 1;
                }
            }
            i += 1;
        }
        if !changed {
            break;
        }
    }
    cs.sort();
    cs
}

/// A decidable subset of ω^level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolicSet {
    level: usize,
    conjuncts: Vec<Conjunct>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersection,
    Difference,
    Complement,
}

impl SymbolicSet {
    /// Builds a set from raw conjuncts, validating coordinates and bringing
    /// the result to canonical form.
    pub fn new(level: usize, conjuncts: Vec<Conjunct>) -> Result<SymbolicSet> {
        for c in &conjuncts {
            if let Some((&k, _)) = c.iter().next_back() {
                if k >= level {
                    return Err(Error::CoordinateOutOfRange { coord: k, level });
                }
            }
        }
        Ok(SymbolicSet {
            level,
            conjuncts: canonicalize(conjuncts),
        })
    }

    pub fn empty(level: usize) -> SymbolicSet {
        SymbolicSet {
            level,
            conjuncts: Vec::new(),
        }
    }

    pub fn full(level: usize) -> SymbolicSet {
        SymbolicSet {
            level,
            conjuncts: vec![Conjunct::new()],
        }
    }

    /// `{x : x_coord ∈ pred}` at the given level.
    pub fn atom(level: usize, coord: usize, pred: Pred) -> Result<SymbolicSet> {
        SymbolicSet::new(level, vec![Conjunct::from([(coord, pred)])])
    }

    /// The single point `p`.
    pub fn point(p: &[u64]) -> SymbolicSet {
        let c = p.iter().enumerate().map(|(k, &v)| (k, Pred::in_set([v]))).collect();
        SymbolicSet {
            level: p.len(),
            conjuncts: vec![c],
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn conjuncts(&self) -> &[Conjunct] {
        &self.conjuncts
    }

    pub fn contains(&self, p: &[u64]) -> Result<bool> {
        if p.len() != self.level {
            return Err(Error::Arity {
                expected: self.level,
                found: p.len(),
            });
        }
        Ok(self.contains_unchecked(p))
    }

    pub(crate) fn contains_unchecked(&self, p: &[u64]) -> bool {
        self.conjuncts
            .iter()
            .any(|c| c.iter().all(|(&k, pred)| pred.test(p[k])))
    }

    fn same_level(&self, other: &SymbolicSet) -> Result<()> {
        if self.level != other.level {
            return Err(Error::LevelMismatch {
                left: self.level,
                right: other.level,
            });
        }
        Ok(())
    }

    fn capped(level: usize, conjuncts: Vec<Conjunct>) -> Result<SymbolicSet> {
        let cap = Limits::current().conjunct_cap;
        if conjuncts.len() > cap {
            return Err(Error::Resource {
                what: "conjunct count",
                cap,
            });
        }
        Ok(SymbolicSet {
            level,
            conjuncts: canonicalize(conjuncts),
        })
    }

    pub fn union(&self, other: &SymbolicSet) -> Result<SymbolicSet> {
        self.same_level(other)?;
        let mut cs = self.conjuncts.clone();
        cs.extend(other.conjuncts.iter().cloned());
        SymbolicSet::capped(self.level, cs)
    }

    pub fn intersection(&self, other: &SymbolicSet) -> Result<SymbolicSet> {
        self.same_level(other)?;
        let cap = Limits::current().conjunct_cap;
        if self.conjuncts.len().saturating_mul(other.conjuncts.len()) > cap {
            return Err(Error::Resource {
                what: "conjunct count",
                cap,
            });
        }
        let mut cs = Vec::new();
        for a in &self.conjuncts {
            for b in &other.conjuncts {
                if let Some(c) = conjunct_and(a, b) {
                    cs.push(c);
                }
            }
        }
        SymbolicSet::capped(self.level, cs)
    }

    pub fn difference(&self, other: &SymbolicSet) -> Result<SymbolicSet> {
        self.same_level(other)?;
        let cap = Limits::current().conjunct_cap;
        let mut rem = self.conjuncts.clone();
        for d in &other.conjuncts {
            let mut next = Vec::new();
            for c in &rem {
                next.extend(conjunct_minus(c, d));
                if next.len() > cap {
                    return Err(Error::Resource {
                        what: "conjunct count",
                        cap,
                    });
                }
            }
            rem = canonicalize(next);
            if rem.is_empty() {
                break;
            }
        }
        SymbolicSet::capped(self.level, rem)
    }

    pub fn complement(&self) -> Result<SymbolicSet> {
        SymbolicSet::full(self.level).difference(self)
    }

    /// Dispatches a boolean operation; `other` is ignored for complement and
    /// required otherwise.
    pub fn combine(&self, op: SetOp, other: Option<&SymbolicSet>) -> Result<SymbolicSet> {
        let need = || other.ok_or_else(|| Error::Precondition("binary operation needs two operands".into()));
        match op {
            SetOp::Union => self.union(need()?),
            SetOp::Intersection => self.intersection(need()?),
            SetOp::Difference => self.difference(need()?),
            SetOp::Complement => self.complement(),
        }
    }

    /// Exact: canonical conjuncts are always satisfiable.
    pub fn is_empty(&self) -> bool {
        self.conjuncts.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.conjuncts.iter().any(|c| c.is_empty())
    }

    pub fn is_subset(&self, other: &SymbolicSet) -> Result<bool> {
        self.same_level(other)?;
        // cheap syntactic pass first
        if self
            .conjuncts
            .iter()
            .all(|a| other.conjuncts.iter().any(|b| conjunct_subset(a, b)))
        {
            return Ok(true);
        }
        Ok(self.difference(other)?.is_empty())
    }

    pub fn same_set(&self, other: &SymbolicSet) -> Result<bool> {
        Ok(self.is_subset(other)? && other.is_subset(self)?)
    }

    pub fn is_disjoint(&self, other: &SymbolicSet) -> Result<bool> {
        Ok(self.intersection(other)?.is_empty())
    }

    /// The section at first coordinate `v`, as a set at level n−1.
    pub fn section_first(&self, v: u64) -> Result<SymbolicSet> {
        self.need_level(2)?;
        let cs = self
            .conjuncts
            .iter()
            .filter(|c| c.get(&0).is_none_or(|p| p.test(v)))
            .map(|c| shift_down(c, 1))
            .collect();
        Ok(SymbolicSet {
            level: self.level - 1,
            conjuncts: canonicalize(cs),
        })
    }

    /// The section shared by every first coordinate outside the returned
    /// finite exceptional set.
    pub fn generic_section_first(&self) -> Result<(SymbolicSet, BTreeSet<u64>)> {
        self.need_level(2)?;
        let exceptional: BTreeSet<u64> = self
            .conjuncts
            .iter()
            .filter_map(|c| c.get(&0))
            .flat_map(|p| p.constants().iter().copied())
            .collect();
        let cs = self
            .conjuncts
            .iter()
            .filter(|c| !matches!(c.get(&0), Some(Pred::In(_))))
            .map(|c| shift_down(c, 1))
            .collect();
        Ok((
            SymbolicSet {
                level: self.level - 1,
                conjuncts: canonicalize(cs),
            },
            exceptional,
        ))
    }

    fn need_level(&self, min: usize) -> Result<()> {
        if self.level < min {
            return Err(Error::Bounds(format!(
                "operation needs level >= {min}, set has level {}",
                self.level
            )));
        }
        Ok(())
    }

    /// Image under the projection onto the last `i` coordinates.
    pub fn project_last(&self, i: usize) -> Result<SymbolicSet> {
        if i == 0 || i > self.level {
            return Err(Error::Bounds(format!("project_last({i}) on level {}", self.level)));
        }
        Ok(self.project_last_unchecked(i))
    }

    /// Also accepts `i = 0`, where the image is the one-point space or empty.
    pub(crate) fn project_last_unchecked(&self, i: usize) -> SymbolicSet {
        let drop = self.level - i;
        // each canonical predicate is satisfiable, so the dropped
        // coordinates can always be filled in
        let cs = self
            .conjuncts
            .iter()
            .map(|c| c.range(drop..).map(|(&k, p)| (k - drop, p.clone())).collect())
            .collect();
        SymbolicSet {
            level: i,
            conjuncts: canonicalize(cs),
        }
    }

    /// Preimage under the projection of ω^j onto its last `level` coordinates.
    pub fn lift_last(&self, j: usize) -> Result<SymbolicSet> {
        if j < self.level {
            return Err(Error::Bounds(format!(
                "lift_last to level {j} from level {}",
                self.level
            )));
        }
        let shift = j - self.level;
        Ok(SymbolicSet {
            level: j,
            conjuncts: self.conjuncts.iter().map(|c| shift_up(c, shift)).collect(),
        })
    }

    /// Embeds into a higher level, placing this set's coordinates at
    /// `offset..offset+level` and leaving the rest free.
    pub fn embed_at(&self, level: usize, offset: usize) -> Result<SymbolicSet> {
        if offset + self.level > level {
            return Err(Error::Bounds(format!(
                "embedding level {} at offset {offset} into level {level}",
                self.level
            )));
        }
        Ok(SymbolicSet {
            level,
            conjuncts: self.conjuncts.iter().map(|c| shift_up(c, offset)).collect(),
        })
    }

    /// Preimage under `x ↦ (x_{coords[0]}, …, x_{coords[m-1]})` from ω^level.
    /// Coordinates must be distinct.
    pub fn pull_back_select(&self, level: usize, coords: &[usize]) -> Result<SymbolicSet> {
        if coords.len() != self.level {
            return Err(Error::Arity {
                expected: self.level,
                found: coords.len(),
            });
        }
        check_select(level, coords)?;
        let cs = self
            .conjuncts
            .iter()
            .map(|c| c.iter().map(|(&k, p)| (coords[k], p.clone())).collect())
            .collect();
        SymbolicSet::capped(level, cs)
    }

    /// Image under a distinct-coordinate selection out of ω^level.
    pub fn push_forward_select(&self, coords: &[usize]) -> Result<SymbolicSet> {
        check_select(self.level, coords)?;
        let cs = self
            .conjuncts
            .iter()
            .map(|c| {
                coords
                    .iter()
                    .enumerate()
                    .filter_map(|(pos, k)| c.get(k).map(|p| (pos, p.clone())))
                    .collect()
            })
            .collect();
        SymbolicSet::capped(coords.len(), cs)
    }

    /// The full element list when the set is finite.
    pub fn finite_witness(&self) -> Option<Vec<Vec<u64>>> {
        if !self.is_finite() {
            return None;
        }
        let mut out = BTreeSet::new();
        for c in &self.conjuncts {
            let axes: Vec<Vec<u64>> = (0..self.level)
                .map(|k| match &c[&k] {
                    Pred::In(f) => f.iter().copied().collect(),
                    Pred::NotIn(_) => unreachable!("finite conjuncts use In everywhere"),
                })
                .collect();
            for_each_product(&axes, |p| {
                out.insert(p.to_vec());
            });
        }
        Some(out.into_iter().collect())
    }

    /// Syntactic finiteness: every conjunct pins every coordinate to a finite set.
    pub fn is_finite(&self) -> bool {
        self.conjuncts
            .iter()
            .all(|c| (0..self.level).all(|k| matches!(c.get(&k), Some(Pred::In(_)))))
    }

    /// All members with every coordinate below `bound`, in lexicographic order.
    pub fn enumerate(&self, bound: u64) -> Vec<Vec<u64>> {
        let mut out = BTreeSet::new();
        for c in &self.conjuncts {
            let axes: Vec<Vec<u64>> = (0..self.level)
                .map(|k| match c.get(&k) {
                    Some(p) => (0..bound).filter(|&v| p.test(v)).collect(),
                    None => (0..bound).collect(),
                })
                .collect();
            for_each_product(&axes, |p| {
                out.insert(p.to_vec());
            });
        }
        out.into_iter().collect()
    }

    /// Exact membership in Fin^level.
    ///
    /// Level 1: finite. Higher levels: all but the finitely many exceptional
    /// first-coordinate sections coincide with the generic section, so the
    /// set is small iff the generic section is small one level down.
    pub fn fin_member(&self) -> Result<bool> {
        let mut current = self.clone();
        loop {
            match current.level {
                0 => return Err(Error::Bounds("Fin^0 is not defined".into())),
                1 => return Ok(current.is_finite()),
                _ => current = current.generic_section_first()?.0,
            }
        }
    }

    /// Largest constant mentioned by any predicate.
    pub fn max_constant(&self) -> Option<u64> {
        self.conjuncts
            .iter()
            .flat_map(|c| c.values())
            .filter_map(|p| p.constants().iter().next_back().copied())
            .max()
    }

    /// Lexicographically least member.
    pub fn least_point(&self) -> Option<Vec<u64>> {
        self.conjuncts
            .iter()
            .map(|c| {
                (0..self.level)
                    .map(|k| c.get(&k).map_or(0, Pred::least))
                    .collect::<Vec<u64>>()
            })
            .min()
    }

    /// A member whose coordinates are pairwise distinct, chosen greedily
    /// (least admissible unused value per coordinate) in the first conjunct
    /// that allows it.
    pub fn distinct_point(&self) -> Option<Vec<u64>> {
        self.conjuncts.iter().find_map(|c| {
            let mut used = BTreeSet::new();
            let mut p = Vec::with_capacity(self.level);
            for k in 0..self.level {
                let v = match c.get(&k) {
                    Some(pred) => pred.least_avoiding(&used)?,
                    None => (0u64..).find(|v| !used.contains(v)).expect("unbounded"),
                };
                used.insert(v);
                p.push(v);
            }
            Some(p)
        })
    }
}

pub fn fin_member(s: &SymbolicSet, n: usize) -> Result<bool> {
    if s.level() != n {
        return Err(Error::LevelMismatch {
            left: s.level(),
            right: n,
        });
    }
    s.fin_member()
}

pub(crate) fn check_select(level: usize, coords: &[usize]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for &k in coords {
        if k >= level {
            return Err(Error::CoordinateOutOfRange { coord: k, level });
        }
        if !seen.insert(k) {
            return Err(Error::Unsupported(format!("coordinate selection repeats x{k}")));
        }
    }
    Ok(())
}

fn shift_down(c: &Conjunct, by: usize) -> Conjunct {
    c.range(by..).map(|(&k, p)| (k - by, p.clone())).collect()
}

fn shift_up(c: &Conjunct, by: usize) -> Conjunct {
    c.iter().map(|(&k, p)| (k + by, p.clone())).collect()
}

pub(crate) fn for_each_product(axes: &[Vec<u64>], mut f: impl FnMut(&[u64])) {
    if axes.iter().any(|a| a.is_empty()) {
        return;
    }
    let mut idx = vec![0usize; axes.len()];
    let mut cur: Vec<u64> = axes.iter().map(|a| a[0]).collect();
    loop {
        f(&cur);
        let mut k = axes.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < axes[k].len() {
                cur[k] = axes[k][idx[k]];
                break;
            }
            idx[k] = 0;
            cur[k] = axes[k][0];
        }
    }
}

fn write_values(f: &mut fmt::Formatter<'_>, vals: &BTreeSet<u64>) -> fmt::Result {
    write!(f, "{{")?;
    for (n, v) in vals.iter().enumerate() {
        if n > 0 {
            write!(f, ",")?;
        }
        write!(f, "{v}")?;
    }
    write!(f, "}}")
}

pub(crate) fn fmt_conjunct(f: &mut fmt::Formatter<'_>, c: &Conjunct) -> fmt::Result {
    if c.is_empty() {
        return write!(f, "all");
    }
    for (n, (k, p)) in c.iter().enumerate() {
        if n > 0 {
            write!(f, " & ")?;
        }
        match p {
            Pred::In(vals) => {
                write!(f, "x{k} in ")?;
                write_values(f, vals)?;
            }
            Pred::NotIn(vals) => {
                write!(f, "x{k} notin ")?;
                write_values(f, vals)?;
            }
        }
    }
    Ok(())
}

/// Prints the expression part of the text form, e.g.
/// `x0 in {1,2} & x1 notin {3} | x0 in {5}`; `all` and `none` for the
/// trivial sets.
impl fmt::Display for SymbolicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conjuncts.is_empty() {
            return write!(f, "none");
        }
        for (n, c) in self.conjuncts.iter().enumerate() {
            if n > 0 {
                write!(f, " | ")?;
            }
            fmt_conjunct(f, c)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom_in(level: usize, k: usize, vals: &[u64]) -> SymbolicSet {
        SymbolicSet::atom(level, k, Pred::in_set(vals.iter().copied())).unwrap()
    }

    fn atom_not_in(level: usize, k: usize, vals: &[u64]) -> SymbolicSet {
        SymbolicSet::atom(level, k, Pred::not_in(vals.iter().copied())).unwrap()
    }

    #[test]
    fn contains_examples() {
        let s = atom_in(2, 0, &[0]);
        assert!(s.contains(&[0, 7]).unwrap());
        assert!(!s.contains(&[1, 7]).unwrap());
        let f2 = atom_not_in(2, 0, &[0]);
        assert!(!f2.contains(&[0, 3]).unwrap());
        assert_eq!(s.contains(&[0]), Err(Error::Arity { expected: 2, found: 1 }));
    }

    #[test]
    fn combine_examples() {
        let a = atom_in(1, 0, &[1]);
        let b = atom_not_in(1, 0, &[1]);
        assert!(a.intersection(&b).unwrap().is_empty());

        let f2 = atom_not_in(2, 0, &[0]);
        assert_eq!(f2.complement().unwrap(), atom_in(2, 0, &[0]));

        let u = atom_in(1, 0, &[1, 2]).union(&atom_in(1, 0, &[2, 3])).unwrap();
        assert_eq!(u, atom_in(1, 0, &[1, 2, 3]));

        assert!(matches!(a.union(&f2), Err(Error::LevelMismatch { left: 1, right: 2 })));
    }

    #[test]
    fn subset_examples() {
        let s = atom_in(2, 0, &[1]).intersection(&atom_in(2, 1, &[2])).unwrap();
        assert!(s.is_subset(&atom_in(2, 0, &[1, 3])).unwrap());
        let f2 = atom_not_in(2, 0, &[0]);
        assert!(!SymbolicSet::full(2).is_subset(&f2).unwrap());
    }

    #[test]
    fn section_examples() {
        let s = atom_in(2, 0, &[0, 1]).intersection(&atom_not_in(2, 1, &[2])).unwrap();
        let (g, ex) = s.generic_section_first().unwrap();
        assert!(g.is_empty());
        assert_eq!(ex, BTreeSet::from([0, 1]));
        assert_eq!(s.section_first(1).unwrap(), atom_not_in(1, 0, &[2]));

        let (g, ex) = atom_in(2, 1, &[7]).generic_section_first().unwrap();
        assert_eq!(g, atom_in(1, 0, &[7]));
        assert!(ex.is_empty());

        let (g, ex) = SymbolicSet::full(2).generic_section_first().unwrap();
        assert!(g.is_full());
        assert!(ex.is_empty());

        assert!(atom_in(1, 0, &[1]).section_first(0).is_err());
    }

    #[test]
    fn projection_examples() {
        assert!(atom_in(2, 0, &[0]).project_last(1).unwrap().is_full());
        assert_eq!(atom_in(2, 1, &[5]).project_last(1).unwrap(), atom_in(1, 0, &[5]));
        assert_eq!(atom_in(1, 0, &[0]).lift_last(3).unwrap(), atom_in(3, 2, &[0]));
        assert!(atom_in(2, 0, &[0]).project_last(3).is_err());
        assert!(atom_in(2, 0, &[0]).lift_last(1).is_err());
    }

    #[test]
    fn witness_and_enumerate_examples() {
        let s = atom_in(2, 0, &[1]).intersection(&atom_in(2, 1, &[2, 3])).unwrap();
        assert_eq!(s.finite_witness().unwrap(), vec![vec![1, 2], vec![1, 3]]);
        assert!(atom_not_in(1, 0, &[1]).finite_witness().is_none());
        let f2 = atom_not_in(2, 0, &[0]);
        assert_eq!(f2.enumerate(2), vec![vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn fin_member_examples() {
        assert!(atom_in(1, 0, &[1, 2, 3]).fin_member().unwrap());
        assert!(atom_in(2, 0, &[0]).fin_member().unwrap());
        assert!(!atom_not_in(2, 0, &[0]).fin_member().unwrap());
        // B×ω with B = {0,1} at level 1
        let b = atom_in(1, 0, &[0, 1]);
        let b_times_omega = b.embed_at(2, 0).unwrap();
        assert!(b_times_omega.fin_member().unwrap());
        assert!(!SymbolicSet::full(3).fin_member().unwrap());
        assert!(fin_member(&b, 2).is_err());
    }

    #[test]
    fn select_pull_back_and_push_forward() {
        // first-coordinate selection out of ω^3
        let s = atom_in(1, 0, &[4]);
        let pre = s.pull_back_select(3, &[0]).unwrap();
        assert_eq!(pre, atom_in(3, 0, &[4]));
        let img = pre.push_forward_select(&[0]).unwrap();
        assert_eq!(img, s);
        assert!(s.pull_back_select(3, &[3]).is_err());
    }

    #[test]
    fn least_and_distinct_points() {
        let f2 = atom_not_in(2, 0, &[0]);
        assert_eq!(f2.least_point(), Some(vec![1, 0]));
        assert_eq!(SymbolicSet::full(3).distinct_point(), Some(vec![0, 1, 2]));
        assert_eq!(SymbolicSet::empty(2).least_point(), None);
    }

    #[test]
    fn display_forms() {
        let s = atom_in(2, 0, &[1, 2])
            .intersection(&atom_not_in(2, 1, &[3]))
            .unwrap()
            .union(&atom_in(2, 0, &[5]))
            .unwrap();
        assert_eq!(s.conjuncts().len(), 2);
        assert_eq!(SymbolicSet::full(2).to_string(), "all");
        assert_eq!(SymbolicSet::empty(2).to_string(), "none");
        assert_eq!(atom_not_in(2, 0, &[0]).to_string(), "x0 notin {0}");
    }

    #[test]
    fn resource_cap_reported() {
        // 200 diagonal points squared exceeds the default conjunct cap
        let mut diag = SymbolicSet::empty(2);
        for v in 0..200 {
            diag = diag.union(&SymbolicSet::point(&[v, v])).unwrap();
        }
        assert_eq!(diag.conjuncts().len(), 200);
        let shifted = diag.lift_last(3).unwrap().union(&SymbolicSet::empty(3)).unwrap();
        let other = diag.embed_at(3, 0).unwrap();
        let err = shifted.intersection(&other).unwrap_err();
        assert!(err.is_resource());
    }
}
