//! Subsets of the disjoint sum Σ_{j≥1} ω^j, maps between the spaces, and
//! membership in `Fin_ω` (the inductive limit of the Fubini powers along
//! last-coordinate projections) and in Katětov's `Fin^ω`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::symcore::{check_select, Conjunct, SetOp, SymbolicSet};

/// A subset of Σ_{j≥1} ω^j.
///
/// Summands below `threshold` are stored explicitly (absent = empty). From
/// `threshold` on, summand `j` is the instantiation of `pattern`, a set at
/// level `head_width + tail_width` whose first `head_width` coordinates
/// constrain the first coordinates of ω^j and whose remaining coordinates
/// constrain the last `tail_width` coordinates. The middle is free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SumSymbolicSet {
    exceptional: BTreeMap<usize, SymbolicSet>,
    head_width: usize,
    tail_width: usize,
    pattern: SymbolicSet,
    threshold: usize,
}

impl SumSymbolicSet {
    pub fn new(
        exceptional: BTreeMap<usize, SymbolicSet>,
        head_width: usize,
        tail_width: usize,
        pattern: SymbolicSet,
        threshold: usize,
    ) -> Result<SumSymbolicSet> {
        if pattern.level() != head_width + tail_width {
            return Err(Error::LevelMismatch {
                left: pattern.level(),
                right: head_width + tail_width,
            });
        }
        for (&j, s) in &exceptional {
            if j == 0 {
                return Err(Error::Bounds("summand indices start at 1".into()));
            }
            if s.level() != j {
                return Err(Error::LevelMismatch {
                    left: s.level(),
                    right: j,
                });
            }
        }
        let max_exc = exceptional.keys().next_back().map_or(0, |j| j + 1);
        if threshold < (head_width + tail_width).max(max_exc).max(1) {
            return Err(Error::Precondition(format!(
                "threshold {threshold} below head+tail width or exceptional summands"
            )));
        }
        let exceptional = exceptional.into_iter().filter(|(_, s)| !s.is_empty()).collect();
        Ok(SumSymbolicSet {
            exceptional,
            head_width,
            tail_width,
            pattern,
            threshold,
        })
    }

    pub fn empty() -> SumSymbolicSet {
        SumSymbolicSet {
            exceptional: BTreeMap::new(),
            head_width: 0,
            tail_width: 0,
            pattern: SymbolicSet::empty(0),
            threshold: 1,
        }
    }

    pub fn full() -> SumSymbolicSet {
        SumSymbolicSet {
            pattern: SymbolicSet::full(0),
            ..SumSymbolicSet::empty()
        }
    }

    /// A set supported on finitely many summands.
    pub fn from_summands(summands: BTreeMap<usize, SymbolicSet>) -> Result<SumSymbolicSet> {
        let threshold = summands.keys().next_back().map_or(1, |j| j + 1);
        SumSymbolicSet::new(summands, 0, 0, SymbolicSet::empty(0), threshold)
    }

    /// Every summand from `from` on is `head × ω^… × tail`; lower summands are empty.
    pub fn template(head: &SymbolicSet, tail: &SymbolicSet, from: usize) -> Result<SumSymbolicSet> {
        let (h, t) = (head.level(), tail.level());
        let pattern = head.embed_at(h + t, 0)?.intersection(&tail.embed_at(h + t, h)?)?;
        SumSymbolicSet::new(BTreeMap::new(), h, t, pattern, from.max(h + t).max(1))
    }

    /// P̄ = Σ_{j≥i} π_{i,j}^{-1}[P] for P at level i.
    pub fn tail_preimage(p: &SymbolicSet) -> Result<SumSymbolicSet> {
        if p.level() == 0 {
            return Err(Error::Bounds("tail preimage needs level >= 1".into()));
        }
        SumSymbolicSet::template(&SymbolicSet::full(0), p, p.level())
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn head_width(&self) -> usize {
        self.head_width
    }

    pub fn tail_width(&self) -> usize {
        self.tail_width
    }

    pub fn pattern(&self) -> &SymbolicSet {
        &self.pattern
    }

    pub fn exceptional(&self) -> &BTreeMap<usize, SymbolicSet> {
        &self.exceptional
    }

    /// Largest constant mentioned anywhere.
    pub fn max_constant(&self) -> Option<u64> {
        self.exceptional
            .values()
            .filter_map(SymbolicSet::max_constant)
            .chain(self.pattern.max_constant())
            .max()
    }

    /// Summand `j` as a set at level `j`.
    pub fn summand_slice(&self, j: usize) -> Result<SymbolicSet> {
        if j == 0 {
            return Err(Error::Bounds("summand indices start at 1".into()));
        }
        if j < self.threshold {
            return Ok(self
                .exceptional
                .get(&j)
                .cloned()
                .unwrap_or_else(|| SymbolicSet::empty(j)));
        }
        self.instantiate(j)
    }

    fn instantiate(&self, j: usize) -> Result<SymbolicSet> {
        let h = self.head_width;
        let offset = j - self.tail_width;
        let cs = self
            .pattern
            .conjuncts()
            .iter()
            .map(|c| {
                c.iter()
                    .map(|(&k, p)| (if k < h { k } else { k - h + offset }, p.clone()))
                    .collect::<Conjunct>()
            })
            .collect();
        SymbolicSet::new(j, cs)
    }

    pub fn sum_contains(&self, j: usize, x: &[u64]) -> Result<bool> {
        if j == 0 {
            return Err(Error::Bounds("summand indices start at 1".into()));
        }
        if x.len() != j {
            return Err(Error::Arity {
                expected: j,
                found: x.len(),
            });
        }
        if j < self.threshold {
            return Ok(self.exceptional.get(&j).is_some_and(|s| s.contains_unchecked(x)));
        }
        let h = self.head_width;
        let mut local = Vec::with_capacity(self.pattern.level());
        local.extend_from_slice(&x[..h]);
        local.extend_from_slice(&x[j - self.tail_width..]);
        Ok(self.pattern.contains_unchecked(&local))
    }

    /// Same set, presented with at least the given widths and threshold.
    fn widen(&self, head: usize, tail: usize, threshold: usize) -> Result<SumSymbolicSet> {
        debug_assert!(head >= self.head_width && tail >= self.tail_width);
        debug_assert!(threshold >= head + tail && threshold >= self.threshold);
        let h0 = self.head_width;
        let shift = head - h0 + (tail - self.tail_width);
        let cs = self
            .pattern
            .conjuncts()
            .iter()
            .map(|c| {
                c.iter()
                    .map(|(&k, p)| (if k < h0 { k } else { k + shift }, p.clone()))
                    .collect::<Conjunct>()
            })
            .collect();
        let pattern = SymbolicSet::new(head + tail, cs)?;
        let mut exceptional = self.exceptional.clone();
        for j in self.threshold..threshold {
            let s = self.instantiate(j)?;
            if !s.is_empty() {
                exceptional.insert(j, s);
            }
        }
        Ok(SumSymbolicSet {
            exceptional,
            head_width: head,
            tail_width: tail,
            pattern,
            threshold,
        })
    }

    fn align(&self, other: &SumSymbolicSet) -> Result<(SumSymbolicSet, SumSymbolicSet)> {
        let h = self.head_width.max(other.head_width);
        let t = self.tail_width.max(other.tail_width);
        let j0 = self.threshold.max(other.threshold).max(h + t);
        Ok((self.widen(h, t, j0)?, other.widen(h, t, j0)?))
    }

    /// Replaces summand `j`, materialising template summands if needed.
    pub fn with_summand(&self, j: usize, s: SymbolicSet) -> Result<SumSymbolicSet> {
        if j == 0 || s.level() != j {
            return Err(Error::LevelMismatch {
                left: s.level(),
                right: j,
            });
        }
        let mut out = if j >= self.threshold {
            self.widen(self.head_width, self.tail_width, j + 1)?
        } else {
            self.clone()
        };
        if s.is_empty() {
            out.exceptional.remove(&j);
        } else {
            out.exceptional.insert(j, s);
        }
        Ok(out)
    }

    pub fn sum_combine(&self, op: SetOp, other: Option<&SumSymbolicSet>) -> Result<SumSymbolicSet> {
        if op == SetOp::Complement {
            let mut exceptional = BTreeMap::new();
            for j in 1..self.threshold {
                let c = self.summand_slice(j)?.complement()?;
                if !c.is_empty() {
                    exceptional.insert(j, c);
                }
            }
            return Ok(SumSymbolicSet {
                exceptional,
                head_width: self.head_width,
                tail_width: self.tail_width,
                pattern: self.pattern.complement()?,
                threshold: self.threshold,
            });
        }
        let other = other.ok_or_else(|| Error::Precondition("binary operation needs two operands".into()))?;
        let (a, b) = self.align(other)?;
        let mut exceptional = BTreeMap::new();
        for j in 1..a.threshold {
            let r = a.summand_slice(j)?.combine(op, Some(&b.summand_slice(j)?))?;
            if !r.is_empty() {
                exceptional.insert(j, r);
            }
        }
        Ok(SumSymbolicSet {
            exceptional,
            head_width: a.head_width,
            tail_width: a.tail_width,
            pattern: a.pattern.combine(op, Some(&b.pattern))?,
            threshold: a.threshold,
        })
    }

    pub fn union(&self, other: &SumSymbolicSet) -> Result<SumSymbolicSet> {
        self.sum_combine(SetOp::Union, Some(other))
    }

    pub fn intersection(&self, other: &SumSymbolicSet) -> Result<SumSymbolicSet> {
        self.sum_combine(SetOp::Intersection, Some(other))
    }

    pub fn difference(&self, other: &SumSymbolicSet) -> Result<SumSymbolicSet> {
        self.sum_combine(SetOp::Difference, Some(other))
    }

    pub fn complement(&self) -> Result<SumSymbolicSet> {
        self.sum_combine(SetOp::Complement, None)
    }

    /// Exact: template summands are products with free middle coordinates,
    /// so they are empty iff the pattern is.
    pub fn is_empty(&self) -> bool {
        self.exceptional.is_empty() && self.pattern.is_empty()
    }

    pub fn is_subset(&self, other: &SumSymbolicSet) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    /// Lowest summand index from which every summand is template-stable
    /// for projections onto `i` coordinates.
    fn projection_horizon(&self, i: usize) -> usize {
        self.threshold.max(self.head_width + i).max(i)
    }

    /// U_i = ⋃_{j≥i} π_{i,j}[M_j].
    ///
    /// For `j ≥ max(threshold, head_width + i)` the head block lies entirely
    /// inside the dropped coordinates and the surviving tail constraints sit
    /// at fixed offsets from the end, so the image no longer depends on `j`.
    pub fn tail_union_projection(&self, i: usize) -> Result<SymbolicSet> {
        if i == 0 {
            return Err(Error::Bounds("projection index starts at 1".into()));
        }
        let mut u = SymbolicSet::empty(i);
        for j in i..=self.projection_horizon(i) {
            u = u.union(&self.summand_slice(j)?.project_last(i)?)?;
        }
        Ok(u)
    }

    /// Largest projection index examined by [`finomega_member`].
    ///
    /// Once `i ≥ max(threshold, head_width + tail_width)` the sets U_i are
    /// the same finite union of pattern shapes padded with free coordinates,
    /// and the Fin^i verdict on them no longer changes.
    pub fn finomega_search_bound(&self) -> usize {
        self.threshold + self.head_width + self.tail_width + 2
    }
}

/// Membership in `Fin_ω`: the least `i` with a dual-filter set `P` such that
/// `M ∩ P̄ = ∅`, returned as `(i, P)`.
pub fn finomega_member(m: &SumSymbolicSet) -> Result<Option<(usize, SymbolicSet)>> {
    finomega_member_upto(m, m.finomega_search_bound())
}

pub fn finomega_member_upto(m: &SumSymbolicSet, bound: usize) -> Result<Option<(usize, SymbolicSet)>> {
    for i in 1..=bound {
        let u = m.tail_union_projection(i)?;
        if u.fin_member()? {
            return Ok(Some((i, u.complement()?)));
        }
    }
    Ok(None)
}

/// Membership in Katětov's `Fin^ω`: only finitely many summands fail to be
/// Fin^j-small. Explicit summands are finite in number; the template
/// summands share one verdict because the generic section of each
/// instantiation is again an instantiation of the same pattern.
pub fn finpow_omega_member(m: &SumSymbolicSet) -> Result<bool> {
    m.summand_slice(m.threshold())?.fin_member()
}

/// Checks a `(i, P)` limit certificate for `M` directly: `P` is in the dual
/// filter of Fin^i and every summand is disjoint from the preimage of `P`.
pub fn validate_finomega_certificate(m: &SumSymbolicSet, i: usize, p: &SymbolicSet) -> Result<bool> {
    if i == 0 || p.level() != i {
        return Ok(false);
    }
    if !p.complement()?.fin_member()? {
        return Ok(false);
    }
    let last = (m.threshold() + i + 2).max(m.head_width() + m.tail_width().max(i) + 1);
    for j in i..=last {
        if !m.summand_slice(j)?.is_disjoint(&p.lift_last(j)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A set in one of the ambient spaces maps act on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Region {
    Level(SymbolicSet),
    Sum(SumSymbolicSet),
}

impl Region {
    pub fn space(&self) -> Space {
        match self {
            Region::Level(s) => Space::Level(s.level()),
            Region::Sum(_) => Space::Sum,
        }
    }

    pub fn as_level(&self) -> Result<&SymbolicSet> {
        match self {
            Region::Level(s) => Ok(s),
            Region::Sum(_) => Err(Error::Unsupported("expected a level set, found a sum set".into())),
        }
    }

    pub fn as_sum(&self) -> Result<&SumSymbolicSet> {
        match self {
            Region::Sum(s) => Ok(s),
            Region::Level(_) => Err(Error::Unsupported("expected a sum set, found a level set".into())),
        }
    }

    pub fn intersection(&self, other: &Region) -> Result<Region> {
        match (self, other) {
            (Region::Level(a), Region::Level(b)) => Ok(Region::Level(a.intersection(b)?)),
            (Region::Sum(a), Region::Sum(b)) => Ok(Region::Sum(a.intersection(b)?)),
            _ => Err(Error::Unsupported("intersection across spaces".into())),
        }
    }

    pub fn contains(&self, e: &Elem) -> Result<bool> {
        match (self, e) {
            (Region::Level(s), Elem::Tuple(x)) => s.contains(x),
            (Region::Sum(s), Elem::Summand(j, x)) => s.sum_contains(*j, x),
            _ => Err(Error::Unsupported("membership across spaces".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Space {
    Level(usize),
    Sum,
}

/// A point of ω^n or of the sum space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Tuple(Vec<u64>),
    Summand(usize, Vec<u64>),
}

/// Finite injective table of a bijection between two levels, known on a prefix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TabulatedBijection {
    from: usize,
    to: usize,
    table: BTreeMap<Vec<u64>, Vec<u64>>,
}

impl TabulatedBijection {
    pub fn new(from: usize, to: usize, entries: Vec<(Vec<u64>, Vec<u64>)>) -> Result<TabulatedBijection> {
        let mut table = BTreeMap::new();
        let mut seen = std::collections::BTreeSet::new();
        for (a, b) in entries {
            if a.len() != from || b.len() != to {
                return Err(Error::Arity {
                    expected: from,
                    found: a.len(),
                });
            }
            if !seen.insert(b.clone()) {
                return Err(Error::Precondition(format!("tabulated map repeats value {b:?}")));
            }
            if table.insert(a.clone(), b).is_some() {
                return Err(Error::Precondition(format!("tabulated map repeats argument {a:?}")));
            }
        }
        Ok(TabulatedBijection { from, to, table })
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<u64>, &Vec<u64>)> {
        self.table.iter()
    }
}

/// Maps between ω^n and the sum space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MapExpr {
    /// π_{to,from}: ω^from → ω^to, the last `to` coordinates.
    LastProj {
        from: usize,
        to: usize,
    },
    /// `x ↦ (x_{coords[0]}, …)` with distinct coordinates.
    Select {
        from: usize,
        coords: Vec<usize>,
    },
    IdentityMap(usize),
    /// π_{i,∞} = Σ_{j≥i} π_{i,j}, defined on the summands from `i` on.
    SumOfLastProj(usize),
    Restrict(Box<MapExpr>, Region),
    /// `Compose(outer, inner)` is `outer ∘ inner`.
    Compose(Box<MapExpr>, Box<MapExpr>),
    Tabulated(TabulatedBijection),
}

impl MapExpr {
    pub fn last_proj(from: usize, to: usize) -> MapExpr {
        MapExpr::LastProj { from, to }
    }

    pub fn compose(outer: MapExpr, inner: MapExpr) -> MapExpr {
        MapExpr::Compose(Box::new(outer), Box::new(inner))
    }

    pub fn restrict(map: MapExpr, domain: Region) -> MapExpr {
        MapExpr::Restrict(Box::new(map), domain)
    }

    pub fn source(&self) -> Result<Space> {
        Ok(match self {
            MapExpr::LastProj { from, .. } | MapExpr::Select { from, .. } => Space::Level(*from),
            MapExpr::IdentityMap(n) => Space::Level(*n),
            MapExpr::SumOfLastProj(_) => Space::Sum,
            MapExpr::Restrict(m, _) => m.source()?,
            MapExpr::Compose(outer, inner) => {
                let (mid_out, mid_in) = (inner.target()?, outer.source()?);
                if mid_out != mid_in {
                    return Err(Error::Unsupported(format!(
                        "composition of {mid_in:?}-map after {mid_out:?}-valued map"
                    )));
                }
                inner.source()?
            }
            MapExpr::Tabulated(t) => Space::Level(t.from),
        })
    }

    pub fn target(&self) -> Result<Space> {
        Ok(match self {
            MapExpr::LastProj { to, .. } => Space::Level(*to),
            MapExpr::Select { coords, .. } => Space::Level(coords.len()),
            MapExpr::IdentityMap(n) => Space::Level(*n),
            MapExpr::SumOfLastProj(i) => Space::Level(*i),
            MapExpr::Restrict(m, _) => m.target()?,
            MapExpr::Compose(outer, _) => {
                self.source()?;
                outer.target()?
            }
            MapExpr::Tabulated(t) => Space::Level(t.to),
        })
    }

    /// Coordinate selection this map reduces to, if it is built from
    /// projections, selections and identities only.
    pub fn as_selection(&self) -> Option<(usize, Vec<usize>)> {
        match self {
            MapExpr::LastProj { from, to } if to <= from => Some((*from, (from - to..*from).collect())),
            MapExpr::Select { from, coords } => Some((*from, coords.clone())),
            MapExpr::IdentityMap(n) => Some((*n, (0..*n).collect())),
            MapExpr::Compose(outer, inner) => {
                let (from, inner_coords) = inner.as_selection()?;
                let (mid, outer_coords) = outer.as_selection()?;
                if mid != inner_coords.len() {
                    return None;
                }
                Some((from, outer_coords.iter().map(|&c| inner_coords[c]).collect()))
            }
            _ => None,
        }
    }

    /// Pointwise value; `None` outside the domain.
    pub fn apply(&self, e: &Elem) -> Result<Option<Elem>> {
        match (self, e) {
            (MapExpr::Restrict(m, dom), _) => {
                if dom.contains(e)? {
                    m.apply(e)
                } else {
                    Ok(None)
                }
            }
            (MapExpr::Compose(outer, inner), _) => match inner.apply(e)? {
                Some(mid) => outer.apply(&mid),
                None => Ok(None),
            },
            (MapExpr::SumOfLastProj(i), Elem::Summand(j, x)) => {
                if j < i {
                    Ok(None)
                } else {
                    Ok(Some(Elem::Tuple(x[j - i..].to_vec())))
                }
            }
            (MapExpr::Tabulated(t), Elem::Tuple(x)) => Ok(t.table.get(x).cloned().map(Elem::Tuple)),
            (_, Elem::Tuple(x)) => {
                let (from, coords) = self
                    .as_selection()
                    .ok_or_else(|| Error::Unsupported(format!("cannot evaluate {self:?}")))?;
                if x.len() != from {
                    return Err(Error::Arity {
                        expected: from,
                        found: x.len(),
                    });
                }
                Ok(Some(Elem::Tuple(coords.iter().map(|&c| x[c]).collect())))
            }
            _ => Err(Error::Unsupported(format!("{self:?} applied to {e:?}"))),
        }
    }

    pub fn map_image(&self, s: &Region) -> Result<Region> {
        match self {
            MapExpr::LastProj { from, to } => {
                let s = level_of(s, *from)?;
                Ok(Region::Level(s.project_last(*to)?))
            }
            MapExpr::Select { from, coords } => {
                let s = level_of(s, *from)?;
                Ok(Region::Level(s.push_forward_select(coords)?))
            }
            MapExpr::IdentityMap(n) => Ok(Region::Level(level_of(s, *n)?.clone())),
            MapExpr::SumOfLastProj(i) => Ok(Region::Level(s.as_sum()?.tail_union_projection(*i)?)),
            MapExpr::Restrict(m, dom) => m.map_image(&s.intersection(dom)?),
            MapExpr::Compose(outer, inner) => {
                self.source()?;
                outer.map_image(&inner.map_image(s)?)
            }
            MapExpr::Tabulated(_) => Err(Error::Unsupported(
                "images of symbolic sets under tabulated bijections".into(),
            )),
        }
    }

    pub fn map_preimage(&self, s: &Region) -> Result<Region> {
        match self {
            MapExpr::LastProj { from, to } => {
                let s = level_of(s, *to)?;
                Ok(Region::Level(s.lift_last(*from)?))
            }
            MapExpr::Select { from, coords } => {
                let s = level_of(s, coords.len())?;
                check_select(*from, coords)?;
                Ok(Region::Level(s.pull_back_select(*from, coords)?))
            }
            MapExpr::IdentityMap(n) => Ok(Region::Level(level_of(s, *n)?.clone())),
            MapExpr::SumOfLastProj(i) => {
                let s = level_of(s, *i)?;
                Ok(Region::Sum(SumSymbolicSet::tail_preimage(s)?))
            }
            MapExpr::Restrict(m, dom) => m.map_preimage(s)?.intersection(dom),
            MapExpr::Compose(outer, inner) => {
                self.source()?;
                inner.map_preimage(&outer.map_preimage(s)?)
            }
            MapExpr::Tabulated(_) => Err(Error::Unsupported(
                "preimages of symbolic sets under tabulated bijections".into(),
            )),
        }
    }
}

fn level_of(s: &Region, n: usize) -> Result<&SymbolicSet> {
    let s = s.as_level()?;
    if s.level() != n {
        return Err(Error::LevelMismatch {
            left: s.level(),
            right: n,
        });
    }
    Ok(s)
}

impl fmt::Display for SumSymbolicSet {
    /// Text body of a sum-set document (without the `sum:` header).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, s) in &self.exceptional {
            writeln!(f, "summand {j}: {s}")?;
        }
        let (h, t) = (self.head_width, self.tail_width);
        let split = |c: &Conjunct| -> (SymbolicSet, SymbolicSet) {
            let head = c.range(..h).map(|(&k, p)| (k, p.clone())).collect::<Conjunct>();
            let tail = c.range(h..).map(|(&k, p)| (k - h, p.clone())).collect::<Conjunct>();
            (
                SymbolicSet::new(h, vec![head]).expect("head coordinates in range"),
                SymbolicSet::new(t, vec![tail]).expect("tail coordinates in range"),
            )
        };
        if self.pattern.is_empty() {
            writeln!(f, "tail(head[{h}]=none; last[{t}]=all; from={})", self.threshold)?;
        }
        for c in self.pattern.conjuncts() {
            let (head, tail) = split(c);
            writeln!(f, "tail(head[{h}]={head}; last[{t}]={tail}; from={})", self.threshold)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::Pred;

    fn atom_in(level: usize, k: usize, vals: &[u64]) -> SymbolicSet {
        SymbolicSet::atom(level, k, Pred::in_set(vals.iter().copied())).unwrap()
    }

    fn atom_not_in(level: usize, k: usize, vals: &[u64]) -> SymbolicSet {
        SymbolicSet::atom(level, k, Pred::not_in(vals.iter().copied())).unwrap()
    }

    fn p0() -> SymbolicSet {
        atom_not_in(2, 0, &[0])
    }

    #[test]
    fn sum_contains_and_slices() {
        let m = SumSymbolicSet::from_summands(BTreeMap::from([(3, SymbolicSet::full(3))])).unwrap();
        assert!(m.sum_contains(3, &[1, 2, 3]).unwrap());
        assert!(!m.sum_contains(2, &[1, 2]).unwrap());
        assert!(m.sum_contains(3, &[1, 2]).is_err());

        assert!(SumSymbolicSet::full().complement().unwrap().is_empty());

        let t = SumSymbolicSet::template(&atom_in(1, 0, &[0]), &SymbolicSet::full(0), 2).unwrap();
        assert_eq!(t.summand_slice(4).unwrap(), atom_in(4, 0, &[0]));
        assert!(t.summand_slice(1).unwrap().is_empty());
    }

    #[test]
    fn combine_realigns_templates() {
        let a = SumSymbolicSet::template(&atom_in(1, 0, &[0]), &SymbolicSet::full(0), 1).unwrap();
        let b = SumSymbolicSet::tail_preimage(&atom_in(2, 1, &[4])).unwrap();
        let u = a.intersection(&b).unwrap();
        assert!(!u.sum_contains(1, &[0]).unwrap());
        assert!(u.sum_contains(2, &[0, 4]).unwrap());
        assert!(u.sum_contains(5, &[0, 9, 9, 1, 4]).unwrap());
        assert!(!u.sum_contains(5, &[1, 9, 9, 1, 4]).unwrap());
        let c = u.complement().unwrap();
        assert!(c.sum_contains(1, &[0]).unwrap());
        assert!(c.intersection(&u).unwrap().is_empty());
    }

    #[test]
    fn tail_union_projection_examples() {
        let m = SumSymbolicSet::tail_preimage(&p0()).unwrap().complement().unwrap();
        assert_eq!(m.tail_union_projection(2).unwrap(), atom_in(2, 0, &[0]));

        let only3 = SumSymbolicSet::from_summands(BTreeMap::from([(3, SymbolicSet::full(3))])).unwrap();
        assert!(only3.tail_union_projection(4).unwrap().is_empty());

        assert!(SumSymbolicSet::full().tail_union_projection(3).unwrap().is_full());
    }

    #[test]
    fn finomega_examples() {
        let only3 = SumSymbolicSet::from_summands(BTreeMap::from([(3, SymbolicSet::full(3))])).unwrap();
        let (i, p) = finomega_member(&only3).unwrap().unwrap();
        assert_eq!(i, 4);
        assert!(p.is_full());

        let m = SumSymbolicSet::tail_preimage(&p0()).unwrap().complement().unwrap();
        let (i, p) = finomega_member(&m).unwrap().unwrap();
        assert_eq!(i, 2);
        assert_eq!(p, p0());

        // overline{S×ω}, S = {x0∈{0}} at level 2
        let s_times_omega = atom_in(3, 0, &[0]);
        let m = SumSymbolicSet::tail_preimage(&s_times_omega).unwrap();
        let cert = finomega_member(&m).unwrap().unwrap();
        assert!(validate_finomega_certificate(&m, cert.0, &cert.1).unwrap());

        assert!(finomega_member(&SumSymbolicSet::full()).unwrap().is_none());
    }

    #[test]
    fn search_bound_is_stable() {
        let m = SumSymbolicSet::template(&atom_in(1, 0, &[1]), &atom_not_in(1, 0, &[2]), 3).unwrap();
        let b = m.finomega_search_bound();
        for i in b..b + 3 {
            assert_eq!(
                m.tail_union_projection(i).unwrap().fin_member().unwrap(),
                m.tail_union_projection(b).unwrap().fin_member().unwrap()
            );
        }
    }

    #[test]
    fn finpow_omega_examples() {
        let t = SumSymbolicSet::template(&SymbolicSet::full(0), &atom_in(1, 0, &[0]), 1).unwrap();
        assert!(finpow_omega_member(&t).unwrap());
        for j in 1..=6 {
            assert!(t.summand_slice(j).unwrap().fin_member().unwrap());
        }
        assert!(!finpow_omega_member(&SumSymbolicSet::full()).unwrap());
        let m = SumSymbolicSet::tail_preimage(&p0()).unwrap().complement().unwrap();
        assert!(finpow_omega_member(&m).unwrap());
    }

    #[test]
    fn map_examples() {
        let pre = MapExpr::SumOfLastProj(2).map_preimage(&Region::Level(p0())).unwrap();
        assert_eq!(pre, Region::Sum(SumSymbolicSet::tail_preimage(&p0()).unwrap()));

        let img = MapExpr::last_proj(2, 1)
            .map_image(&Region::Level(atom_in(2, 1, &[5])))
            .unwrap();
        assert_eq!(img, Region::Level(atom_in(1, 0, &[5])));

        let comp = MapExpr::compose(MapExpr::last_proj(2, 1), MapExpr::last_proj(3, 2));
        let direct = MapExpr::last_proj(3, 1);
        let s = Region::Level(atom_in(1, 0, &[4]));
        assert_eq!(comp.map_preimage(&s).unwrap(), direct.map_preimage(&s).unwrap());
        assert_eq!(comp.map_preimage(&s).unwrap(), Region::Level(atom_in(3, 2, &[4])));
        assert_eq!(comp.as_selection(), direct.as_selection());

        let bad = MapExpr::compose(MapExpr::last_proj(3, 1), MapExpr::last_proj(3, 2));
        assert!(bad.map_preimage(&s).is_err());

        let tab = MapExpr::Tabulated(TabulatedBijection::new(1, 1, vec![(vec![0], vec![1])]).unwrap());
        assert!(tab.map_image(&s).is_err());
        assert_eq!(tab.apply(&Elem::Tuple(vec![0])).unwrap(), Some(Elem::Tuple(vec![1])));
    }

    #[test]
    fn restrict_confines_preimages() {
        let f3 = atom_not_in(3, 0, &[0]);
        let m = MapExpr::restrict(MapExpr::last_proj(3, 1), Region::Level(f3.clone()));
        let pre = m.map_preimage(&Region::Level(SymbolicSet::full(1))).unwrap();
        assert_eq!(pre, Region::Level(f3));
        assert_eq!(m.apply(&Elem::Tuple(vec![0, 1, 2])).unwrap(), None);
        assert_eq!(
            m.apply(&Elem::Tuple(vec![1, 1, 2])).unwrap(),
            Some(Elem::Tuple(vec![2]))
        );
    }
}
