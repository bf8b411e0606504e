//! Systems of quasi-homomorphisms `π_{i,j}: dom(π_{i,j}) ⊆ ω^j → ω^i` between
//! the Fubini powers, their inductive limits, and condition (C).
//!
//! A system stores, per index `i`, a sum set `D_i` whose summand `j ≥ i` is
//! `dom(π_{i,j})` (indices without an entry have full domains), plus a finite
//! table of maps that differ from the last-coordinate projection. Maps are
//! coordinate selections, so images and preimages stay symbolic.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ideal::{Components, IdealDescriptor};
use crate::sumspace::{finpow_omega_member, MapExpr, Region, SumSymbolicSet};
use crate::symcore::{Pred, SymbolicSet};

pub const DEFAULT_HORIZON: usize = 6;

/// A system index: a positive natural or the top element added by
/// [`QuasiHomSystem::extend_infinity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Index {
    Finite(usize),
    Infinity,
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(i) => write!(f, "{i}"),
            Index::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherenceViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub point: Vec<u64>,
    /// `π_{i,k}(a)`
    pub direct: Vec<u64>,
    /// `π_{i,j}(π_{j,k}(a))`
    pub composed: Vec<u64>,
}

/// `a ∈ π_{j,k}^{-1}[dom π_{i,j}]` but `a ∉ dom π_{i,k}`; `summand` is the
/// sum-space summand holding `a` when `k` is the top index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionCViolation {
    pub i: usize,
    pub j: Index,
    pub k: Index,
    pub summand: Option<usize>,
    pub point: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiHomSystem {
    name: String,
    domains: BTreeMap<usize, SumSymbolicSet>,
    maps: BTreeMap<(usize, usize), MapExpr>,
    horizon: usize,
    top: bool,
}

impl QuasiHomSystem {
    /// Last-coordinate projections with full domains.
    pub fn standard() -> QuasiHomSystem {
        QuasiHomSystem {
            name: "standard".into(),
            domains: BTreeMap::new(),
            maps: BTreeMap::new(),
            horizon: DEFAULT_HORIZON,
            top: false,
        }
    }

    /// `π_{1,j}` restricted to `F_j = ω^j ∖ ({0} × ω^{j−1})` for `j > 1`,
    /// everything else standard.
    pub fn exindlim() -> QuasiHomSystem {
        let mut sys = QuasiHomSystem::standard();
        sys.name = "exindlim".into();
        sys.domains.insert(1, exindlim_a());
        sys
    }

    pub fn builtin(name: &str) -> Result<QuasiHomSystem> {
        match name {
            "standard" => Ok(QuasiHomSystem::standard()),
            "exindlim" => Ok(QuasiHomSystem::exindlim()),
            _ => Err(Error::UnknownName(format!("system {name}"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn with_horizon(mut self, horizon: usize) -> QuasiHomSystem {
        self.horizon = horizon.max(1);
        self
    }

    pub fn is_extended(&self) -> bool {
        self.top
    }

    /// Sets `dom(π_{i,j})` to summand `j` of `d` for every `j ≥ i`. Each
    /// domain must lie in the dual filter of `Fin^j`; template summands share
    /// one verdict, so checking up to the threshold suffices.
    pub fn with_domain(mut self, i: usize, d: SumSymbolicSet) -> Result<QuasiHomSystem> {
        if i == 0 {
            return Err(Error::Bounds("system indices start at 1".into()));
        }
        for j in i..=d.threshold().max(i) {
            if !d.summand_slice(j)?.complement()?.fin_member()? {
                return Err(Error::Precondition(format!(
                    "dom(pi_{{{i},{j}}}) is not in the dual filter of Fin^{j}"
                )));
            }
        }
        self.domains.insert(i, d);
        self.name = format!("{}+dom{i}", self.name);
        Ok(self)
    }

    /// Replaces `π_{i,j}` by a coordinate selection from ω^j to ω^i.
    pub fn with_map(mut self, i: usize, j: usize, map: MapExpr) -> Result<QuasiHomSystem> {
        let Some((from, coords)) = map.as_selection() else {
            return Err(Error::Unsupported(format!(
                "system maps must be coordinate selections, got {map:?}"
            )));
        };
        if from != j || coords.len() != i || i == 0 || i > j {
            return Err(Error::LevelMismatch { left: from, right: j });
        }
        self.maps.insert((i, j), map);
        self.name = format!("{}+map{i},{j}", self.name);
        Ok(self)
    }

    pub fn dom(&self, i: usize, j: usize) -> Result<SymbolicSet> {
        if i == 0 || i > j {
            return Err(Error::Bounds(format!("no map pi_{{{i},{j}}}")));
        }
        match self.domains.get(&i) {
            Some(d) => d.summand_slice(j),
            None => Ok(SymbolicSet::full(j)),
        }
    }

    pub fn map(&self, i: usize, j: usize) -> MapExpr {
        self.maps
            .get(&(i, j))
            .cloned()
            .unwrap_or(MapExpr::LastProj { from: j, to: i })
    }

    fn selection(&self, i: usize, j: usize) -> Vec<usize> {
        self.map(i, j).as_selection().expect("system maps are selections").1
    }

    /// `π_{i,j}^{-1}[S] ∩ dom(π_{i,j})`.
    pub fn preimage(&self, i: usize, j: usize, s: &SymbolicSet) -> Result<SymbolicSet> {
        s.pull_back_select(j, &self.selection(i, j))?
            .intersection(&self.dom(i, j)?)
    }

    /// `π_{i,j}[S ∩ dom(π_{i,j})]`.
    pub fn image(&self, i: usize, j: usize, s: &SymbolicSet) -> Result<SymbolicSet> {
        s.intersection(&self.dom(i, j)?)?
            .push_forward_select(&self.selection(i, j))
    }

    /// `dom(π_{i,∞}) = Σ_{k≥i} dom(π_{i,k})`.
    pub fn top_domain(&self, i: usize) -> Result<SumSymbolicSet> {
        let from_i = SumSymbolicSet::template(&SymbolicSet::full(0), &SymbolicSet::full(0), i)?;
        match self.domains.get(&i) {
            Some(d) => d.intersection(&from_i),
            None => Ok(from_i),
        }
    }

    /// `π_{i,∞}^{-1}[S] = Σ_{k≥i} π_{i,k}^{-1}[S] ∩ dom(π_{i,k})`.
    pub fn top_preimage(&self, i: usize, s: &SymbolicSet) -> Result<SumSymbolicSet> {
        let sum = MapExpr::restrict(MapExpr::SumOfLastProj(i), Region::Sum(self.top_domain(i)?));
        let mut out = sum.map_preimage(&Region::Level(s.clone()))?.as_sum()?.clone();
        for (&(a, k), _) in self.maps.range((i, i)..=(i, usize::MAX)) {
            debug_assert_eq!(a, i);
            out = out.with_summand(k, self.preimage(i, k, s)?)?;
        }
        Ok(out)
    }

    /// Largest index touched by an explicit domain or map, plus room for the
    /// template summands to settle.
    fn check_bound(&self) -> usize {
        let dom = self
            .domains
            .iter()
            .map(|(&i, d)| i.max(d.threshold()) + d.head_width() + d.tail_width() + 2)
            .max()
            .unwrap_or(0);
        let maps = self.maps.keys().map(|&(_, j)| j + 2).max().unwrap_or(0);
        self.horizon.max(dom).max(maps)
    }

    /// Coherence: `π_{i,k}(a) = π_{i,j}(π_{j,k}(a))` on
    /// `dom π_{i,k} ∩ dom π_{j,k} ∩ π_{j,k}^{-1}[dom π_{i,j}]`.
    ///
    /// Compositions of last-coordinate projections are last-coordinate
    /// projections, so a system without replaced maps is coherent outright.
    /// Otherwise every triple that involves a replaced map is compared as a
    /// coordinate selection; when the selections differ, a point of the
    /// triple domain with distinct coordinates separates them.
    pub fn check_coherent(&self) -> Result<Option<CoherenceViolation>> {
        if self.maps.is_empty() {
            return Ok(None);
        }
        let bound = self.check_bound();
        for k in 1..=bound {
            for i in 1..=k {
                for j in i..=k {
                    if ![(i, k), (j, k), (i, j)].iter().any(|p| self.maps.contains_key(p)) {
                        continue;
                    }
                    let direct_sel = self.selection(i, k);
                    let sel_jk = self.selection(j, k);
                    let composed_sel: Vec<usize> = self.selection(i, j).iter().map(|&c| sel_jk[c]).collect();
                    if direct_sel == composed_sel {
                        continue;
                    }
                    let domain = self
                        .dom(i, k)?
                        .intersection(&self.dom(j, k)?)?
                        .intersection(&self.dom(i, j)?.pull_back_select(k, &sel_jk)?)?;
                    let eval = |a: &[u64], sel: &[usize]| sel.iter().map(|&c| a[c]).collect::<Vec<u64>>();
                    let candidates = domain
                        .distinct_point()
                        .into_iter()
                        .chain(domain.enumerate(k as u64 + 2));
                    for a in candidates {
                        let (direct, composed) = (eval(&a, &direct_sel), eval(&a, &composed_sel));
                        if direct != composed {
                            return Ok(Some(CoherenceViolation {
                                i,
                                j,
                                k,
                                point: a,
                                direct,
                                composed,
                            }));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    /// Condition (C): coherence and
    /// `π_{j,k}^{-1}[dom π_{i,j}] ⊆ dom π_{i,k}` for all `i ≤ j ≤ k`, with the
    /// top index included once the system has been extended.
    ///
    /// Only indices with an explicit domain can fail the inclusion. Past
    /// [`check_bound`](Self::check_bound) every domain summand is a template
    /// instance whose head and tail blocks no longer move relative to the
    /// lifted sets, so the verdict for larger `j, k` repeats.
    pub fn check_condition_c(&self) -> Result<Option<ConditionCViolation>> {
        let bound = self.check_bound();
        for &i in self.domains.keys() {
            for j in i..=bound {
                let dom_ij = self.dom(i, j)?;
                for k in j..=bound {
                    let pre = self.preimage(j, k, &dom_ij)?;
                    let bad = pre.difference(&self.dom(i, k)?)?;
                    if let Some(point) = bad.least_point() {
                        return Ok(Some(ConditionCViolation {
                            i,
                            j: Index::Finite(j),
                            k: Index::Finite(k),
                            summand: None,
                            point,
                        }));
                    }
                }
                if self.top {
                    let bad = self.top_preimage(j, &dom_ij)?.difference(&self.top_domain(i)?)?;
                    if !bad.is_empty() {
                        let (summand, point) = first_point(&bad)?;
                        return Ok(Some(ConditionCViolation {
                            i,
                            j: Index::Finite(j),
                            k: Index::Infinity,
                            summand: Some(summand),
                            point,
                        }));
                    }
                }
            }
        }
        if let Some(v) = self.check_coherent()? {
            return Ok(Some(ConditionCViolation {
                i: v.i,
                j: Index::Finite(v.j),
                k: Index::Finite(v.k),
                summand: None,
                point: v.point,
            }));
        }
        Ok(None)
    }

    /// Adds the top index `∞` with `I_∞` the Fubini sum over the ideal of
    /// bounded index sets and `π_{i,∞} = Σ_{j≥i} π_{i,j}` on `Σ_{k≥i} dom(π_{i,k})`.
    pub fn extend_infinity(&self) -> Result<QuasiHomSystem> {
        if self.top {
            return Err(Error::Precondition("system already has a top index".into()));
        }
        if let Some(v) = self.check_condition_c()? {
            return Err(Error::Precondition(format!(
                "condition (C) fails at ({}, {}, {})",
                v.i, v.j, v.k
            )));
        }
        let mut out = self.clone();
        out.top = true;
        out.name = format!("{}+inf", self.name);
        Ok(out)
    }

    /// The ideal attached to the top index.
    pub fn top_ideal(&self) -> Option<IdealDescriptor> {
        self.top.then(|| IdealDescriptor::FubiniSum {
            index: Box::new(IdealDescriptor::FinPow(1)),
            components: Components::FinPowByIndex,
        })
    }

    /// Largest index tried by [`limit_member`](Self::limit_member).
    pub fn search_bound(&self, m: &SumSymbolicSet) -> usize {
        m.finomega_search_bound() + self.check_bound()
    }

    /// `U_i = ⋃_{j≥i} π_{i,j}[M_j ∩ dom π_{i,j}]`. Summands with a replaced
    /// map are added individually; the rest are last-coordinate projections
    /// of `M ∩ D_i` and settle as in the plain sum space.
    pub fn tail_image(&self, m: &SumSymbolicSet, i: usize) -> Result<SymbolicSet> {
        let md = match self.domains.get(&i) {
            Some(d) => m.intersection(d)?,
            None => m.clone(),
        };
        let last_map = self.maps.range((i, i)..=(i, usize::MAX)).map(|(&(_, j), _)| j).max();
        let settle = md.threshold().max(md.head_width() + i).max(i);
        let mut u = SymbolicSet::empty(i);
        for j in i..=settle.max(last_map.unwrap_or(0)) {
            u = u.union(&self.image(i, j, &m.summand_slice(j)?)?)?;
        }
        Ok(u)
    }

    /// Inductive-limit membership: the least `i` for which some `P` in the
    /// dual filter of `Fin^i` has `M ∩ P̄ = ∅`, where `P̄` collects the
    /// preimages `π_{i,j}^{-1}[P]` inside the declared domains. `P` is the
    /// complement of [`tail_image`](Self::tail_image).
    pub fn limit_member(&self, m: &SumSymbolicSet) -> Result<Option<(usize, SymbolicSet)>> {
        for i in 1..=self.search_bound(m) {
            let u = self.tail_image(m, i)?;
            if u.fin_member()? {
                return Ok(Some((i, u.complement()?)));
            }
        }
        Ok(None)
    }

    /// Recomputes `M_j ∩ π_{i,j}^{-1}[P] = ∅` summand by summand.
    pub fn validate_limit_certificate(&self, m: &SumSymbolicSet, i: usize, p: &SymbolicSet) -> Result<bool> {
        if i == 0 || p.level() != i || !p.complement()?.fin_member()? {
            return Ok(false);
        }
        let last = self.search_bound(m) + i + 2;
        for j in i..=last {
            if !m.summand_slice(j)?.is_disjoint(&self.preimage(i, j, p)?)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The least summand of a nonempty sum set with its least point.
fn first_point(s: &SumSymbolicSet) -> Result<(usize, Vec<u64>)> {
    for j in 1..=s.threshold() {
        if let Some(p) = s.summand_slice(j)?.least_point() {
            return Ok((j, p));
        }
    }
    Err(Error::Precondition("empty sum set has no points".into()))
}

/// `A = Σ_{j≥1} π_{1,j}^{-1}[ω]` in the restricted system: summand 1 is ω and
/// summand `j > 1` is `F_j`.
pub fn exindlim_a() -> SumSymbolicSet {
    let f = SymbolicSet::atom(1, 0, Pred::not_in([0])).expect("level 1");
    let mut out = SumSymbolicSet::template(&f, &SymbolicSet::full(0), 2).expect("valid template");
    out = out.with_summand(1, SymbolicSet::full(1)).expect("summand 1");
    out
}

/// `B = Σ_{j≥2} ω^j`.
pub fn exindlim_b() -> SumSymbolicSet {
    SumSymbolicSet::template(&SymbolicSet::full(0), &SymbolicSet::full(0), 2).expect("valid template")
}

/// A point of `(A^c ∪ B^c) ∩ P̄` showing that `(i, P)` does not certify the union.
pub fn exindlim_refuter(i: usize, p: &SymbolicSet) -> Result<(usize, Vec<u64>)> {
    if i == 0 || p.level() != i {
        return Err(Error::LevelMismatch {
            left: p.level(),
            right: i,
        });
    }
    if !p.complement()?.fin_member()? {
        return Err(Error::Precondition("P is not in the dual filter".into()));
    }
    let x = p
        .least_point()
        .ok_or_else(|| Error::Precondition("P is empty".into()))?;
    if i == 1 {
        // summand 1 lies in B^c and in P̄
        return Ok((1, x));
    }
    let mut point = vec![0];
    point.extend(x);
    Ok((i + 1, point))
}

/// Membership in a Fubini sum over Σ_j ω^j. Supported: index ideal `Fin`
/// with component `Fin^j` on summand `j`, i.e. Katětov's `Fin^ω`.
pub fn fubini_member(desc: &IdealDescriptor, m: &SumSymbolicSet) -> Result<bool> {
    match desc {
        IdealDescriptor::FubiniSum { index, components } => match (index.as_ref(), components) {
            (IdealDescriptor::FinPow(1), Components::FinPowByIndex) => finpow_omega_member(m),
            _ => Err(Error::Malformed(format!(
                "Fubini sum over the sum space needs index ideal Fin and components Fin^j, got {desc:?}"
            ))),
        },
        _ => Err(Error::Malformed(format!("not a Fubini sum: {desc:?}"))),
    }
}
