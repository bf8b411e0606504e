//! A computable family of partitions {X_s : s ∈ ω^{n+1}} of ω, one partition
//! per level `n`, in which every finite intersection of cells taken from
//! distinct levels is infinite.
//!
//! Every natural codes a *stack* `(t_0, …, t_{L-1})` with `t_i ∈ ω^{i+1}`.
//! The code of the empty stack is 0; a stack of length `L ≥ 1` whose
//! `T(L) = L(L+1)/2` coordinates bit-interleave to `c` has code
//! `2^{L-1}·(2c+1)`. The cell of `m` at level `n` is entry `n` of its stack,
//! or the zero tuple when the stack is shorter.
//!
//! Naturals are `u64`, so a stack of length `L` has `64 − L` bits to spread
//! over its coordinates. Every cell is nonempty and large as long as its
//! level and entries fit in that budget, which covers the levels and values
//! used here (levels up to about 7, small entries).

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;

use crate::error::{Error, Result};

/// Longest stack that has a code.
pub const MAX_STACK_LEN: usize = 64;

/// Two families: A decodes `m` directly, B first swaps the arguments of the
/// Cantor pairing of `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    A,
    B,
}

impl FamilyId {
    pub fn permute(self, m: u64) -> u64 {
        match self {
            FamilyId::A => m,
            FamilyId::B => cantor_swap(m),
        }
    }

    /// Inverse of [`permute`](Self::permute); both permutations are involutions.
    pub fn unpermute(self, m: u64) -> u64 {
        self.permute(m)
    }

    pub fn parse(s: &str) -> Result<FamilyId> {
        match s {
            "A" | "a" => Ok(FamilyId::A),
            "B" | "b" => Ok(FamilyId::B),
            _ => Err(Error::UnknownName(format!("family {s}"))),
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyId::A => "A",
            FamilyId::B => "B",
        })
    }
}

fn triangle(w: u128) -> u128 {
    w * (w + 1) / 2
}

/// `(w, y)` with `z = T(w) + y`, `y ≤ w`.
fn cantor_diagonal(z: u64) -> (u128, u128) {
    let z = z as u128;
    let mut w = ((8 * z + 1).isqrt() - 1) / 2;
    // guard against rounding at the boundaries
    while triangle(w) > z {
        w -= 1;
    }
    while triangle(w + 1) <= z {
        w += 1;
    }
    (w, z - triangle(w))
}

/// The Cantor pairing `⟨x, y⟩ = T(x+y) + y` with `x` and `y` exchanged.
/// The result lies on the same diagonal. The last diagonal does not fit in
/// `u64` completely, so its points stay fixed.
fn cantor_swap(z: u64) -> u64 {
    let (w, y) = cantor_diagonal(z);
    if triangle(w + 1) - 1 > u64::MAX as u128 {
        return z;
    }
    (triangle(w) + (w - y)) as u64
}

fn tri(l: usize) -> usize {
    l * (l + 1) / 2
}

/// A finite list of tuples, entry `i` having arity `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Stack(Vec<Vec<u64>>);

impl Stack {
    pub fn new(entries: Vec<Vec<u64>>) -> Result<Stack> {
        for (i, t) in entries.iter().enumerate() {
            if t.len() != i + 1 {
                return Err(Error::Arity {
                    expected: i + 1,
                    found: t.len(),
                });
            }
        }
        Ok(Stack(entries))
    }

    pub fn entries(&self) -> &[Vec<u64>] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entry `n`, or the zero tuple of arity `n + 1` past the end.
    pub fn entry_or_zero(&self, n: usize) -> Vec<u64> {
        self.0.get(n).cloned().unwrap_or_else(|| vec![0; n + 1])
    }
}

/// Bit position of bit `b` of coordinate `r` among `d` interleaved coordinates.
fn lane(b: usize, r: usize, d: usize) -> usize {
    b * d + r
}

pub fn decode(m: u64) -> Stack {
    if m == 0 {
        return Stack::default();
    }
    let len = m.trailing_zeros() as usize + 1;
    let c = (m >> (len - 1)) >> 1;
    let d = tri(len);
    let mut flat = vec![0u64; d];
    for pos in 0..(64 - len) {
        if c >> pos & 1 == 1 {
            flat[pos % d] |= 1 << (pos / d);
        }
    }
    let mut entries = Vec::with_capacity(len);
    for i in 0..len {
        entries.push(flat[tri(i)..tri(i + 1)].to_vec());
    }
    Stack(entries)
}

pub fn encode(st: &Stack) -> Result<u64> {
    let len = st.len();
    if len == 0 {
        return Ok(0);
    }
    if len > MAX_STACK_LEN {
        return Err(Error::Overflow(format!("stack of length {len}")));
    }
    let d = tri(len);
    let budget = 64 - len;
    let mut c = 0u64;
    for (r, &v) in st.0.iter().flatten().enumerate() {
        let mut v = v;
        let mut b = 0;
        while v != 0 {
            if v & 1 == 1 {
                let pos = lane(b, r, d);
                if pos >= budget {
                    return Err(Error::Overflow(format!(
                        "stack of length {len} with coordinate value {}",
                        st.0.iter().flatten().nth(r).copied().unwrap_or(0)
                    )));
                }
                c |= 1 << pos;
            }
            v >>= 1;
            b += 1;
        }
    }
    Ok(((2 * c) | 1) << (len - 1))
}

/// The cell of `m` at level `n`: a tuple of arity `n + 1`.
pub fn cell_of(family: FamilyId, m: u64, n: usize) -> Vec<u64> {
    decode(family.permute(m)).entry_or_zero(n)
}

/// Level ↦ required cell.
pub type Constraints = BTreeMap<usize, Vec<u64>>;

fn check_constraints(constraints: &Constraints) -> Result<()> {
    for (&n, t) in constraints {
        if t.len() != n + 1 {
            return Err(Error::Arity {
                expected: n + 1,
                found: t.len(),
            });
        }
    }
    Ok(())
}

/// Scatters the low bits of `k` into the set bits of `mask`.
fn deposit(mut k: u64, mut mask: u64) -> u64 {
    let mut out = 0;
    while mask != 0 && k != 0 {
        let low = mask & mask.wrapping_neg();
        if k & 1 == 1 {
            out |= low;
        }
        k >>= 1;
        mask &= mask - 1;
    }
    out
}

/// Ascending codes of stacks of one fixed length meeting the constraints.
#[derive(Debug, Clone)]
struct LengthStream {
    len: usize,
    fixed: u64,
    free: u64,
    next: u64,
    count: u128,
}

impl LengthStream {
    fn new(len: usize, constraints: &Constraints) -> Option<LengthStream> {
        if constraints.range(len..).any(|(_, t)| t.iter().any(|&v| v != 0)) {
            return None;
        }
        let d = tri(len);
        let budget = 64 - len;
        let mut fixed = 0u64;
        let mut pinned = 0u64;
        for (&n, t) in constraints.range(..len) {
            for (p, &v) in t.iter().enumerate() {
                let r = tri(n) + p;
                let mut b = 0;
                loop {
                    let pos = lane(b, r, d);
                    if pos >= budget {
                        if v >> b != 0 {
                            return None;
                        }
                        break;
                    }
                    pinned |= 1 << pos;
                    if v >> b & 1 == 1 {
                        fixed |= 1 << pos;
                    }
                    b += 1;
                }
            }
        }
        let all = if budget == 64 { u64::MAX } else { (1u64 << budget) - 1 };
        let free = all & !pinned;
        Some(LengthStream {
            len,
            fixed,
            free,
            next: 0,
            count: 1u128 << free.count_ones(),
        })
    }

    fn pop(&mut self) -> Option<u64> {
        if self.next as u128 >= self.count {
            return None;
        }
        let c = self.fixed | deposit(self.next, self.free);
        self.next += 1;
        Some(((2 * c) | 1) << (self.len - 1))
    }
}

/// Ascending enumeration of decoded codes (family A order) meeting the
/// constraints, merged across stack lengths.
#[derive(Debug, Clone)]
struct CodeStream {
    constraints: Constraints,
    heap: BinaryHeap<Reverse<(u64, usize)>>,
    streams: Vec<Option<LengthStream>>,
    next_len: usize,
    empty_pending: bool,
}

impl CodeStream {
    fn new(constraints: Constraints) -> CodeStream {
        let empty_pending = constraints.values().all(|t| t.iter().all(|&v| v == 0));
        CodeStream {
            constraints,
            heap: BinaryHeap::new(),
            streams: Vec::new(),
            next_len: 1,
            empty_pending,
        }
    }

    /// Opens every length whose smallest code (2^{L-1}) could precede the
    /// current heap minimum.
    fn open_lengths(&mut self) {
        while self.next_len <= MAX_STACK_LEN {
            let floor = 1u64 << (self.next_len - 1);
            if let Some(Reverse((top, _))) = self.heap.peek() {
                if *top < floor {
                    break;
                }
            }
            let mut s = LengthStream::new(self.next_len, &self.constraints);
            let idx = self.streams.len();
            if let Some(first) = s.as_mut().and_then(LengthStream::pop) {
                self.heap.push(Reverse((first, idx)));
            }
            self.streams.push(s);
            self.next_len += 1;
        }
    }
}

impl Iterator for CodeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.empty_pending {
            self.empty_pending = false;
            return Some(0);
        }
        self.open_lengths();
        let Reverse((m, idx)) = self.heap.pop()?;
        if let Some(v) = self.streams[idx].as_mut().and_then(LengthStream::pop) {
            self.heap.push(Reverse((v, idx)));
        }
        Some(m)
    }
}

/// Ascending enumeration of `⋂_n X_{s_n}` for one family.
///
/// Built directly from constrained stacks. For family B the codes are
/// produced in family-A order and mapped through the Cantor swap, which
/// only permutes each diagonal, so results are released one completed
/// diagonal at a time.
#[derive(Debug, Clone)]
pub struct IntersectionIter {
    family: FamilyId,
    codes: CodeStream,
    lookahead: Option<u64>,
    ready: std::collections::VecDeque<u64>,
}

impl IntersectionIter {
    pub fn new(family: FamilyId, constraints: Constraints) -> Result<IntersectionIter> {
        check_constraints(&constraints)?;
        let mut codes = CodeStream::new(constraints);
        let lookahead = codes.next();
        Ok(IntersectionIter {
            family,
            codes,
            lookahead,
            ready: Default::default(),
        })
    }
}

impl Iterator for IntersectionIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.family == FamilyId::A {
            let out = self.lookahead;
            self.lookahead = self.codes.next();
            return out;
        }
        if let Some(m) = self.ready.pop_front() {
            return Some(m);
        }
        let first = self.lookahead?;
        let (w, _) = cantor_diagonal(first);
        let mut batch = vec![cantor_swap(first)];
        self.lookahead = self.codes.next();
        while let Some(z) = self.lookahead {
            if cantor_diagonal(z).0 != w {
                break;
            }
            batch.push(cantor_swap(z));
            self.lookahead = self.codes.next();
        }
        batch.sort_unstable();
        self.ready.extend(batch);
        self.ready.pop_front()
    }
}

/// The first `count` elements of `⋂_n X_{s_n}`, ascending.
pub fn enumerate_intersection(family: FamilyId, constraints: &Constraints, count: usize) -> Result<Vec<u64>> {
    Ok(IntersectionIter::new(family, constraints.clone())?
        .take(count)
        .collect())
}
