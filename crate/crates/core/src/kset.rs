//! k-subsets of a ground interval as 64-bit masks.
//!
//! Elements are absolute labels: bit `i` of the mask stands for element `i+1`,
//! so a set over `[2,n]` and a set over `[1,n]` share one mask space and can be
//! compared directly.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::family::Family;

/// Largest supported ground element.
pub const MAX_N: u32 = 64;

/// The ground interval `[lo, n]` together with the uniformity `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroundSpec {
    lo: u32,
    n: u32,
    k: u32,
}

impl GroundSpec {
    pub fn new(lo: u32, n: u32, k: u32) -> Result<Self> {
        if lo < 1 || lo > n || n > MAX_N || k < 1 || k > n - lo + 1 {
            return Err(Error::InvalidGround { lo, n, k });
        }
        Ok(GroundSpec { lo, n, k })
    }

    /// Ground `[1, n]`.
    pub fn full(n: u32, k: u32) -> Result<Self> {
        Self::new(1, n, k)
    }

    pub fn lo(&self) -> u32 {
        self.lo
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Number of ground elements, `n − lo + 1`.
    pub fn width(&self) -> u32 {
        self.n - self.lo + 1
    }

    /// Same interval, different uniformity.
    pub fn with_k(&self, k: u32) -> Result<Self> {
        Self::new(self.lo, self.n, k)
    }

    /// Mask of all ground elements.
    pub fn mask(&self) -> u64 {
        interval_mask(self.lo, self.n)
    }

    /// `C(width, k)`; exact for every ground with `n ≤ 64`.
    pub fn total(&self) -> u64 {
        binom_u64(self.width() as u64, self.k as u64)
    }

    pub fn contains_element(&self, x: u32) -> bool {
        self.lo <= x && x <= self.n
    }

    /// True iff `s` is a k-subset of this ground.
    pub fn admits(&self, s: KSet) -> bool {
        s.len() == self.k && s.mask() & !self.mask() == 0
    }

    pub fn check(&self, s: KSet) -> Result<()> {
        if self.admits(s) {
            Ok(())
        } else {
            Err(Error::OutsideGround(format!(
                "{s} in [{},{}] k={}",
                self.lo, self.n, self.k
            )))
        }
    }

    /// Lexicographic comparison of two members of this ground.
    pub fn lex_cmp(&self, a: KSet, b: KSet) -> Result<Ordering> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.cmp(&b))
    }

    /// Shifting order `a ≺ b` between two members of this ground.
    pub fn shift_le(&self, a: KSet, b: KSet) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        Ok(shift_le(a, b))
    }

    /// Iterates all k-subsets of the ground in lexicographic order.
    pub fn iter(&self) -> KSetIter {
        KSetIter {
            ground: *self,
            current: Some(self.first()),
        }
    }

    /// The lexicographically first set `{lo, …, lo+k−1}`.
    pub fn first(&self) -> KSet {
        KSet(interval_mask(self.lo, self.lo + self.k - 1))
    }
}

fn interval_mask(lo: u32, hi: u32) -> u64 {
    if hi < lo {
        return 0;
    }
    let upper = if hi >= 64 { u64::MAX } else { (1u64 << hi) - 1 };
    let lower = (1u64 << (lo - 1)) - 1;
    upper & !lower
}

pub(crate) fn binom_u64(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// A finite set of positive integers ≤ 64, ordered lexicographically.
///
/// The `Ord` impl is the lexicographic order: `F < G` iff the smallest element of
/// the symmetric difference lies in `F`. For equal-size sets this coincides with
/// comparing the ascending tuples.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct KSet(u64);

impl KSet {
    pub const fn from_mask(mask: u64) -> Self {
        KSet(mask)
    }

    pub fn from_elems(elems: &[u32]) -> Result<Self> {
        let mut mask = 0u64;
        for &x in elems {
            if !(1..=MAX_N).contains(&x) {
                return Err(Error::OutsideGround(format!("element {x}")));
            }
            let bit = 1u64 << (x - 1);
            if mask & bit != 0 {
                return Err(Error::Format(format!("repeated element {x}")));
            }
            mask |= bit;
        }
        Ok(KSet(mask))
    }

    pub const fn mask(self) -> u64 {
        self.0
    }

    pub const fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn contains(self, x: u32) -> bool {
        x >= 1 && x <= MAX_N && self.0 & (1u64 << (x - 1)) != 0
    }

    pub const fn meets(self, other: KSet) -> bool {
        self.0 & other.0 != 0
    }

    pub const fn is_subset(self, other: KSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Elements in ascending order.
    pub fn elems(self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn iter(self) -> impl Iterator<Item = u32> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let t = m.trailing_zeros();
                m &= m - 1;
                Some(t + 1)
            }
        })
    }

    /// Sum of the elements.
    pub fn weight(self) -> u64 {
        self.iter().map(u64::from).sum()
    }

    pub fn with(self, x: u32) -> KSet {
        KSet(self.0 | (1u64 << (x - 1)))
    }

    pub fn without(self, x: u32) -> KSet {
        KSet(self.0 & !(1u64 << (x - 1)))
    }
}

impl Ord for KSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            Ordering::Equal
        } else if self.0 & (diff & diff.wrapping_neg()) != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for KSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Shifting order: `a ≺ b` iff `a_i ≤ b_i` coordinatewise on ascending tuples.
///
/// Sets of different sizes are incomparable.
pub fn shift_le(a: KSet, b: KSet) -> bool {
    if a.len() != b.len() {
        return false;
    }
    a.iter().zip(b.iter()).all(|(x, y)| x <= y)
}

/// Iterator over the k-subsets of a ground in lexicographic order.
pub struct KSetIter {
    ground: GroundSpec,
    current: Option<KSet>,
}

impl Iterator for KSetIter {
    type Item = KSet;

    fn next(&mut self) -> Option<KSet> {
        let cur = self.current?;
        self.current = lex_successor(&self.ground, cur);
        Some(cur)
    }
}

/// Next k-set of the ground in lexicographic order.
pub fn lex_successor(g: &GroundSpec, s: KSet) -> Option<KSet> {
    let mut elems = s.elems();
    let k = elems.len();
    for i in (0..k).rev() {
        let limit = g.n - (k - 1 - i) as u32;
        if elems[i] < limit {
            elems[i] += 1;
            for j in i + 1..k {
                elems[j] = elems[j - 1] + 1;
            }
            let mut mask = 0u64;
            for x in elems {
                mask |= 1u64 << (x - 1);
            }
            return Some(KSet(mask));
        }
    }
    None
}

/// Number of ground sets lexicographically smaller than `a`.
pub fn lex_rank(g: &GroundSpec, a: KSet) -> Result<u64> {
    g.check(a)?;
    let mut rank = 0u64;
    let mut next = g.lo;
    let mut remaining = g.k as u64;
    for x in a.iter() {
        for y in next..x {
            rank += binom_u64((g.n - y) as u64, remaining - 1);
        }
        next = x + 1;
        remaining -= 1;
    }
    Ok(rank)
}

/// Inverse of [`lex_rank`], counting completions of each prefix instead of enumerating.
pub fn lex_unrank(g: &GroundSpec, rank: u64) -> Result<KSet> {
    let total = g.total();
    if rank >= total {
        return Err(Error::RankOutOfRange { rank, total });
    }
    let mut r = rank;
    let mut mask = 0u64;
    let mut x = g.lo;
    for remaining in (1..=g.k as u64).rev() {
        loop {
            let count = binom_u64((g.n - x) as u64, remaining - 1);
            if r < count {
                mask |= 1u64 << (x - 1);
                x += 1;
                break;
            }
            r -= count;
            x += 1;
        }
    }
    Ok(KSet(mask))
}

/// `L(g, m)`: the first `m` k-sets of the ground in lexicographic order.
pub fn lex_family(g: &GroundSpec, m: u64) -> Result<Family> {
    let total = g.total();
    if m > total {
        return Err(Error::OutOfRange(format!(
            "m={m} exceeds C({},{})={total}",
            g.width(),
            g.k
        )));
    }
    let members: Vec<KSet> = g.iter().take(m as usize).collect();
    Ok(Family::from_sorted_unchecked(*g, members))
}
