//! Uniform families, the intersection predicates and the named constructions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::ExactInt;
use crate::kset::{GroundSpec, KSet};

/// A k-uniform family over a ground, kept lex-sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Family {
    ground: GroundSpec,
    members: Vec<KSet>,
}

impl Family {
    /// Builds a family, sorting and deduplicating `members`.
    pub fn new(ground: GroundSpec, mut members: Vec<KSet>) -> Result<Self> {
        for &s in &members {
            ground.check(s)?;
        }
        members.sort_unstable();
        members.dedup();
        Ok(Family { ground, members })
    }

    pub(crate) fn from_sorted_unchecked(ground: GroundSpec, members: Vec<KSet>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(members.iter().all(|&s| ground.admits(s)));
        Family { ground, members }
    }

    pub fn empty(ground: GroundSpec) -> Self {
        Family {
            ground,
            members: Vec::new(),
        }
    }

    /// Every k-subset of the ground.
    pub fn complete(ground: GroundSpec) -> Self {
        Family {
            ground,
            members: ground.iter().collect(),
        }
    }

    pub fn ground(&self) -> GroundSpec {
        self.ground
    }

    pub fn k(&self) -> u32 {
        self.ground.k()
    }

    pub fn n(&self) -> u32 {
        self.ground.n()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[KSet] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = KSet> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, s: KSet) -> bool {
        self.members.binary_search(&s).is_ok()
    }

    pub fn is_subfamily_of(&self, other: &Family) -> bool {
        self.iter().all(|s| other.contains(s))
    }

    /// Keeps the members satisfying `pred`.
    pub fn filter(&self, mut pred: impl FnMut(KSet) -> bool) -> Family {
        Family {
            ground: self.ground,
            members: self.iter().filter(|&s| pred(s)).collect(),
        }
    }

    /// Union of two families of the same uniformity and top element `n`;
    /// the result lives on the wider of the two grounds.
    pub fn union(&self, other: &Family) -> Result<Family> {
        if self.k() != other.k() || self.n() != other.n() {
            return Err(Error::GroundMismatch(format!(
                "union of k={} n={} with k={} n={}",
                self.k(),
                self.n(),
                other.k(),
                other.n()
            )));
        }
        let ground = if self.ground.lo() <= other.ground.lo() {
            self.ground
        } else {
            other.ground
        };
        Family::new(ground, self.iter().chain(other.iter()).collect())
    }

    /// True iff every two members meet. Empty and singleton families qualify.
    pub fn is_intersecting(&self) -> bool {
        let m = &self.members;
        (0..m.len()).all(|i| m[i + 1..].iter().all(|&t| m[i].meets(t)))
    }

    /// Intersection of all members, or the whole ground for the empty family.
    pub fn common_intersection(&self) -> KSet {
        KSet::from_mask(
            self.iter()
                .fold(self.ground.mask(), |acc, s| acc & s.mask()),
        )
    }

    /// No element lies in every member.
    pub fn is_non_trivial(&self) -> bool {
        self.common_intersection().is_empty()
    }

    /// `F(î)`: members containing `i`.
    pub fn restrict_in(&self, i: u32) -> Result<Family> {
        self.check_element(i)?;
        Ok(self.filter(|s| s.contains(i)))
    }

    /// `F(ī)`: members avoiding `i`.
    pub fn restrict_out(&self, i: u32) -> Result<Family> {
        self.check_element(i)?;
        Ok(self.filter(|s| !s.contains(i)))
    }

    fn check_element(&self, i: u32) -> Result<()> {
        if self.ground.contains_element(i) {
            Ok(())
        } else {
            Err(Error::OutsideGround(format!(
                "element {i} not in [{},{}]",
                self.ground.lo(),
                self.n()
            )))
        }
    }

    pub fn degree(&self, i: u32) -> usize {
        self.iter().filter(|s| s.contains(i)).count()
    }

    /// `γ(F) = min_i |F(ī)|` over the ground.
    pub fn diversity(&self) -> usize {
        let len = self.len();
        let max_deg = (self.ground.lo()..=self.n())
            .map(|i| self.degree(i))
            .max()
            .unwrap_or(0);
        len - max_deg
    }

    /// Ground elements of maximum degree, ascending.
    pub fn max_degree_elements(&self) -> Vec<u32> {
        let degrees: Vec<(u32, usize)> = (self.ground.lo()..=self.n())
            .map(|i| (i, self.degree(i)))
            .collect();
        let best = degrees.iter().map(|d| d.1).max().unwrap_or(0);
        degrees
            .into_iter()
            .filter(|d| d.1 == best)
            .map(|d| d.0)
            .collect()
    }

    /// Sum of all elements of all members.
    pub fn weight(&self) -> u64 {
        self.iter().map(KSet::weight).sum()
    }

    pub fn size(&self) -> ExactInt {
        ExactInt::from(self.len())
    }
}

/// Every member of `f` meets every member of `g`. Uniformities may differ.
pub fn are_cross_intersecting(f: &Family, g: &Family) -> Result<bool> {
    if f.n() != g.n() {
        return Err(Error::GroundMismatch(format!("n={} vs n={}", f.n(), g.n())));
    }
    Ok(cross_intersecting_unchecked(f.members(), g.members()))
}

pub(crate) fn cross_intersecting_unchecked(f: &[KSet], g: &[KSet]) -> bool {
    f.iter().all(|&a| g.iter().all(|&b| a.meets(b)))
}

/// All `target_k`-subsets of `[1,n]` meeting every member of `f`.
pub fn transversal(f: &Family, target_k: u32) -> Result<Family> {
    let ground = GroundSpec::full(f.n(), target_k)?;
    let members = ground
        .iter()
        .filter(|&c| f.iter().all(|s| s.meets(c)))
        .collect();
    Ok(Family::from_sorted_unchecked(ground, members))
}

/// Full star of `x` in `C([n], k)`.
pub fn star(n: u32, k: u32, x: u32) -> Result<Family> {
    let ground = GroundSpec::full(n, k)?;
    if !ground.contains_element(x) {
        return Err(Error::OutsideGround(format!(
            "star centre {x} not in [1,{n}]"
        )));
    }
    Ok(Family::from_sorted_unchecked(
        ground,
        ground.iter().filter(|s| s.contains(x)).collect(),
    ))
}

/// The Hilton–Milner family: sets through 1 meeting `[2,k+1]`, plus `[2,k+1]` itself.
pub fn hm_family(n: u32, k: u32) -> Result<Family> {
    if k < 2 || n <= 2 * k {
        return Err(Error::Precondition(format!(
            "hm_family needs n > 2k >= 4, got n={n}, k={k}"
        )));
    }
    let ground = GroundSpec::full(n, k)?;
    let block = KSet::from_elems(&(2..=k + 1).collect::<Vec<_>>())?;
    let members = ground
        .iter()
        .filter(|&s| (s.contains(1) && s.meets(block)) || s == block)
        .collect();
    Ok(Family::from_sorted_unchecked(ground, members))
}

/// `{f0} ∪ {F ∈ C([n],k) : 1 ∈ F, F ∩ g0 ≠ ∅}`.
fn pinned_family(ground: GroundSpec, f0: KSet, g0: KSet) -> Family {
    let members = ground
        .iter()
        .filter(|&s| (s.contains(1) && s.meets(g0)) || s == f0)
        .collect();
    Family::from_sorted_unchecked(ground, members)
}

/// The pair of Hilton–Milner-type families built from two meeting sets that avoid 1.
pub fn example1_pair(n: u32, k: u32, f0: KSet, g0: KSet) -> Result<(Family, Family)> {
    if k < 2 || n <= 2 * k {
        return Err(Error::Precondition(format!(
            "example1 needs n > 2k >= 4, got n={n}, k={k}"
        )));
    }
    let inner = GroundSpec::new(2, n, k)?;
    inner.check(f0)?;
    inner.check(g0)?;
    if !f0.meets(g0) {
        return Err(Error::Precondition(format!("{f0} and {g0} are disjoint")));
    }
    let ground = GroundSpec::full(n, k)?;
    Ok((pinned_family(ground, f0, g0), pinned_family(ground, g0, f0)))
}

/// The mixed-uniformity analogue: `F` is k-uniform around `f0`, `G` is l-uniform around `g0`.
pub fn mixed_uniformity_pair(
    n: u32,
    k: u32,
    l: u32,
    f0: KSet,
    g0: KSet,
) -> Result<(Family, Family)> {
    if !(n > 2 * k && k > l && l >= 2) {
        return Err(Error::Precondition(format!(
            "mixed pair needs n > 2k > 2l >= 4, got n={n}, k={k}, l={l}"
        )));
    }
    GroundSpec::new(2, n, k)?.check(f0)?;
    GroundSpec::new(2, n, l)?.check(g0)?;
    if !f0.meets(g0) {
        return Err(Error::Precondition(format!("{f0} and {g0} are disjoint")));
    }
    let f = pinned_family(GroundSpec::full(n, k)?, f0, g0);
    let g = pinned_family(GroundSpec::full(n, l)?, g0, f0);
    Ok((f, g))
}

/// Sizes, product and the predicates of a candidate pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairStats {
    #[serde(serialize_with = "crate::io::ser_int")]
    pub size_f: ExactInt,
    #[serde(serialize_with = "crate::io::ser_int")]
    pub size_g: ExactInt,
    #[serde(serialize_with = "crate::io::ser_int")]
    pub product: ExactInt,
    pub ci: bool,
    pub nontrivial_f: bool,
    pub nontrivial_g: bool,
}

impl PairStats {
    pub fn of(f: &Family, g: &Family) -> Result<Self> {
        let size_f = f.size();
        let size_g = g.size();
        Ok(PairStats {
            product: &size_f * &size_g,
            size_f,
            size_g,
            ci: are_cross_intersecting(f, g)?,
            nontrivial_f: f.is_non_trivial(),
            nontrivial_g: g.is_non_trivial(),
        })
    }

    /// CI with both families non-trivial.
    pub fn is_admissible(&self) -> bool {
        self.ci && self.nontrivial_f && self.nontrivial_g
    }
}
