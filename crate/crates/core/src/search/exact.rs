use std::time::{Duration, Instant};

use super::bitset::BitSet;
use super::SearchReport;
use crate::error::{Error, Result};
use crate::family::{hm_family, Family, PairStats};
use crate::kset::{GroundSpec, KSet};

/// Largest `C(n,k)` the exhaustive oracle accepts.
pub const BRUTE_MAX_SETS: usize = 21;

/// Largest `C(n,k)` for which branch-and-bound builds its meet matrix.
const BNB_MAX_SETS: usize = 4096;

/// All k-subsets of `[1,n]` in lex order, with the meet relation as bit rows.
#[derive(Debug, Clone)]
pub struct Universe {
    ground: GroundSpec,
    sets: Vec<KSet>,
    meets: Vec<BitSet>,
}

impl Universe {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        let ground = GroundSpec::full(n, k)?;
        let total = ground.total();
        if total > BNB_MAX_SETS as u64 {
            return Err(Error::TooLarge(format!("C({n},{k}) = {total} sets")));
        }
        let sets: Vec<KSet> = ground.iter().collect();
        let meets = sets
            .iter()
            .map(|&a| {
                let mut row = BitSet::empty(sets.len());
                for (j, &b) in sets.iter().enumerate() {
                    if a.meets(b) {
                        row.insert(j);
                    }
                }
                row
            })
            .collect();
        Ok(Universe {
            ground,
            sets,
            meets,
        })
    }

    pub fn size(&self) -> usize {
        self.sets.len()
    }

    pub fn ground(&self) -> GroundSpec {
        self.ground
    }

    pub fn index_of(&self, s: KSet) -> Option<usize> {
        self.sets.binary_search(&s).ok()
    }

    pub fn to_bits(&self, f: &Family) -> BitSet {
        let mut b = BitSet::empty(self.size());
        for s in f.iter() {
            b.insert(self.index_of(s).expect("family over this universe"));
        }
        b
    }

    pub fn to_family(&self, b: &BitSet) -> Family {
        Family::from_sorted_unchecked(self.ground, b.ones().map(|i| self.sets[i]).collect())
    }

    /// Indices of all sets meeting every member of `b`.
    pub fn transversal(&self, b: &BitSet) -> BitSet {
        let mut t = BitSet::full(self.size());
        for i in b.ones() {
            t.and_with(&self.meets[i]);
        }
        t
    }

    /// Element mask common to all members, the full ground when `b` is empty.
    pub fn common(&self, b: &BitSet) -> u64 {
        b.ones()
            .fold(self.ground.mask(), |acc, i| acc & self.sets[i].mask())
    }
}

/// One node of the branch-and-bound tree.
///
/// `f` is always closed (`f = T(T(f))`), `t = T(f)`, and every index below `pos`
/// has been decided: it is either in `f` or excluded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub f: BitSet,
    pub t: BitSet,
    pub pos: usize,
}

/// The decision tree explored by [`max_product_search`].
///
/// Only closed `F` are visited, and only those with `|F| ≤ |T(F)|` are scored:
/// replacing `F` by `T(T(F))` keeps `G = T(F)` and cannot create a common
/// element, and the pair `(T(F), F)` covers the mirrored case.
#[derive(Debug, Clone)]
pub struct SearchSpace {
    uni: Universe,
    suffix_common: Vec<u64>,
}

impl SearchSpace {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        let uni = Universe::new(n, k)?;
        let m = uni.size();
        let mut suffix_common = vec![uni.ground.mask(); m + 1];
        for i in (0..m).rev() {
            suffix_common[i] = suffix_common[i + 1] & uni.sets[i].mask();
        }
        Ok(SearchSpace { uni, suffix_common })
    }

    pub fn universe(&self) -> &Universe {
        &self.uni
    }

    pub fn root(&self) -> Node {
        let t0 = self.uni.transversal(&BitSet::empty(self.uni.size()));
        let f = self.uni.transversal(&t0);
        let t = self.uni.transversal(&f);
        Node { f, t, pos: 0 }
    }

    /// The next undecided index.
    pub fn next(&self, node: &Node) -> Option<usize> {
        node.f.next_zero(node.pos)
    }

    /// Adds the next undecided set and closes; `None` if closing pulls in an excluded set.
    pub fn include(&self, node: &Node) -> Option<Node> {
        let s = self.next(node)?;
        let mut t = node.t.clone();
        t.and_with(&self.uni.meets[s]);
        let f = self.uni.transversal(&t);
        let added = f.difference(&node.f);
        if added.next_one(0) != Some(s) {
            return None;
        }
        Some(Node { f, t, pos: s + 1 })
    }

    /// Excludes the next undecided set.
    pub fn exclude(&self, node: &Node) -> Option<Node> {
        let s = self.next(node)?;
        Some(Node {
            f: node.f.clone(),
            t: node.t.clone(),
            pos: s + 1,
        })
    }

    /// Score of the node's own pair, if it is admissible and counted.
    pub fn candidate(&self, node: &Node) -> Option<u64> {
        let (fs, ts) = (node.f.count(), node.t.count());
        if fs == 0 || fs > ts || self.uni.common(&node.f) != 0 || self.uni.common(&node.t) != 0 {
            return None;
        }
        Some((fs * ts) as u64)
    }

    /// Upper bound on the score of every node in the subtree, this one included.
    pub fn bound(&self, node: &Node) -> u64 {
        let ts = node.t.count();
        if ts == 0 || self.uni.common(&node.t) != 0 {
            return 0;
        }
        if self.uni.common(&node.f) & self.suffix_common[node.pos.min(self.uni.size())] != 0 {
            return 0;
        }
        let m = self.uni.size();
        let undecided = m.saturating_sub(node.pos) - node.f.count_from(node.pos);
        let fmax = (node.f.count() + undecided).min(ts);
        (fmax * ts) as u64
    }
}

struct Dfs<'a> {
    space: &'a SearchSpace,
    best: u64,
    best_f: Option<BitSet>,
    nodes: u64,
    deadline: Option<Instant>,
    aborted: bool,
}

impl Dfs<'_> {
    fn visit(&mut self, node: Node) {
        if self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) && self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.aborted = true;
            return;
        }
        if let Some(p) = self.space.candidate(&node) {
            if p > self.best {
                self.best = p;
                self.best_f = Some(node.f.clone());
            }
        }
        if self.space.bound(&node) <= self.best {
            return;
        }
        if let Some(child) = self.space.include(&node) {
            self.visit(child);
        }
        if let Some(child) = self.space.exclude(&node) {
            self.visit(child);
        }
    }
}

/// Branch-and-bound for `max |F||T(F)|` over non-trivial pairs.
///
/// Seeded with the Hilton–Milner pair when `n > 2k ≥ 4`. Without a budget the
/// search runs to completion. When the budget runs out, or the instance is too
/// large to tabulate, the best pair known so far is reported with `optimal = false`.
pub fn max_product_search(n: u32, k: u32, budget: Option<Duration>) -> Result<SearchReport> {
    let ground = GroundSpec::full(n, k)?;
    let seed = if k >= 2 && n > 2 * k {
        Some(hm_family(n, k)?)
    } else {
        None
    };
    let space = match SearchSpace::new(n, k) {
        Ok(s) => s,
        Err(Error::TooLarge(_)) => {
            let pair = seed.map(|h| (h.clone(), h));
            return Ok(SearchReport::finish(n, k, "bnb", pair, false, 0));
        }
        Err(e) => return Err(e),
    };
    debug_assert_eq!(space.uni.ground, ground);
    let mut dfs = Dfs {
        space: &space,
        best: 0,
        best_f: None,
        nodes: 0,
        deadline: budget.map(|b| Instant::now() + b),
        aborted: false,
    };
    if let Some(h) = &seed {
        let bits = space.uni.to_bits(h);
        let t = space.uni.transversal(&bits);
        dfs.best = (bits.count() * t.count()) as u64;
        dfs.best_f = Some(bits);
    }
    dfs.visit(space.root());
    let optimal = !dfs.aborted;
    let pair = dfs.best_f.map(|fb| {
        let tb = space.uni.transversal(&fb);
        (space.uni.to_family(&fb), space.uni.to_family(&tb))
    });
    if let Some((f, g)) = &pair {
        let stats = PairStats::of(f, g)?;
        assert!(
            stats.is_admissible(),
            "search produced an inadmissible pair"
        );
    }
    Ok(SearchReport::finish(n, k, "bnb", pair, optimal, dfs.nodes))
}

struct Brute {
    sets: Vec<KSet>,
    meets: Vec<u32>,
    full: u32,
    ground_mask: u64,
}

impl Brute {
    fn new(n: u32, k: u32) -> Result<Self> {
        let ground = GroundSpec::full(n, k)?;
        let sets: Vec<KSet> = ground.iter().collect();
        if sets.len() > BRUTE_MAX_SETS {
            return Err(Error::TooLarge(format!(
                "C({n},{k}) = {} > {BRUTE_MAX_SETS}",
                sets.len()
            )));
        }
        let meets = sets
            .iter()
            .map(|&a| {
                sets.iter()
                    .enumerate()
                    .filter(|(_, &b)| a.meets(b))
                    .fold(0u32, |m, (j, _)| m | 1 << j)
            })
            .collect();
        Ok(Brute {
            full: ((1u64 << sets.len()) - 1) as u32,
            sets,
            meets,
            ground_mask: ground.mask(),
        })
    }

    fn transversal(&self, f: u32) -> u32 {
        bits(f).fold(self.full, |t, i| t & self.meets[i])
    }

    fn common(&self, f: u32) -> u64 {
        bits(f).fold(self.ground_mask, |c, i| c & self.sets[i].mask())
    }

    fn family(&self, ground: GroundSpec, f: u32) -> Family {
        Family::from_sorted_unchecked(ground, bits(f).map(|i| self.sets[i]).collect())
    }
}

fn bits(mut m: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let t = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(t)
        }
    })
}

/// Enumerates every `F ⊆ C([n],k)` and returns the maximal product together with
/// every maximizing pair `(F, T(F))`.
pub fn brute_optima(n: u32, k: u32) -> Result<(u64, Vec<(Family, Family)>)> {
    let b = Brute::new(n, k)?;
    let ground = GroundSpec::full(n, k)?;
    let mut best = 0u64;
    let mut optima: Vec<u32> = Vec::new();
    for f in 1..=b.full {
        if b.common(f) != 0 {
            continue;
        }
        let t = b.transversal(f);
        if t == 0 || b.common(t) != 0 {
            continue;
        }
        let p = f.count_ones() as u64 * t.count_ones() as u64;
        if p > best {
            best = p;
            optima.clear();
        }
        if p == best {
            optima.push(f);
        }
    }
    let pairs = optima
        .into_iter()
        .map(|f| (b.family(ground, f), b.family(ground, b.transversal(f))))
        .collect();
    Ok((best, pairs))
}

/// Exhaustive oracle over all `2^C(n,k)` choices of `F`, for `C(n,k) ≤ 21`.
pub fn brute_oracle(n: u32, k: u32) -> Result<SearchReport> {
    let (_, optima) = brute_optima(n, k)?;
    let nodes = 1u64 << GroundSpec::full(n, k)?.total();
    let pair = optima.into_iter().next();
    Ok(SearchReport::finish(n, k, "brute", pair, true, nodes))
}
