//! Search for the maximal product `|F||G|` over non-trivial cross-intersecting
//! pairs, and seeded randomized drivers for the structural lemmas.
//!
//! Exact search always takes `G = T(F)`, the transversal of `F`: any admissible
//! pair `(F, G)` is dominated by `(F, T(F))`, since enlarging `G` keeps the pair
//! cross-intersecting and cannot create a common element.

mod bitset;
mod exact;
mod trials;

use serde::{Serialize, Serializer};

use crate::exactmath::{hm_size, ExactInt};
use crate::family::Family;
use crate::io::FamilyView;

pub use bitset::BitSet;
pub use exact::{
    brute_optima, brute_oracle, max_product_search, Node, SearchSpace, Universe, BRUTE_MAX_SETS,
};
pub use trials::{
    fk_check, fk_diversity_trial, fk_threshold, hilton_check, hilton_trial, prop21_diagnostic,
    random_ci_pair, size_sum_trial, star_split_check, star_split_trial, OptimumDiagnostic,
    PairMode, Prop21Report, StarSplitOutcome, TrialReport,
};

/// Outcome of an exact or budgeted search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub n: u32,
    pub k: u32,
    pub mode: &'static str,
    pub best_product: ExactInt,
    pub best_pair: Option<(Family, Family)>,
    /// True iff the search space was exhausted.
    pub optimal: bool,
    pub nodes_explored: u64,
    pub budget_exhausted: bool,
    pub hm_square: Option<ExactInt>,
    pub matches_conjecture: bool,
}

impl SearchReport {
    pub(crate) fn finish(
        n: u32,
        k: u32,
        mode: &'static str,
        best_pair: Option<(Family, Family)>,
        optimal: bool,
        nodes_explored: u64,
    ) -> Self {
        let best_product = best_pair
            .as_ref()
            .map_or(ExactInt::from(0), |(f, g)| f.size() * g.size());
        let hm_square = hm_size(n as i64, k as i64).ok().map(|h| &h * &h);
        let matches_conjecture = optimal && hm_square.as_ref() == Some(&best_product);
        SearchReport {
            n,
            k,
            mode,
            best_product,
            best_pair,
            optimal,
            nodes_explored,
            budget_exhausted: !optimal,
            hm_square,
            matches_conjecture,
        }
    }

    /// The best product found exceeds `h(n,k)²`.
    pub fn exceeds_conjecture(&self) -> bool {
        self.hm_square
            .as_ref()
            .is_some_and(|h2| &self.best_product > h2)
    }
}

#[derive(Serialize)]
struct SearchReportView<'a> {
    n: u32,
    k: u32,
    mode: &'a str,
    #[serde(serialize_with = "crate::io::ser_int")]
    best_product: &'a ExactInt,
    best_f: Option<FamilyView>,
    best_g: Option<FamilyView>,
    optimal: bool,
    nodes_explored: u64,
    budget_exhausted: bool,
    #[serde(serialize_with = "ser_opt_int")]
    hm_square: &'a Option<ExactInt>,
    matches_conjecture: bool,
}

fn ser_opt_int<S: Serializer>(v: &&Option<ExactInt>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => crate::io::ser_int(x, s),
        None => s.serialize_none(),
    }
}

impl Serialize for SearchReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SearchReportView {
            n: self.n,
            k: self.k,
            mode: self.mode,
            best_product: &self.best_product,
            best_f: self.best_pair.as_ref().map(|p| FamilyView::from(&p.0)),
            best_g: self.best_pair.as_ref().map(|p| FamilyView::from(&p.1)),
            optimal: self.optimal,
            nodes_explored: self.nodes_explored,
            budget_exhausted: self.budget_exhausted,
            hm_square: &self.hm_square,
            matches_conjecture: self.matches_conjecture,
        }
        .serialize(s)
    }
}
