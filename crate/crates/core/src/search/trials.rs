use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use super::exact::{brute_optima, BRUTE_MAX_SETS};
use crate::error::{Error, Result};
use crate::exactmath::{binom, hm_size, ExactInt};
use crate::family::{are_cross_intersecting, transversal, Family};
use crate::io::FamilyView;
use crate::kset::{lex_family, GroundSpec, KSet};
use crate::shifting::{is_shifted, weight_pair};

/// Tally of one randomized driver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialReport {
    pub property_id: &'static str,
    pub n: u32,
    pub k: u32,
    pub u: Option<u32>,
    pub seed: u64,
    pub trials: u64,
    /// Trials whose pair satisfied the premise of the tested implication.
    pub hypothesis_hits: u64,
    /// Trials satisfying the stronger premise, for drivers that have one.
    pub strict_hits: Option<u64>,
    pub violations: u64,
    pub first_witness: Option<(Family, Family)>,
}

impl TrialReport {
    fn new(property_id: &'static str, n: u32, k: u32, seed: u64) -> Self {
        TrialReport {
            property_id,
            n,
            k,
            u: None,
            seed,
            trials: 0,
            hypothesis_hits: 0,
            strict_hits: None,
            violations: 0,
            first_witness: None,
        }
    }

    /// No trial met the premise, so the run says nothing.
    pub fn vacuous(&self) -> bool {
        self.hypothesis_hits == 0
    }

    fn violation(&mut self, f: &Family, g: &Family) {
        self.violations += 1;
        if self.first_witness.is_none() {
            self.first_witness = Some((f.clone(), g.clone()));
        }
    }
}

#[derive(Serialize)]
struct TrialReportView<'a> {
    property_id: &'a str,
    n: u32,
    k: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    u: Option<u32>,
    seed: u64,
    trials: u64,
    hypothesis_hits: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    strict_hits: Option<u64>,
    violations: u64,
    vacuous: bool,
    first_witness: Option<[FamilyView; 2]>,
}

impl Serialize for TrialReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TrialReportView {
            property_id: self.property_id,
            n: self.n,
            k: self.k,
            u: self.u,
            seed: self.seed,
            trials: self.trials,
            hypothesis_hits: self.hypothesis_hits,
            strict_hits: self.strict_hits,
            violations: self.violations,
            vacuous: self.vacuous(),
            first_witness: self
                .first_witness
                .as_ref()
                .map(|(f, g)| [f.into(), g.into()]),
        }
        .serialize(s)
    }
}

/// Shape of a generated pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairMode {
    /// Dense part of a star plus a few sets avoiding the centre.
    StarNoise,
    /// `{f0} ∪ (sets through 1 meeting g0)` with `G ∋ g0`.
    Pinned,
    /// Sparse uniform sample.
    Sparse,
}

fn bernoulli_subset(rng: &mut ChaCha8Rng, sets: impl Iterator<Item = KSet>, p: f64) -> Vec<KSet> {
    sets.filter(|_| rng.gen_bool(p)).collect()
}

fn random_kset_avoiding(rng: &mut ChaCha8Rng, n: u32, k: u32, avoid: u32) -> KSet {
    let mut pool: Vec<u32> = (1..=n).filter(|&x| x != avoid).collect();
    pool.shuffle(rng);
    KSet::from_elems(&pool[..k as usize]).expect("valid elements")
}

/// Random cross-intersecting pair `(F, G)` with `G ⊆ T(F)`.
///
/// The mode mix is biased toward stars and pinned families so that the
/// degree and size premises of the drivers are hit with useful frequency.
pub fn random_ci_pair(rng: &mut ChaCha8Rng, n: u32, k: u32) -> Result<(Family, Family, PairMode)> {
    let ground = GroundSpec::full(n, k)?;
    let roll: f64 = rng.gen();
    let mode = if roll < 0.4 {
        PairMode::StarNoise
    } else if roll < 0.8 && n > k + 1 {
        PairMode::Pinned
    } else {
        PairMode::Sparse
    };
    let f = match mode {
        PairMode::StarNoise => {
            let x = if rng.gen_bool(0.5) {
                1
            } else {
                rng.gen_range(1..=n)
            };
            let p = 1.0 - 0.7 * rng.gen::<f64>().powi(2);
            let mut members = bernoulli_subset(rng, ground.iter().filter(|s| s.contains(x)), p);
            if n > k {
                for _ in 0..rng.gen_range(0..=3) {
                    members.push(random_kset_avoiding(rng, n, k, x));
                }
            }
            Family::new(ground, members)?
        }
        PairMode::Pinned => {
            let (f0, g0) = loop {
                let a = random_kset_avoiding(rng, n, k, 1);
                let b = random_kset_avoiding(rng, n, k, 1);
                if a.meets(b) {
                    break (a, b);
                }
            };
            let p = 1.0 - 0.6 * rng.gen::<f64>();
            let mut members = bernoulli_subset(
                rng,
                ground.iter().filter(|s| s.contains(1) && s.meets(g0)),
                p,
            );
            members.push(f0);
            let f = Family::new(ground, members)?;
            let t = transversal(&f, k)?;
            let q = 1.0 - 0.5 * rng.gen::<f64>();
            let mut g_members = bernoulli_subset(rng, t.iter(), q);
            g_members.push(g0);
            return Ok((f, Family::new(ground, g_members)?, mode));
        }
        PairMode::Sparse => {
            let p = 0.02 + 0.1 * rng.gen::<f64>();
            Family::new(ground, bernoulli_subset(rng, ground.iter(), p))?
        }
    };
    let t = transversal(&f, k)?;
    let q = 1.0 - 0.5 * rng.gen::<f64>();
    let g = Family::new(ground, bernoulli_subset(rng, t.iter(), q))?;
    Ok((f, g, mode))
}

fn check_trial_n(n: u32) -> Result<()> {
    if n > 16 {
        return Err(Error::OutOfRange(format!(
            "trial drivers need n <= 16, got {n}"
        )));
    }
    Ok(())
}

/// `(L(n,k,|F|), L(n,k,|G|))` is cross-intersecting.
pub fn hilton_check(f: &Family, g: &Family) -> Result<bool> {
    let ground = GroundSpec::full(f.n(), f.k())?;
    let lf = lex_family(&ground, f.len() as u64)?;
    let lg = lex_family(&ground.with_k(g.k())?, g.len() as u64)?;
    are_cross_intersecting(&lf, &lg)
}

/// Random CI pairs stay CI after replacing both families by lex initial segments.
pub fn hilton_trial(n: u32, k: u32, trials: u64, seed: u64) -> Result<TrialReport> {
    check_trial_n(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = TrialReport::new("hilton", n, k, seed);
    for _ in 0..trials {
        let (f, g, _) = random_ci_pair(&mut rng, n, k)?;
        rep.trials += 1;
        rep.hypothesis_hits += 1;
        if !hilton_check(&f, &g)? {
            rep.violation(&f, &g);
        }
    }
    Ok(rep)
}

/// Conclusions of the star-split construction on one pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarSplitOutcome {
    /// `|F(1̂)|, |G(1̂)| ≥ C(n−2,k−2)` and both families non-trivial.
    pub premise: bool,
    /// `min(|F(1̂)|, |G(1̂)|) > C(n−2,k−2)` on top of the premise.
    pub strict_premise: bool,
    /// `F0 ∪ G1` and `F1 ∪ G0` are intersecting.
    pub unions_intersecting: bool,
    /// Both unions are non-trivial.
    pub unions_non_trivial: bool,
    /// `|F| + |G| ≤ 2h(n,k)`.
    pub size_sum_ok: bool,
}

impl StarSplitOutcome {
    /// Every conclusion required under the premises that hold.
    pub fn consistent(&self) -> bool {
        !self.premise
            || (self.unions_intersecting
                && (!self.strict_premise || (self.unions_non_trivial && self.size_sum_ok)))
    }
}

/// Builds `F1 = L([n],k,|F(1̂)|)`, `F0 = L([2,n],k,|F(1̄)|)` and likewise for `G`,
/// and evaluates the split conclusions. Needs `n > 2k ≥ 4`.
pub fn star_split_check(f: &Family, g: &Family) -> Result<StarSplitOutcome> {
    let (n, k) = (f.n(), f.k());
    if g.k() != k || g.n() != n || k < 2 || n <= 2 * k {
        return Err(Error::Precondition(
            "star split needs matching k-uniform pairs with n > 2k >= 4".into(),
        ));
    }
    let full = GroundSpec::full(n, k)?;
    let inner = GroundSpec::new(2, n, k)?;
    let (f_in, f_out) = (
        f.restrict_in(1)?.len() as u64,
        f.restrict_out(1)?.len() as u64,
    );
    let (g_in, g_out) = (
        g.restrict_in(1)?.len() as u64,
        g.restrict_out(1)?.len() as u64,
    );
    let threshold = binom(n as i64 - 2, k as i64 - 2);
    let threshold = u64::try_from(threshold).expect("small binomial");
    let premise =
        f.is_non_trivial() && g.is_non_trivial() && f_in >= threshold && g_in >= threshold;
    let strict_premise = premise && f_in.min(g_in) > threshold;

    let f1 = lex_family(&full, f_in)?;
    let f0 = lex_family(&inner, f_out)?;
    let g1 = lex_family(&full, g_in)?;
    let g0 = lex_family(&inner, g_out)?;
    let u1 = f0.union(&g1)?;
    let u2 = f1.union(&g0)?;
    let h = hm_size(n as i64, k as i64)?;
    Ok(StarSplitOutcome {
        premise,
        strict_premise,
        unions_intersecting: u1.is_intersecting() && u2.is_intersecting(),
        unions_non_trivial: u1.is_non_trivial() && u2.is_non_trivial(),
        size_sum_ok: BigInt::from(f.len() + g.len()) <= BigInt::from(2) * h,
    })
}

/// Star-split driver over random non-trivial CI pairs.
pub fn star_split_trial(n: u32, k: u32, trials: u64, seed: u64) -> Result<TrialReport> {
    check_trial_n(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = TrialReport::new("starsplit", n, k, seed);
    let mut strict = 0;
    for _ in 0..trials {
        let (f, g, _) = random_ci_pair(&mut rng, n, k)?;
        rep.trials += 1;
        let out = star_split_check(&f, &g)?;
        if out.premise {
            rep.hypothesis_hits += 1;
        }
        if out.strict_premise {
            strict += 1;
        }
        if !out.consistent() {
            rep.violation(&f, &g);
        }
    }
    rep.strict_hits = Some(strict);
    Ok(rep)
}

/// `C(n−1,k−1) − C(n−u−1,k−1) + C(n−u−1,k−u)`.
pub fn fk_threshold(n: u32, k: u32, u: u32) -> ExactInt {
    let (n, k, u) = (n as i64, k as i64, u as i64);
    binom(n - 1, k - 1) - binom(n - u - 1, k - 1) + binom(n - u - 1, k - u)
}

/// Diversity conclusion for a CI pair above the size threshold: `None` when the
/// premise fails, otherwise whether both conclusions hold.
pub fn fk_check(f: &Family, g: &Family, u: u32) -> Result<Option<bool>> {
    let (n, k) = (f.n(), f.k());
    if !(3..=k).contains(&u) {
        return Err(Error::OutOfRange(format!(
            "u must satisfy 3 <= u <= k, got u={u}, k={k}"
        )));
    }
    if n < 2 * k {
        return Err(Error::OutOfRange(format!(
            "fk needs n >= 2k, got n={n}, k={k}"
        )));
    }
    let thr = fk_threshold(n, k, u);
    if BigInt::from(f.len()) <= thr || BigInt::from(g.len()) <= thr {
        return Ok(None);
    }
    let bound = binom((n - u - 1) as i64, (k - u) as i64);
    let div_ok = BigInt::from(f.diversity()) < bound && BigInt::from(g.diversity()) < bound;
    let mf = f.max_degree_elements();
    let mg = g.max_degree_elements();
    Ok(Some(div_ok && mf.len() == 1 && mf == mg))
}

/// Diversity driver over random CI pairs; non-triviality is not required here.
pub fn fk_diversity_trial(n: u32, k: u32, u: u32, trials: u64, seed: u64) -> Result<TrialReport> {
    check_trial_n(n)?;
    if !(3..=k).contains(&u) {
        return Err(Error::OutOfRange(format!(
            "u must satisfy 3 <= u <= k, got u={u}, k={k}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = TrialReport::new("fk", n, k, seed);
    rep.u = Some(u);
    for _ in 0..trials {
        let (f, g, _) = random_ci_pair(&mut rng, n, k)?;
        rep.trials += 1;
        match fk_check(&f, &g, u)? {
            None => {}
            Some(ok) => {
                rep.hypothesis_hits += 1;
                if !ok {
                    rep.violation(&f, &g);
                }
            }
        }
    }
    Ok(rep)
}

/// Size-sum driver: `min(|F|,|G|) ≥ C(n−3,k−3) + C(n−4,k−3)` implies `|F|+|G| ≤ 2C(n−1,k−1)`.
pub fn size_sum_trial(n: u32, k: u32, trials: u64, seed: u64) -> Result<TrialReport> {
    check_trial_n(n)?;
    if k < 3 || n < 2 * k {
        return Err(Error::OutOfRange(format!(
            "sizesum needs n >= 2k and k >= 3, got n={n}, k={k}"
        )));
    }
    let (ni, ki) = (n as i64, k as i64);
    let premise_min = binom(ni - 3, ki - 3) + binom(ni - 4, ki - 3);
    let bound = BigInt::from(2) * binom(ni - 1, ki - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = TrialReport::new("sizesum", n, k, seed);
    for _ in 0..trials {
        let (f, g, _) = random_ci_pair(&mut rng, n, k)?;
        rep.trials += 1;
        if BigInt::from(f.len().min(g.len())) < premise_min {
            continue;
        }
        rep.hypothesis_hits += 1;
        if BigInt::from(f.len() + g.len()) > bound {
            rep.violation(&f, &g);
        }
    }
    Ok(rep)
}

/// One maximizing pair as seen by [`prop21_diagnostic`].
#[derive(Debug, Clone, Serialize)]
pub struct OptimumDiagnostic {
    pub f: FamilyView,
    pub g: FamilyView,
    pub product: u64,
    #[serde(serialize_with = "crate::io::ser_int")]
    pub weight: ExactInt,
    pub weight_minimal: bool,
    pub both_shifted: bool,
    /// Conclusions that hold for this pair, among
    /// `min_at_most_c_n_km2`, `product_at_most_h2`, `min_at_most_resistant_bound`.
    pub branches: Vec<&'static str>,
    /// Weight-minimal optimum whose applicable conclusion fails.
    pub apparent_violation: bool,
}

/// Diagnostic sweep of the shifted / shift-resistant dichotomy over all optima.
#[derive(Debug, Clone, Serialize)]
pub struct Prop21Report {
    pub n: u32,
    pub k: u32,
    pub best_product: u64,
    #[serde(serialize_with = "crate::io::ser_int")]
    pub hm_square: ExactInt,
    pub optima: Vec<OptimumDiagnostic>,
    pub apparent_violations: usize,
}

/// Checks which conclusions each brute-force optimum satisfies. Diagnostic only:
/// the hypothesis ranges over all maximizers, so nothing here is a hard failure.
pub fn prop21_diagnostic(n: u32, k: u32) -> Result<Prop21Report> {
    let total = GroundSpec::full(n, k)?.total();
    if total > BRUTE_MAX_SETS as u64 {
        return Err(Error::TooLarge(format!(
            "C({n},{k}) = {total} > {BRUTE_MAX_SETS}"
        )));
    }
    let h = hm_size(n as i64, k as i64)?;
    let h2 = &h * &h;
    let (best, pairs) = brute_optima(n, k)?;
    let (ni, ki) = (n as i64, k as i64);
    let shifted_min = binom(ni, ki - 2);
    let resistant_min = binom(ni - 2, ki - 2) + binom(ni - 4, ki - 2);
    let weights: Vec<ExactInt> = pairs.iter().map(|(f, g)| weight_pair(f, g)).collect();
    let wmin = weights.iter().min().cloned();
    let mut optima = Vec::with_capacity(pairs.len());
    for ((f, g), w) in pairs.iter().zip(weights) {
        let min = BigInt::from(f.len().min(g.len()));
        let product = (f.len() * g.len()) as u64;
        let both_shifted = is_shifted(f) && is_shifted(g);
        let mut branches = Vec::new();
        if min <= shifted_min {
            branches.push("min_at_most_c_n_km2");
        }
        if BigInt::from(product) <= h2 {
            branches.push("product_at_most_h2");
        }
        if min <= resistant_min {
            branches.push("min_at_most_resistant_bound");
        }
        let weight_minimal = Some(&w) == wmin.as_ref();
        let applicable_ok = if both_shifted {
            branches.contains(&"min_at_most_c_n_km2") || branches.contains(&"product_at_most_h2")
        } else {
            branches.contains(&"min_at_most_resistant_bound")
        };
        optima.push(OptimumDiagnostic {
            f: f.into(),
            g: g.into(),
            product,
            weight: w,
            weight_minimal,
            both_shifted,
            branches,
            apparent_violation: weight_minimal && !applicable_ok,
        });
    }
    let apparent_violations = optima.iter().filter(|o| o.apparent_violation).count();
    Ok(Prop21Report {
        n,
        k,
        best_product: best,
        hm_square: h2,
        optima,
        apparent_violations,
    })
}
