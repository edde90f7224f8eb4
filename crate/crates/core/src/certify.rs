//! Pointwise exact certification of the binomial inequalities.
//!
//! Each record stores the two integers that were actually compared, oriented so
//! that a record holds iff `lhs > rhs`. Both sides are recomputable from
//! `(lemma_id, n, k, t)` alone.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Pow;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{
    binom, exceeds_two_b_sides, f_lemma, hm_size, pow_ratio_lt, ratio, to_decimal, ExactInt,
    ExactRatio,
};

/// Flag set on records evaluated outside the range the inequality is claimed for.
pub const OUTSIDE_PAPER_RANGE: &str = "outside_paper_range";
/// Flag set on records with `k` below the smallest `k` the inequality is claimed for.
pub const BELOW_CLAIMED_K: &str = "below_claimed_k";

/// Which inequality a record certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaId {
    /// `h²·(2t−1)^(k−1) > C(n−1,k−1)²·((2t−1)^(k−1) − 2(2t−3)^(k−1))` for `2k < n ≤ tk`.
    RatioBound,
    /// `A + h²/A > 2C(n−1,k−1)` with `A = C(n−2,k−2) + 2C(n−3,k−2)`, `2k+1 ≤ n ≤ 3k`.
    Key,
    /// Same with `A = C(n−2,k−2) + C(n−4,k−2)`, `2k+1 ≤ n ≤ 4k`.
    Key1,
    /// Same with `A = C(n,k−2)`, `3k ≤ n ≤ 4k`.
    Key2,
    /// `C(n−2,k−2) + 2C(n−3,k−2) > C(n,k−2)` for `n ≥ 3k`.
    #[serde(rename = "ratio_3k")]
    Ratio3k,
    /// `f(k+1) < f(k)`, i.e. `5k² > 3(k+1)²`, for `k ≥ 24`.
    FMono,
    /// `(5/7)^(k−1) < 1/32`, i.e. `7^(k−1) > 32·5^(k−1)`.
    #[serde(rename = "pow57_threshold")]
    Pow57Threshold,
}

impl LemmaId {
    pub const ALL: [LemmaId; 7] = [
        LemmaId::RatioBound,
        LemmaId::Key,
        LemmaId::Key1,
        LemmaId::Key2,
        LemmaId::Ratio3k,
        LemmaId::FMono,
        LemmaId::Pow57Threshold,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LemmaId::RatioBound => "ratio_bound",
            LemmaId::Key => "key",
            LemmaId::Key1 => "key1",
            LemmaId::Key2 => "key2",
            LemmaId::Ratio3k => "ratio_3k",
            LemmaId::FMono => "f_mono",
            LemmaId::Pow57Threshold => "pow57_threshold",
        }
    }

    /// Smallest `k` the inequality is asserted for.
    pub fn claimed_min_k(self) -> u32 {
        match self {
            LemmaId::RatioBound => 2,
            LemmaId::Key | LemmaId::Key1 | LemmaId::Key2 => 8,
            LemmaId::Ratio3k => 3,
            LemmaId::FMono => 24,
            LemmaId::Pow57Threshold => 11,
        }
    }

    /// Smallest `k` the evaluation is defined for.
    pub fn defined_min_k(self) -> u32 {
        match self {
            LemmaId::RatioBound | LemmaId::Key | LemmaId::Key1 | LemmaId::Key2 => 2,
            LemmaId::Ratio3k => 3,
            LemmaId::FMono | LemmaId::Pow57Threshold => 1,
        }
    }

    /// Whether records carry an `n` coordinate.
    pub fn has_n(self) -> bool {
        !matches!(self, LemmaId::FMono | LemmaId::Pow57Threshold)
    }

    /// The claimed `n`-range for this `k` (and `t`), inclusive.
    pub fn n_range(self, k: u32, t: Option<u32>) -> Option<(u32, u32)> {
        match self {
            LemmaId::RatioBound => t.map(|t| (2 * k + 1, t * k)),
            LemmaId::Key => Some((2 * k + 1, 3 * k)),
            LemmaId::Key1 => Some((2 * k + 1, 4 * k)),
            LemmaId::Key2 | LemmaId::Ratio3k => Some((3 * k, 4 * k)),
            LemmaId::FMono | LemmaId::Pow57Threshold => None,
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LemmaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ratio" | "ratio_bound" => Ok(LemmaId::RatioBound),
            "key" => Ok(LemmaId::Key),
            "key1" => Ok(LemmaId::Key1),
            "key2" => Ok(LemmaId::Key2),
            "ratio_3k" | "ratio3k" => Ok(LemmaId::Ratio3k),
            "f_mono" | "fmono" => Ok(LemmaId::FMono),
            "pow57" | "pow57_threshold" => Ok(LemmaId::Pow57Threshold),
            other => Err(Error::UnknownLemma(other.to_string())),
        }
    }
}

/// One certified instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertRecord {
    pub lemma_id: LemmaId,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u32>,
    pub k: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t: Option<u32>,
    #[serde(with = "crate::io::int_string")]
    pub lhs: ExactInt,
    #[serde(with = "crate::io::int_string")]
    pub rhs: ExactInt,
    pub holds: bool,
    #[serde(default)]
    pub flags: Vec<String>,
}

impl CertRecord {
    fn new(
        lemma_id: LemmaId,
        n: Option<u32>,
        k: u32,
        t: Option<u32>,
        lhs: ExactInt,
        rhs: ExactInt,
    ) -> Self {
        let holds = lhs > rhs;
        let mut rec = CertRecord {
            lemma_id,
            n,
            k,
            t,
            lhs,
            rhs,
            holds,
            flags: Vec::new(),
        };
        if !rec.in_claimed_range() {
            rec.flags.push(OUTSIDE_PAPER_RANGE.to_string());
        }
        if k < lemma_id.claimed_min_k() {
            rec.flags.push(BELOW_CLAIMED_K.to_string());
        }
        rec
    }

    fn in_claimed_range(&self) -> bool {
        match (self.lemma_id.n_range(self.k, self.t), self.n) {
            (Some((lo, hi)), Some(n)) => {
                let hi = if self.lemma_id == LemmaId::Ratio3k {
                    u32::MAX
                } else {
                    hi
                };
                lo <= n && n <= hi
            }
            _ => true,
        }
    }

    pub fn outside_paper_range(&self) -> bool {
        self.flags.iter().any(|f| f == OUTSIDE_PAPER_RANGE)
    }
}

fn h_of(n: u32, k: u32) -> Result<ExactInt> {
    hm_size(n as i64, k as i64)
}

fn ni(x: u32) -> i64 {
    x as i64
}

/// `C(n−2,k−2) + 2C(n−3,k−2)`.
pub fn key_a(n: u32, k: u32) -> ExactInt {
    binom(ni(n) - 2, ni(k) - 2) + BigInt::from(2) * binom(ni(n) - 3, ni(k) - 2)
}

/// `C(n−2,k−2) + C(n−4,k−2)`.
pub fn key1_a(n: u32, k: u32) -> ExactInt {
    binom(ni(n) - 2, ni(k) - 2) + binom(ni(n) - 4, ni(k) - 2)
}

/// `C(n,k−2)`.
pub fn key2_a(n: u32, k: u32) -> ExactInt {
    binom(ni(n), ni(k) - 2)
}

/// `x = A / C(n−1,k−1)` for [`key_a`] in closed form: `(k−1)(3n−2k−2) / ((n−1)(n−2))`.
pub fn key_x(n: u32, k: u32) -> ExactRatio {
    let (n, k) = (ni(n), ni(k));
    ratio((k - 1) * (3 * n - 2 * k - 2), (n - 1) * (n - 2))
}

/// Closed form of `A / C(n−1,k−1)` for [`key1_a`].
pub fn key1_x(n: u32, k: u32) -> ExactRatio {
    let (n, k) = (ni(n), ni(k));
    ratio(k - 1, n - 1) + ratio((k - 1) * (n - k) * (n - k - 1), (n - 1) * (n - 2) * (n - 3))
}

/// Closed form of `A / C(n−1,k−1)` for [`key2_a`]: `(k−1)n / ((n−k+2)(n−k+1))`.
pub fn key2_x(n: u32, k: u32) -> ExactRatio {
    let (n, k) = (ni(n), ni(k));
    ratio((k - 1) * n, (n - k + 2) * (n - k + 1))
}

fn key_family(lemma: LemmaId, n: u32, k: u32) -> Result<CertRecord> {
    if k < 2 || n < 2 * k {
        return Err(Error::OutOfRange(format!(
            "{lemma} needs k >= 2 and n >= 2k, got n={n}, k={k}"
        )));
    }
    let a = match lemma {
        LemmaId::Key => key_a(n, k),
        LemmaId::Key1 => key1_a(n, k),
        LemmaId::Key2 => key2_a(n, k),
        _ => unreachable!("not a key lemma"),
    };
    let h = h_of(n, k)?;
    let b = binom(ni(n) - 1, ni(k) - 1);
    let (lhs, rhs) = exceeds_two_b_sides(&a, &(&h * &h), &b)?;
    Ok(CertRecord::new(lemma, Some(n), k, None, lhs, rhs))
}

/// Evaluates a lemma instance without enforcing its claimed range.
///
/// Records outside the claimed range carry [`OUTSIDE_PAPER_RANGE`]. Errors only
/// when the quantities involved are undefined.
pub fn evaluate(lemma: LemmaId, n: Option<u32>, k: u32, t: Option<u32>) -> Result<CertRecord> {
    if k < lemma.defined_min_k() {
        return Err(Error::OutOfRange(format!("{lemma} is undefined for k={k}")));
    }
    let need_n = || n.ok_or_else(|| Error::OutOfRange(format!("{lemma} needs n")));
    match lemma {
        LemmaId::RatioBound => {
            let n = need_n()?;
            let t = t.ok_or_else(|| Error::OutOfRange("ratio_bound needs t".into()))?;
            if t < 2 || n <= 2 * k {
                return Err(Error::OutOfRange(format!(
                    "ratio_bound needs n > 2k and t >= 2, got n={n}, k={k}, t={t}"
                )));
            }
            let h = h_of(n, k)?;
            let c = binom(ni(n) - 1, ni(k) - 1);
            let d: BigInt = Pow::pow(BigInt::from(2 * t - 1), k - 1);
            let e: BigInt = Pow::pow(BigInt::from(2 * t - 3), k - 1);
            let lhs = &h * &h * &d;
            let rhs = &c * &c * (d - BigInt::from(2) * e);
            Ok(CertRecord::new(lemma, Some(n), k, Some(t), lhs, rhs))
        }
        LemmaId::Key | LemmaId::Key1 | LemmaId::Key2 => key_family(lemma, need_n()?, k),
        LemmaId::Ratio3k => {
            let n = need_n()?;
            if n + 2 < k {
                return Err(Error::OutOfRange(format!(
                    "ratio_3k needs n >= k-2, got n={n}, k={k}"
                )));
            }
            Ok(CertRecord::new(
                lemma,
                Some(n),
                k,
                None,
                key_a(n, k),
                key2_a(n, k),
            ))
        }
        LemmaId::FMono => {
            let k2 = BigInt::from(k) * k;
            let k1 = BigInt::from(k + 1) * (k + 1);
            Ok(CertRecord::new(
                lemma,
                None,
                k,
                None,
                BigInt::from(5) * k2,
                BigInt::from(3) * k1,
            ))
        }
        LemmaId::Pow57Threshold => {
            let lhs: BigInt = Pow::pow(BigInt::from(7), k - 1);
            let rhs: BigInt = BigInt::from(32) * Pow::pow(BigInt::from(5), k - 1);
            Ok(CertRecord::new(lemma, None, k, None, lhs, rhs))
        }
    }
}

fn check_range(lemma: LemmaId, n: u32, k: u32, t: Option<u32>) -> Result<()> {
    let (lo, hi) = lemma.n_range(k, t).expect("lemma with n-range");
    if n < lo || n > hi {
        return Err(Error::OutOfRange(format!(
            "{lemma}: n={n} outside {lo}..={hi} for k={k}"
        )));
    }
    Ok(())
}

/// Ratio bound, strict on `2k < n ≤ tk`, `t ≥ 3`.
pub fn check_ratio_bound(n: u32, k: u32, t: u32) -> Result<CertRecord> {
    if t < 3 {
        return Err(Error::OutOfRange(format!(
            "ratio_bound needs t >= 3, got {t}"
        )));
    }
    check_range(LemmaId::RatioBound, n, k, Some(t))?;
    evaluate(LemmaId::RatioBound, Some(n), k, Some(t))
}

/// Strict on `2k+1 ≤ n ≤ 3k`.
pub fn check_key(n: u32, k: u32) -> Result<CertRecord> {
    check_range(LemmaId::Key, n, k, None)?;
    evaluate(LemmaId::Key, Some(n), k, None)
}

/// Strict on `2k+1 ≤ n ≤ 4k`.
pub fn check_key1(n: u32, k: u32) -> Result<CertRecord> {
    check_range(LemmaId::Key1, n, k, None)?;
    evaluate(LemmaId::Key1, Some(n), k, None)
}

/// Strict on `3k ≤ n ≤ 4k`.
pub fn check_key2(n: u32, k: u32) -> Result<CertRecord> {
    check_range(LemmaId::Key2, n, k, None)?;
    evaluate(LemmaId::Key2, Some(n), k, None)
}

/// `C(n,k−2) < C(n−2,k−2) + 2C(n−3,k−2)`. Values of `n < 3k` are evaluated and flagged.
pub fn check_ratio_3k(n: u32, k: u32) -> Result<CertRecord> {
    if k < 3 {
        return Err(Error::OutOfRange(format!("ratio_3k needs k >= 3, got {k}")));
    }
    evaluate(LemmaId::Ratio3k, Some(n), k, None)
}

/// Parameters of a certification sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridParams {
    pub k_lo: u32,
    pub k_hi: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t: Option<u32>,
    /// Restricts the sweep to one `n`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u32>,
    pub strict: bool,
}

/// A `cert/1` document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub lemma_id: LemmaId,
    pub params: GridParams,
    pub records: Vec<CertRecord>,
    pub all_hold: bool,
    pub tool_version: String,
    #[serde(default)]
    pub produced_at: Option<String>,
}

pub const CERT_SCHEMA: &str = "cert/1";

/// Sweeps a lemma over its full `(n,k)` grid for `k_lo ≤ k ≤ k_hi`.
pub fn certify_grid(lemma: LemmaId, k_lo: u32, k_hi: u32, t: Option<u32>) -> Result<Certificate> {
    certify(
        lemma,
        &GridParams {
            k_lo,
            k_hi,
            t,
            n: None,
            strict: true,
        },
    )
}

/// General sweep. With `strict`, a fixed `n` outside the claimed range is an
/// error; otherwise it is evaluated and flagged.
pub fn certify(lemma: LemmaId, params: &GridParams) -> Result<Certificate> {
    if params.k_lo > params.k_hi {
        return Err(Error::OutOfRange(format!(
            "empty k-range {}..{}",
            params.k_lo, params.k_hi
        )));
    }
    if params.k_lo < lemma.defined_min_k() {
        return Err(Error::OutOfRange(format!(
            "{lemma} is undefined for k={}",
            params.k_lo
        )));
    }
    if lemma == LemmaId::RatioBound {
        match params.t {
            None => return Err(Error::OutOfRange("ratio_bound needs t".into())),
            Some(t) if t < 3 && params.strict => {
                return Err(Error::OutOfRange(format!(
                    "ratio_bound needs t >= 3, got {t}"
                )))
            }
            _ => {}
        }
    }
    let mut points: Vec<(Option<u32>, u32)> = Vec::new();
    for k in params.k_lo..=params.k_hi {
        match lemma.n_range(k, params.t) {
            None => {
                if params.n.is_some() {
                    return Err(Error::OutOfRange(format!("{lemma} takes no n")));
                }
                points.push((None, k));
            }
            Some((lo, hi)) => match params.n {
                Some(n) => {
                    let claimed = if lemma == LemmaId::Ratio3k {
                        n >= lo
                    } else {
                        lo <= n && n <= hi
                    };
                    if !claimed && params.strict {
                        return Err(Error::OutOfRange(format!(
                            "{lemma}: n={n} outside {lo}..={hi} for k={k}"
                        )));
                    }
                    points.push((Some(n), k));
                }
                None => points.extend((lo..=hi).map(|n| (Some(n), k))),
            },
        }
    }
    let records = points
        .into_par_iter()
        .map(|(n, k)| evaluate(lemma, n, k, params.t))
        .collect::<Result<Vec<_>>>()?;
    let all_hold = records.iter().all(|r| r.holds);
    Ok(Certificate {
        schema: CERT_SCHEMA.to_string(),
        lemma_id: lemma,
        params: params.clone(),
        records,
        all_hold,
        tool_version: crate::TOOL_VERSION.to_string(),
        produced_at: None,
    })
}

/// Re-derives every record of a certificate from its coordinates.
pub fn recheck(cert: &Certificate) -> Result<bool> {
    for rec in &cert.records {
        let again = evaluate(rec.lemma_id, rec.n, rec.k, rec.t)?;
        if again != *rec {
            return Ok(false);
        }
    }
    Ok(cert.all_hold == cert.records.iter().all(|r| r.holds))
}

/// Findings of the exact threshold scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AppendixReport {
    pub max_k: u32,
    /// Smallest `k` from which `(5/7)^(k−1) < 1/32` holds through `max_k`.
    pub pow57_min_k: Option<u32>,
    pub pow57_claimed_min_k: u32,
    /// Truth value at the claimed threshold.
    pub pow57_at_claimed_k: bool,
    /// Smallest `k ≥ 2` from which `f(k) < 1` holds through `max_k`.
    pub f_min_k: Option<u32>,
    pub f_claimed_min_k: u32,
    /// `f(24)` rounded to 6 decimals from the exact rational.
    pub f24_decimal: String,
    pub f24_lt_one: bool,
    /// `f(k+1) < f(k)` for `24 ≤ k < max_k`.
    pub f_mono_holds: bool,
    pub f_mono_failures: Vec<u32>,
    /// Pointwise key1/key2 truth on `k ∈ 8..=12`, independent of the threshold step.
    pub key1_pointwise_8_12: bool,
    pub key2_pointwise_8_12: bool,
    pub discrepancies: Vec<String>,
}

impl AppendixReport {
    /// The conclusions the scan feeds into all hold, irrespective of discrepancies.
    pub fn conclusions_hold(&self) -> bool {
        self.f24_lt_one && self.f_mono_holds && self.key1_pointwise_8_12 && self.key2_pointwise_8_12
    }
}

fn threshold_from(lo: u32, hi: u32, pred: impl Fn(u32) -> bool) -> Option<u32> {
    let mut first = None;
    for k in (lo..=hi).rev() {
        if pred(k) {
            first = Some(k);
        } else {
            break;
        }
    }
    first
}

/// Locates the exact thresholds used by the analytic parts of the proofs.
pub fn appendix_threshold_scan(max_k: u32) -> Result<AppendixReport> {
    if max_k < 12 {
        return Err(Error::OutOfRange(format!(
            "appendix scan needs max_k >= 12, got {max_k}"
        )));
    }
    let r32 = ratio(1, 32);
    let pow57 = |k: u32| pow_ratio_lt(5, 7, k - 1, &r32);
    let one = ratio(1, 1);
    let f_lt_one = |k: u32| f_lemma(k) < one;

    let pow57_claimed = LemmaId::Pow57Threshold.claimed_min_k();
    let f_claimed = LemmaId::FMono.claimed_min_k();
    let pow57_min_k = threshold_from(1, max_k, pow57);
    let f_min_k = threshold_from(2, max_k, f_lt_one);
    let f_mono_failures: Vec<u32> = (24..max_k)
        .filter(|&k| f_lemma(k + 1) >= f_lemma(k))
        .collect();
    let f24 = f_lemma(24);

    let key1 = certify_grid(LemmaId::Key1, 8, 12, None)?.all_hold;
    let key2 = certify_grid(LemmaId::Key2, 8, 12, None)?.all_hold;

    let mut discrepancies = Vec::new();
    if pow57_min_k != Some(pow57_claimed) {
        discrepancies.push(format!(
            "(5/7)^(k-1) < 1/32: claimed from k={pow57_claimed}, exact threshold is {}",
            pow57_min_k.map_or("none".to_string(), |k| format!("k={k}"))
        ));
    }
    if f_min_k.is_none_or(|k| k > f_claimed) {
        discrepancies.push(format!(
            "f(k) < 1: claimed from k={f_claimed}, exact threshold is {}",
            f_min_k.map_or("none".to_string(), |k| format!("k={k}"))
        ));
    }
    Ok(AppendixReport {
        max_k,
        pow57_min_k,
        pow57_claimed_min_k: pow57_claimed,
        pow57_at_claimed_k: pow57(pow57_claimed),
        f_min_k,
        f_claimed_min_k: f_claimed,
        f24_decimal: to_decimal(&f24, 6),
        f24_lt_one: f24 < one,
        f_mono_holds: f_mono_failures.is_empty(),
        f_mono_failures,
        key1_pointwise_8_12: key1,
        key2_pointwise_8_12: key2,
        discrepancies,
    })
}
