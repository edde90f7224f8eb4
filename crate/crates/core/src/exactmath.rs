//! Exact scalars and the comparison kernels behind every certificate.
//!
//! Every inequality decision in the crate goes through this module and is made
//! over arbitrary-precision integers. Floating point only shows up when a value
//! is rendered for humans (see [`to_decimal`]).

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision signed integer.
pub type ExactInt = BigInt;

/// Arbitrary-precision rational, always stored reduced with a positive denominator.
pub type ExactRatio = BigRational;

/// Largest `n` kept in the shared binomial table.
pub const DEFAULT_BINOM_CAP: usize = 200;

/// Triangular Pascal table up to a fixed `n`, built once and then read-only.
#[derive(Debug, Clone)]
pub struct BinomTable {
    rows: Vec<Vec<BigInt>>,
}

impl BinomTable {
    pub fn new(cap: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(cap + 1);
        for n in 0..=cap {
            let mut row = Vec::with_capacity(n + 1);
            row.push(BigInt::one());
            for k in 1..n {
                let prev = &rows[n - 1];
                row.push(&prev[k - 1] + &prev[k]);
            }
            if n > 0 {
                row.push(BigInt::one());
            }
            rows.push(row);
        }
        BinomTable { rows }
    }

    pub fn cap(&self) -> usize {
        self.rows.len() - 1
    }

    /// `C(n,k)`, zero outside `0 ≤ k ≤ n`. Falls back to the product formula past the cap.
    pub fn get(&self, n: i64, k: i64) -> BigInt {
        if n < 0 || k < 0 || k > n {
            return BigInt::zero();
        }
        let (n, k) = (n as usize, k as usize);
        if n <= self.cap() {
            return self.rows[n][k].clone();
        }
        binom_product(n as u64, k.min(n - k) as u64)
    }
}

fn binom_product(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn shared_table() -> &'static BinomTable {
    static TABLE: OnceLock<BinomTable> = OnceLock::new();
    TABLE.get_or_init(|| BinomTable::new(DEFAULT_BINOM_CAP))
}

/// Binomial coefficient `C(n,k)`; total, returning zero when `k < 0`, `k > n` or `n < 0`.
pub fn binom(n: i64, k: i64) -> ExactInt {
    shared_table().get(n, k)
}

/// Size of the Hilton–Milner family, `C(n−1,k−1) − C(n−k−1,k−1) + 1`.
///
/// Valid for `n > 2k ≥ 4`; `n = 2k` is accepted for diagnostics.
pub fn hm_size(n: i64, k: i64) -> Result<ExactInt> {
    if k < 2 {
        return Err(Error::OutOfRange(format!(
            "hm_size needs k >= 2, got k={k}"
        )));
    }
    if n < 2 * k {
        return Err(Error::OutOfRange(format!(
            "hm_size needs n >= 2k, got n={n}, k={k}"
        )));
    }
    Ok(binom(n - 1, k - 1) - binom(n - k - 1, k - 1) + 1)
}

/// Decides `a + h2/a > 2b` through `a² + h2 > 2ab`, which is equivalent because `a > 0`.
pub fn exceeds_two_b(a: &ExactInt, h2: &ExactInt, b: &ExactInt) -> Result<bool> {
    let (lhs, rhs) = exceeds_two_b_sides(a, h2, b)?;
    Ok(lhs > rhs)
}

/// The integer sides `(a² + h2, 2ab)` compared by [`exceeds_two_b`].
pub fn exceeds_two_b_sides(
    a: &ExactInt,
    h2: &ExactInt,
    b: &ExactInt,
) -> Result<(ExactInt, ExactInt)> {
    if !a.is_positive() {
        return Err(Error::Precondition(format!("a must be positive, got {a}")));
    }
    Ok((a * a + h2, BigInt::from(2) * a * b))
}

/// Decides `(p/q)^e < r` by `p^e · r.den < r.num · q^e`.
pub fn pow_ratio_lt(p: u64, q: u64, e: u32, r: &ExactRatio) -> bool {
    let pe: BigInt = Pow::pow(BigInt::from(p), e);
    let qe: BigInt = Pow::pow(BigInt::from(q), e);
    pe * r.denom() < r.numer() * qe
}

/// `f(k) = 162 k² (3/5)^(k−1)` as an exact rational.
pub fn f_lemma(k: u32) -> ExactRatio {
    assert!(k >= 1, "f_lemma needs k >= 1");
    let k2 = BigInt::from(k) * k;
    let num: BigInt = BigInt::from(162) * k2 * Pow::pow(BigInt::from(3), k - 1);
    let den: BigInt = Pow::pow(BigInt::from(5), k - 1);
    BigRational::new(num, den)
}

/// Renders a rational as a decimal with `digits` fractional digits, rounding half away from zero.
pub fn to_decimal(r: &ExactRatio, digits: u32) -> String {
    let scale: BigInt = Pow::pow(BigInt::from(10), digits);
    let neg = r.is_negative();
    let num = r.numer().abs() * &scale;
    let den = r.denom().clone();
    let (q, rem) = num.div_rem(&den);
    let scaled = if rem * 2 >= den { q + 1 } else { q };
    let (int_part, frac_part) = scaled.div_rem(&scale);
    let sign = if neg && !scaled_is_zero(&int_part, &frac_part) {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    format!(
        "{sign}{int_part}.{:0>width$}",
        frac_part.to_string(),
        width = digits as usize
    )
}

fn scaled_is_zero(a: &BigInt, b: &BigInt) -> bool {
    a.is_zero() && b.is_zero()
}

/// Convenience constructor for `num/den`.
pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> ExactRatio {
    BigRational::new(num.into(), den.into())
}
