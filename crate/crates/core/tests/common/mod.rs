//! Independent oracles shared by the integration tests. Nothing here calls into
//! the arithmetic or family code of the crate under test.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Rows `0..=n_max` of Pascal's triangle built by additions only.
pub fn pascal(n_max: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for n in 1..=n_max {
        let prev = &rows[n - 1];
        let mut row = vec![BigInt::one(); n + 1];
        for k in 1..n {
            row[k] = &prev[k - 1] + &prev[k];
        }
        rows.push(row);
    }
    rows
}

pub struct Binom {
    rows: Vec<Vec<BigInt>>,
}

impl Binom {
    pub fn new(n_max: usize) -> Self {
        Binom {
            rows: pascal(n_max),
        }
    }

    pub fn c(&self, n: i64, k: i64) -> BigInt {
        if n < 0 || k < 0 || k > n {
            return BigInt::zero();
        }
        self.rows[n as usize][k as usize].clone()
    }

    pub fn h(&self, n: i64, k: i64) -> BigInt {
        self.c(n - 1, k - 1) - self.c(n - k - 1, k - 1) + 1
    }
}

pub fn q(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn qi(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

pub fn qpow(base: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= base;
    }
    acc
}

/// All k-subsets of `1..=n` as sorted vectors, in lexicographic order.
pub fn subsets(n: u32, k: u32) -> Vec<Vec<u32>> {
    fn go(start: u32, n: u32, k: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k as usize {
            out.push(cur.clone());
            return;
        }
        for x in start..=n {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn meets(a: &[u32], b: &[u32]) -> bool {
    a.iter().any(|x| b.contains(x))
}

pub fn cross_intersecting(f: &[Vec<u32>], g: &[Vec<u32>]) -> bool {
    f.iter().all(|a| g.iter().all(|b| meets(a, b)))
}

/// No element lies in every member. Empty families count as trivial.
pub fn non_trivial(f: &[Vec<u32>], n: u32) -> bool {
    !f.is_empty() && (1..=n).all(|x| f.iter().any(|s| !s.contains(&x)))
}

pub fn weight(f: &[Vec<u32>]) -> u64 {
    f.iter().flatten().map(|&x| x as u64).sum()
}

/// Tiny deterministic generator so oracle-side sampling does not share the
/// crate's RNG plumbing.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, m: u64) -> u64 {
        self.next() % m
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }
}

/// A random cross-intersecting pair of k-uniform families on `[n]`, as sorted
/// vectors: `F` is a random subfamily and `G` a random subfamily of everything
/// meeting all of `F`. Both are nonempty.
pub fn random_ci_pair(rng: &mut SplitMix, n: u32, k: u32) -> (Vec<Vec<u32>>, Vec<Vec<u32>>) {
    let all = subsets(n, k);
    loop {
        let centre = 1 + rng.below(n as u64) as u32;
        let dense = rng.chance(1, 2);
        let f: Vec<Vec<u32>> = all
            .iter()
            .filter(|s| {
                if dense && s.contains(&centre) {
                    rng.chance(2, 3)
                } else {
                    rng.chance(1, 12)
                }
            })
            .cloned()
            .collect();
        if f.is_empty() {
            continue;
        }
        let g: Vec<Vec<u32>> = all
            .iter()
            .filter(|s| f.iter().all(|a| meets(a, s)) && rng.chance(3, 4))
            .cloned()
            .collect();
        if !g.is_empty() {
            return (f, g);
        }
    }
}
