//! Hook characters of `S_N` and the class distribution of the product of `k`
//! uniform maximal cycles.
//!
//! Only one-hook shapes matter here: the character of any other shape vanishes
//! on the maximal-cycle class, so Fourier inversion of the product law needs
//! exactly the `N` hooks. Characters are evaluated from the closed series form
//!
//! ```text
//! chi(s) = (-1)^{leg + nu} [xi^arm] xi/(1 - xi) * prod_r (1 - xi^r)^{nu_r}
//! ```
//!
//! by truncated series multiplication, rather than by recursive border-strip
//! removal.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::{
    binomial, expect_integer, factorial, rat_pow_neg, sign_pow, FormalSeries, Rational,
};

/// One-hook Young diagram of `N` cells: one row of length `arm` and one
/// column of height `leg = N + 1 - arm`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HookShape {
    n: u32,
    arm: u32,
}

impl HookShape {
    pub fn new(n: u32, arm: u32) -> Self {
        assert!(n >= 1, "N must be positive");
        assert!((1..=n).contains(&arm), "arm must lie in 1..=N");
        HookShape { n, arm }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn arm(&self) -> u32 {
        self.arm
    }

    pub fn leg(&self) -> u32 {
        self.n + 1 - self.arm
    }

    /// Dimension of the associated irreducible representation,
    /// `binom(N-1, arm-1)`.
    pub fn dimension(&self) -> BigInt {
        binomial(self.n as i64 - 1, self.arm as i64 - 1)
    }
}

/// Cycle type of a permutation of `[N]`: the map `r -> nu_r` of cycle-length
/// counts, with `sum r * nu_r = N`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleType {
    n: u32,
    counts: BTreeMap<u32, u32>,
}

impl CycleType {
    /// Build from explicit counts; zero entries are dropped.
    pub fn new(n: u32, counts: BTreeMap<u32, u32>) -> Self {
        let counts: BTreeMap<u32, u32> =
            counts.into_iter().filter(|&(_, c)| c > 0).collect();
        let total: u64 = counts.iter().map(|(&r, &c)| r as u64 * c as u64).sum();
        assert_eq!(total, n as u64, "cycle lengths must sum to N");
        assert!(n >= 1, "N must be positive");
        CycleType { n, counts }
    }

    /// Build from a list of cycle lengths (a partition of `N`).
    pub fn from_parts(parts: &[u32]) -> Self {
        let mut counts = BTreeMap::new();
        for &p in parts {
            *counts.entry(p).or_insert(0) += 1;
        }
        let n = parts.iter().sum();
        Self::new(n, counts)
    }

    /// The identity class: `N` fixed points.
    pub fn identity(n: u32) -> Self {
        Self::from_parts(&[1].repeat(n as usize))
    }

    /// The maximal-cycle class: one `N`-cycle.
    pub fn single_cycle(n: u32) -> Self {
        Self::from_parts(&[n])
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Iterate `(r, nu_r)` with `nu_r > 0`, in increasing `r`.
    pub fn counts(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.counts.iter().map(|(&r, &c)| (r, c))
    }

    pub fn count_of(&self, r: u32) -> u32 {
        self.counts.get(&r).copied().unwrap_or(0)
    }

    /// Total number of cycles, `nu = sum_r nu_r`.
    pub fn total_cycles(&self) -> u32 {
        self.counts.values().sum()
    }

    /// Conjugacy class size, `N! / prod_r r^{nu_r} nu_r!`.
    pub fn class_size(&self) -> BigInt {
        let mut denom = BigInt::one();
        for (r, c) in self.counts() {
            denom *= BigInt::from(r).pow(c) * factorial(c as usize);
        }
        factorial(self.n as usize) / denom
    }

    /// Sign of the permutations in this class: `(-1)^{N - nu}`.
    pub fn is_even(&self) -> bool {
        (self.n - self.total_cycles()).is_multiple_of(2)
    }

    /// All cycle types of `S_N`, partitions enumerated in decreasing
    /// lexicographic part order (so `[N]` first, `[1,...,1]` last). This
    /// order is part of the output contract for table emission.
    pub fn all(n: u32) -> Vec<CycleType> {
        let mut out = Vec::new();
        let mut parts = Vec::new();
        descend(n, n, &mut parts, &mut out);
        out
    }
}

fn descend(rem: u32, max: u32, parts: &mut Vec<u32>, out: &mut Vec<CycleType>) {
    if rem == 0 {
        out.push(CycleType::from_parts(parts));
        return;
    }
    for p in (1..=rem.min(max)).rev() {
        parts.push(p);
        descend(rem - p, p, parts, out);
        parts.pop();
    }
}

impl fmt::Display for CycleType {
    /// Canonical text form `1^a 2^b ...`, omitting zero counts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (r, c) in self.counts() {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{r}^{c}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for CycleType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut counts = BTreeMap::new();
        for tok in s.split_whitespace() {
            let (r, c) = tok
                .split_once('^')
                .ok_or_else(|| format!("bad cycle-type token {tok:?}, expected r^count"))?;
            let r: u32 = r.parse().map_err(|_| format!("bad cycle length {r:?}"))?;
            let c: u32 = c.parse().map_err(|_| format!("bad count {c:?}"))?;
            if r == 0 {
                return Err("cycle length 0 is not allowed".into());
            }
            *counts.entry(r).or_insert(0) += c;
        }
        let n: u64 = counts.iter().map(|(&r, &c)| r as u64 * c as u64).sum();
        if n == 0 || n > u32::MAX as u64 {
            return Err("cycle type must describe a non-empty permutation".into());
        }
        Ok(CycleType::new(n as u32, counts))
    }
}

/// Exact hook character value on a class, via truncated series extraction.
pub fn hook_character(shape: &HookShape, ctype: &CycleType) -> BigInt {
    assert_eq!(shape.n(), ctype.n(), "shape and class must share N");
    let cap = shape.arm() as usize;
    let mut series = FormalSeries::z_over_one_minus_z(cap);
    for (r, c) in ctype.counts() {
        let factor = FormalSeries::one(cap).add(&FormalSeries::monomial(
            -Rational::one(),
            r as usize,
            cap,
        ));
        series = series.mul_truncated(&factor.pow_truncated(c as usize, cap), cap);
    }
    let sign = sign_pow((shape.leg() + ctype.total_cycles()) as i64);
    expect_integer(&(sign * series.coeff(cap)))
}

/// Sum of the hook character over all permutations with exactly `nu` cycles
/// in total, via the binomial/Stirling double sum: `(-1)^N N! A(N, nu, arm)`.
pub fn class_character_sum(n: u32, nu: u32, arm: u32) -> BigInt {
    assert!((1..=n).contains(&arm), "arm must lie in 1..=N");
    let n_i = n as i64;
    let mut inner = Rational::zero();
    for l in nu.max(1)..=n {
        let s = crate::exact::stirling1_signless(l as usize, nu as usize);
        if s.is_zero() {
            continue;
        }
        inner += sign_pow(l as i64)
            * Rational::new(s, factorial(l as usize))
            * Rational::from_integer(binomial(n_i - arm as i64, n_i - l as i64));
    }
    let a = Rational::from_integer(binomial(n_i - 1, n_i - arm as i64)) * inner;
    let total = sign_pow(n_i) * Rational::from_integer(factorial(n as usize)) * a;
    expect_integer(&total)
}

/// Per-permutation probability that the product of `k` uniform maximal cycles
/// equals a fixed permutation of the given class:
///
/// ```text
/// P(s) = (1/N!) sum_{hooks} (-1)^{k(leg-1)} binom(N-1, arm-1)^{-k+1} chi(s)
/// ```
pub fn permutation_probability(n: u32, k: u32, ctype: &CycleType) -> Rational {
    assert!(n >= 1 && k >= 1);
    let mut total = Rational::zero();
    for arm in 1..=n {
        let shape = HookShape::new(n, arm);
        let chi = hook_character(&shape, ctype);
        if chi.is_zero() {
            continue;
        }
        let dim = Rational::from_integer(shape.dimension());
        total += sign_pow((k * (n - arm)) as i64)
            * rat_pow_neg(&dim, (k - 1) as usize)
            * Rational::from_integer(chi);
    }
    total / Rational::from_integer(factorial(n as usize))
}

/// Exact distribution of the conjugacy class of the product of `k` uniform
/// maximal cycles. One entry per cycle type, in [`CycleType::all`] order;
/// values are class probabilities (per-permutation probability times class
/// size), never negative, summing to 1.
pub fn product_class_distribution(n: u32, k: u32) -> Vec<(CycleType, Rational)> {
    CycleType::all(n)
        .into_iter()
        .map(|t| {
            let p = permutation_probability(n, k, &t) * Rational::from_integer(t.class_size());
            (t, p)
        })
        .collect()
}
