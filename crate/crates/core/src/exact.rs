//! Arbitrary-precision rational arithmetic, combinatorial primitives, and the
//! dense truncated polynomial type behind every coefficient extraction.
//!
//! All values are exact. Factorials and signless Stirling numbers of the first
//! kind are memoized in global tables that grow on demand; the tables are
//! guarded by an `RwLock`, so lookups are safe (and results identical) under
//! concurrent access.

use std::sync::{LazyLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

/// Exact rational number, reduced to lowest terms with a positive denominator.
/// Displays as `p/q`, or just `p` when the denominator is 1.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The fraction `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn big_rat(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

static FACTORIALS: LazyLock<RwLock<Vec<BigInt>>> =
    LazyLock::new(|| RwLock::new(vec![BigInt::one()]));

/// `n!`, memoized.
pub fn factorial(n: usize) -> BigInt {
    {
        let table = FACTORIALS.read().unwrap();
        if n < table.len() {
            return table[n].clone();
        }
    }
    let mut table = FACTORIALS.write().unwrap();
    while table.len() <= n {
        let next = table.last().unwrap() * BigInt::from(table.len());
        table.push(next);
    }
    table[n].clone()
}

/// Generalized binomial coefficient: `n(n-1)...(n-k+1)/k!` for `k >= 0`
/// (any integer `n`, including negative), and 0 for `k < 0`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if n >= 0 {
        if k > n {
            return BigInt::zero();
        }
        let (n, k) = (n as usize, k as usize);
        return factorial(n) / (factorial(k) * factorial(n - k));
    }
    // binom(-m, k) = (-1)^k binom(m+k-1, k)
    let v = binomial(k - n - 1, k);
    if k % 2 == 0 {
        v
    } else {
        -v
    }
}

/// [`binomial`] as a [`Rational`], which most formulas want.
pub fn binomial_rat(n: i64, k: i64) -> Rational {
    big_rat(binomial(n, k))
}

static STIRLING_ROWS: LazyLock<RwLock<Vec<Vec<BigInt>>>> =
    LazyLock::new(|| RwLock::new(vec![vec![BigInt::one()]]));

/// Signless Stirling number of the first kind: the number of permutations of
/// `[l]` with exactly `nu` cycles. Computed by the recurrence
/// `s(l, nu) = s(l-1, nu-1) + (l-1) s(l-1, nu)`, rows memoized.
pub fn stirling1_signless(l: usize, nu: usize) -> BigInt {
    if nu > l {
        return BigInt::zero();
    }
    {
        let table = STIRLING_ROWS.read().unwrap();
        if l < table.len() {
            return table[l][nu].clone();
        }
    }
    let mut table = STIRLING_ROWS.write().unwrap();
    while table.len() <= l {
        let m = table.len();
        let prev = table.last().unwrap();
        let mut row = vec![BigInt::zero(); m + 1];
        for v in 1..=m {
            let carry = if v < m {
                BigInt::from(m - 1) * &prev[v]
            } else {
                BigInt::zero()
            };
            row[v] = &prev[v - 1] + carry;
        }
        table.push(row);
    }
    table[l][nu].clone()
}

/// Falling factorial `(a)_b = a(a-1)...(a-b+1)`, with `(a)_0 = 1`.
pub fn falling(a: &Rational, b: usize) -> Rational {
    let mut out = Rational::one();
    for i in 0..b {
        out *= a - rat(i as i64);
    }
    out
}

/// Rising factorial `(a)^{(b)} = a(a+1)...(a+b-1)`, with `(a)^{(0)} = 1`.
pub fn rising(a: &Rational, b: usize) -> Rational {
    let mut out = Rational::one();
    for i in 0..b {
        out *= a + rat(i as i64);
    }
    out
}

/// Binomial coefficient with a rational upper argument:
/// `binom(a, b) = (a)_b / b!`.
pub fn binomial_rational(a: &Rational, b: usize) -> Rational {
    falling(a, b) / big_rat(factorial(b))
}

/// Dense univariate polynomial over [`Rational`], truncated at a fixed cap.
///
/// Coefficients are indexed by degree `0..=cap`; arithmetic never reads or
/// writes beyond the cap. This is the workhorse for every `[ξ^a]`, `[z^b]`,
/// `[w^ℓ]`, `[x^ν]` extraction and for exact integration over `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSeries {
    coeffs: Vec<Rational>,
}

impl FormalSeries {
    /// The zero series with the given truncation degree.
    pub fn zero(cap: usize) -> Self {
        FormalSeries {
            coeffs: vec![Rational::zero(); cap + 1],
        }
    }

    /// The constant series 1.
    pub fn one(cap: usize) -> Self {
        let mut s = Self::zero(cap);
        s.coeffs[0] = Rational::one();
        s
    }

    /// `c * z^degree`; terms beyond the cap are dropped.
    pub fn monomial(c: Rational, degree: usize, cap: usize) -> Self {
        let mut s = Self::zero(cap);
        if degree <= cap {
            s.coeffs[degree] = c;
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least the degree-0 coefficient");
        FormalSeries { coeffs }
    }

    /// `(1 - z)^exponent` for any integer exponent, truncated at `cap`.
    /// The coefficient of `z^j` is `(-1)^j binom(exponent, j)`.
    pub fn one_minus_z_pow(exponent: i64, cap: usize) -> Self {
        let coeffs = (0..=cap)
            .map(|j| {
                let b = binomial_rat(exponent, j as i64);
                if j % 2 == 0 {
                    b
                } else {
                    -b
                }
            })
            .collect();
        FormalSeries { coeffs }
    }

    /// `z/(1 - z)`, i.e. coefficients `0, 1, 1, 1, ...`.
    pub fn z_over_one_minus_z(cap: usize) -> Self {
        let mut coeffs = vec![Rational::one(); cap + 1];
        coeffs[0] = Rational::zero();
        FormalSeries { coeffs }
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The exact coefficient of `z^d`. Asking beyond the cap is a usage error.
    pub fn coeff(&self, d: usize) -> &Rational {
        assert!(
            d <= self.cap(),
            "coefficient {d} requested from a series truncated at {}",
            self.cap()
        );
        &self.coeffs[d]
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.cap(), rhs.cap(), "series caps must match");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        FormalSeries { coeffs }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        FormalSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Exact convolution of two series, truncated at `cap`.
    pub fn mul_truncated(&self, rhs: &Self, cap: usize) -> Self {
        let mut out = vec![Rational::zero(); cap + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > cap {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j > cap {
                    break;
                }
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        FormalSeries { coeffs: out }
    }

    /// `self^exp`, truncated at `cap`.
    pub fn pow_truncated(&self, exp: usize, cap: usize) -> Self {
        let mut out = Self::one(cap);
        for _ in 0..exp {
            out = out.mul_truncated(self, cap);
        }
        out
    }

    /// `∫_0^1 p(t) dt = Σ_m coeff_m / (m + 1)`, exact. The series must hold
    /// the full polynomial (cap at least the true degree).
    pub fn integrate_01(&self) -> Rational {
        let mut out = Rational::zero();
        for (m, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out += c / rat(m as i64 + 1);
            }
        }
        out
    }

    /// Evaluate the polynomial at a rational point.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut out = Rational::zero();
        for c in self.coeffs.iter().rev() {
            out = out * x + c;
        }
        out
    }
}

/// Convert an integer-valued rational to a `BigInt`, panicking if a
/// supposedly integral quantity has a denominator.
pub fn expect_integer(r: &Rational) -> BigInt {
    assert!(
        r.denom().is_one(),
        "expected an integer-valued rational, got {r}"
    );
    r.numer().clone()
}

/// Render a rational as an `f64` (output formatting only).
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64()
        .unwrap_or_else(|| r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap())
}

/// `(-1)^e` as a rational sign.
pub fn sign_pow(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// `base^e` for rational base and non-negative integer exponent.
pub fn rat_pow(base: &Rational, e: usize) -> Rational {
    let mut out = Rational::one();
    for _ in 0..e {
        out *= base;
    }
    out
}

/// `1/base^e`; `base` must be non-zero.
pub fn rat_pow_neg(base: &Rational, e: usize) -> Rational {
    assert!(!base.is_zero(), "cannot invert zero");
    rat_pow(base, e).recip()
}
