//! Cycle-count statistics of the product of `k` uniform maximal cycles:
//! distribution of the number of cycles, identity and maximal-cycle
//! probabilities, probability generating functions, the exact-integral
//! formula for an arbitrary cycle type at `k = 2`, same-length-cycle and
//! involution probabilities.
//!
//! For `k = 1` the product is a single uniform maximal cycle and every
//! operation returns that degenerate answer directly.

use num_traits::{One, Zero};

use crate::exact::{
    binomial_rat, binomial_rational, factorial, rat, rat_pow_neg, sign_pow,
    stirling1_signless, FormalSeries, Rational,
};
use crate::hooks::CycleType;

/// Parameters of the product: ground-set size `N` and number of factors `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductSpec {
    pub n: u32,
    pub k: u32,
}

impl ProductSpec {
    pub fn new(n: u32, k: u32) -> Self {
        assert!(n >= 1, "N must be positive");
        assert!(k >= 1, "k must be positive");
        ProductSpec { n, k }
    }
}

/// `binom(N-1, r)^exponent`, the hook-dimension power appearing in the
/// inverted Fourier sums (negative exponents give exact reciprocals).
fn dim_power(n: u32, r: u32, exponent: i64) -> Rational {
    let d = binomial_rat(n as i64 - 1, r as i64);
    if exponent >= 0 {
        let mut out = Rational::one();
        for _ in 0..exponent {
            out *= &d;
        }
        out
    } else {
        rat_pow_neg(&d, (-exponent) as usize)
    }
}

/// Probability that the product has exactly `nu` cycles.
pub fn p_num_cycles(spec: ProductSpec, nu: u32) -> Rational {
    let ProductSpec { n, k } = spec;
    assert!((1..=n).contains(&nu), "nu must lie in 1..=N");
    if k == 1 {
        return if nu == 1 { rat(1) } else { rat(0) };
    }
    let mut total = Rational::zero();
    for arm in 1..=n {
        let r = n - arm;
        let mut inner = Rational::zero();
        for l in nu..=n {
            let s = stirling1_signless(l as usize, nu as usize);
            if s.is_zero() {
                continue;
            }
            inner += sign_pow(l as i64)
                * Rational::new(s, factorial(l as usize))
                * binomial_rat(r as i64, (n - l) as i64);
        }
        total += sign_pow((k * r) as i64) * dim_power(n, r, 2 - k as i64) * inner;
    }
    sign_pow(n as i64) * total
}

/// Probability that the product is the identity permutation.
pub fn p_identity(spec: ProductSpec) -> Rational {
    let ProductSpec { n, k } = spec;
    if k == 1 {
        return if n == 1 { rat(1) } else { rat(0) };
    }
    let sum: Rational = (0..n)
        .map(|r| sign_pow((k * r) as i64) * dim_power(n, r, 2 - k as i64))
        .sum();
    sum / Rational::from_integer(factorial(n as usize))
}

/// Probability that the product is a single `N`-cycle. Also asserts the
/// factorization `(N-1)! * p_identity(N, k+1)` of the same quantity.
pub fn p_is_cycle(spec: ProductSpec) -> Rational {
    let ProductSpec { n, k } = spec;
    if k == 1 {
        return rat(1);
    }
    let sum: Rational = (0..n)
        .map(|r| sign_pow(((k + 1) * r) as i64) * dim_power(n, r, 1 - k as i64))
        .sum();
    let value = sum / rat(n as i64);
    let via_identity = Rational::from_integer(factorial(n as usize - 1))
        * p_identity(ProductSpec::new(n, k + 1));
    assert_eq!(value, via_identity, "cycle/identity factorization failed");
    value
}

/// Probability generating function `E[x^nu]` of the number of cycles,
/// evaluated at a rational point `x`.
pub fn pgf_num_cycles(spec: ProductSpec, x: &Rational) -> Rational {
    let ProductSpec { n, k } = spec;
    if k == 1 {
        return x.clone();
    }
    let mut total = Rational::zero();
    for r in 0..n {
        total += sign_pow((k * r) as i64)
            * dim_power(n, r, 2 - k as i64)
            * binomial_rational(&(rat(r as i64) - x), n as usize);
    }
    sign_pow(n as i64) * total
}

/// Zagier's closed form of the `k = 2` generating function:
/// `binom(N+x, N+1) - binom(x, N+1)`.
pub fn pgf_k2_closed(n: u32, x: &Rational) -> Rational {
    assert!(n >= 1);
    binomial_rational(&(rat(n as i64) + x), n as usize + 1)
        - binomial_rational(x, n as usize + 1)
}

/// `binom(N+x, N+1)` expanded as a polynomial in `x` of degree `N+1`.
fn zagier_polynomial(n: u32) -> FormalSeries {
    let cap = n as usize + 1;
    let mut poly = FormalSeries::one(cap);
    for i in 0..=n {
        let linear = FormalSeries::from_coeffs(vec![rat((n - i) as i64), rat(1)]);
        poly = poly.mul_truncated(&linear, cap);
    }
    poly.scale(&Rational::from_integer(factorial(cap)).recip())
}

/// Probability that the product of two maximal cycles has exactly `nu`
/// cycles: `(1 + (-1)^{N-nu}) [x^nu] binom(N+x, N+1)`.
pub fn zagier_prob(n: u32, nu: u32) -> Rational {
    assert!((1..=n).contains(&nu));
    if (n - nu) % 2 == 1 {
        return rat(0);
    }
    rat(2) * zagier_polynomial(n).coeff(nu as usize)
}

/// Probability that the product of three maximal cycles is an `N`-cycle,
/// by the harmonic-type sum `2N sum_{h<N} ((N-h)(N+h+1) binom(N+h,h))^{-1}`.
/// Asserts agreement with the general alternating-sum formula.
pub fn p3_is_cycle(n: u32) -> Rational {
    assert!(n >= 1);
    let n_i = n as i64;
    let mut sum = Rational::zero();
    for h in 0..n_i {
        sum += (rat((n_i - h) * (n_i + h + 1)) * binomial_rat(n_i + h, h)).recip();
    }
    let value = rat(2 * n_i) * sum;
    assert_eq!(
        value,
        p_is_cycle(ProductSpec::new(n, 3)),
        "k=3 cycle-probability forms disagree at N={n}"
    );
    value
}

/// Exact probability that the product of two maximal cycles has the given
/// cycle type, via the integral formula
///
/// ```text
/// P(type) = N / prod_l l^{nu_l} nu_l!  *  ∫_0^1 prod_l [t^l + (-1)^{l+1}(1-t)^l]^{nu_l} dt
/// ```
pub fn p_cycle_type_k2(ctype: &CycleType) -> Rational {
    let n = ctype.n();
    let cap = n as usize;
    let mut integrand = FormalSeries::one(cap);
    for (l, count) in ctype.counts() {
        // t^l + (-1)^{l+1} (1-t)^l
        let factor = FormalSeries::monomial(Rational::one(), l as usize, cap)
            .add(&FormalSeries::one_minus_z_pow(l as i64, cap).scale(&sign_pow(l as i64 + 1)));
        integrand = integrand.mul_truncated(&factor.pow_truncated(count as usize, cap), cap);
    }
    let mut prefactor = rat(n as i64);
    for (l, count) in ctype.counts() {
        prefactor /= Rational::from_integer(
            num_bigint::BigInt::from(l).pow(count) * factorial(count as usize),
        );
    }
    prefactor * integrand.integrate_01()
}

/// Probability that all cycles of the product of two maximal cycles have the
/// same length `r`. Evaluates both the integral form and the binomial-sum
/// form and asserts they agree; `N` must be divisible by `r >= 2`.
pub fn p_all_same_length(n: u32, r: u32) -> Rational {
    assert!(r >= 2, "r must be at least 2");
    assert!(n >= 1 && n.is_multiple_of(r), "N must be a positive multiple of r");
    let m = n / r;
    let integral_form =
        p_cycle_type_k2(&CycleType::new(n, std::iter::once((r, m)).collect()));

    let mut sum = Rational::zero();
    for j in 0..=m {
        sum += sign_pow((j * (r + 1)) as i64) * binomial_rat(m as i64, j as i64)
            / binomial_rat(n as i64, (r * j) as i64);
    }
    let denom = Rational::from_integer(
        num_bigint::BigInt::from(r).pow(m) * factorial(m as usize),
    ) * rat(n as i64 + 1);
    let sum_form = rat(n as i64) / denom * sum;

    assert_eq!(
        integral_form, sum_form,
        "same-length forms disagree at N={n}, r={r}"
    );
    integral_form
}

/// Probability that the product of two maximal cycles is an involution:
/// `N sum_{nu1 + 2 nu2 = N, nu2 even} 1/(nu1! 2^{nu2} (nu2+1)!)`.
pub fn p_involution_k2(n: u32) -> Rational {
    assert!(n >= 1);
    let mut total = Rational::zero();
    let mut nu2 = 0;
    while 2 * nu2 <= n {
        if nu2 % 2 == 0 {
            let nu1 = n - 2 * nu2;
            let denom = factorial(nu1 as usize)
                * num_bigint::BigInt::from(2u32).pow(nu2)
                * factorial(nu2 as usize + 1);
            total += Rational::from_integer(denom).recip();
        }
        nu2 += 1;
    }
    rat(n as i64) * total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::hooks::product_class_distribution;
    use num_traits::Signed;

    #[test]
    fn identity_probability_examples() {
        assert_eq!(p_identity(ProductSpec::new(5, 2)), ratio(1, 24));
        assert_eq!(p_identity(ProductSpec::new(4, 3)), rat(0));
        assert_eq!(p_identity(ProductSpec::new(5, 3)), ratio(1, 72));
        assert_eq!(p_identity(ProductSpec::new(1, 1)), rat(1));
        assert_eq!(p_identity(ProductSpec::new(3, 1)), rat(0));
    }

    #[test]
    fn cycle_probability_examples() {
        assert_eq!(p_is_cycle(ProductSpec::new(5, 2)), ratio(1, 3));
        assert_eq!(p_is_cycle(ProductSpec::new(4, 2)), rat(0));
        assert_eq!(p_is_cycle(ProductSpec::new(7, 1)), rat(1));
    }

    #[test]
    fn num_cycles_examples() {
        assert_eq!(p_num_cycles(ProductSpec::new(2, 2), 2), rat(1));
        assert_eq!(p_num_cycles(ProductSpec::new(3, 2), 2), rat(0));
        assert_eq!(p_num_cycles(ProductSpec::new(3, 2), 1), ratio(1, 2));
        assert_eq!(p_num_cycles(ProductSpec::new(5, 2), 5), ratio(1, 24));
    }

    #[test]
    fn num_cycles_distribution_sums_to_one() {
        for n in 1..=10 {
            for k in 1..=4 {
                let total: Rational = (1..=n)
                    .map(|nu| p_num_cycles(ProductSpec::new(n, k), nu))
                    .sum();
                assert!(total.is_one(), "mass {total} at N={n}, k={k}");
            }
        }
    }

    #[test]
    fn num_cycles_matches_class_distribution() {
        for n in 1..=8 {
            for k in 1..=3 {
                let dist = product_class_distribution(n, k);
                for nu in 1..=n {
                    let want: Rational = dist
                        .iter()
                        .filter(|(t, _)| t.total_cycles() == nu)
                        .map(|(_, p)| p.clone())
                        .sum();
                    assert_eq!(
                        p_num_cycles(ProductSpec::new(n, k), nu),
                        want,
                        "mismatch at N={n}, k={k}, nu={nu}"
                    );
                }
            }
        }
    }

    #[test]
    fn pgf_normalization_and_examples() {
        for n in 1..=9 {
            for k in 1..=4 {
                assert!(pgf_num_cycles(ProductSpec::new(n, k), &rat(1)).is_one());
            }
        }
        assert_eq!(pgf_num_cycles(ProductSpec::new(5, 2), &rat(2)), rat(7));
        assert_eq!(pgf_num_cycles(ProductSpec::new(3, 2), &rat(3)), rat(15));
        assert_eq!(pgf_k2_closed(3, &rat(3)), rat(15));
    }

    #[test]
    fn pgf_matches_zagier_closed_form() {
        for n in 1..=12 {
            for x in -3..=7i64 {
                assert_eq!(
                    pgf_num_cycles(ProductSpec::new(n, 2), &rat(x)),
                    pgf_k2_closed(n, &rat(x)),
                    "mismatch at N={n}, x={x}"
                );
            }
        }
    }

    #[test]
    fn pgf_closed_forms_at_two_and_three() {
        // E[2^nu] = N + 1 + (-1)^k/(N-1)^{k-2};
        // E[3^nu] = (N+2)(N+1)/2 + (-1)^k (N+1)/(N-1)^{k-2} + binom(N-1,2)^{2-k}.
        for n in 3..=10u32 {
            for k in 2..=4u32 {
                let n_i = n as i64;
                let shrink = rat_pow_neg(&rat(n_i - 1), k as usize - 2);
                let want2 = rat(n_i + 1) + sign_pow(k as i64) * shrink.clone();
                assert_eq!(
                    pgf_num_cycles(ProductSpec::new(n, k), &rat(2)),
                    want2,
                    "E[2^nu] at N={n}, k={k}"
                );
                let want3 = ratio((n_i + 2) * (n_i + 1), 2)
                    + sign_pow(k as i64) * rat(n_i + 1) * shrink
                    + rat_pow_neg(&binomial_rat(n_i - 1, 2), k as usize - 2);
                assert_eq!(
                    pgf_num_cycles(ProductSpec::new(n, k), &rat(3)),
                    want3,
                    "E[3^nu] at N={n}, k={k}"
                );
            }
        }
    }

    #[test]
    fn zagier_prob_examples() {
        assert_eq!(zagier_prob(3, 1), ratio(1, 2));
        for n in 1..=12 {
            for nu in 1..=n {
                if (n - nu) % 2 == 1 {
                    assert!(zagier_prob(n, nu).is_zero());
                }
                assert_eq!(
                    zagier_prob(n, nu),
                    p_num_cycles(ProductSpec::new(n, 2), nu),
                    "mismatch at N={n}, nu={nu}"
                );
            }
        }
    }

    #[test]
    fn p3_cycle_examples() {
        assert_eq!(p3_is_cycle(2), rat(1));
        for n in 1..=12 {
            // p3_is_cycle asserts internally against the general formula
            let p = p3_is_cycle(n);
            assert!(!p.is_negative() && p <= rat(1));
        }
    }

    #[test]
    fn cycle_type_k2_examples() {
        assert_eq!(p_cycle_type_k2(&CycleType::identity(3)), ratio(1, 2));
        assert_eq!(
            p_cycle_type_k2(&CycleType::from_parts(&[2, 2])),
            ratio(1, 6)
        );
        for n in 1..=9u32 {
            let mut total = Rational::zero();
            for (t, class_p) in product_class_distribution(n, 2) {
                let p = p_cycle_type_k2(&t);
                assert_eq!(p, class_p, "mismatch at N={n}, type {t}");
                total += p;
            }
            assert!(total.is_one());
        }
        // single N-cycle reduces to the k=2 cycle probability
        for n in 1..=10 {
            assert_eq!(
                p_cycle_type_k2(&CycleType::single_cycle(n)),
                p_is_cycle(ProductSpec::new(n, 2))
            );
        }
    }

    #[test]
    fn same_length_examples() {
        assert_eq!(p_all_same_length(4, 2), ratio(1, 6));
        assert_eq!(p_all_same_length(6, 2), rat(0));
        assert_eq!(p_all_same_length(8, 2), ratio(1, 240));
        assert_eq!(
            Rational::from_integer(factorial(7)) * p_all_same_length(8, 2),
            rat(21)
        );
        // closed form N / (2^{N/2} (N/2+1)!) for N divisible by 4
        for n in (4..=24u32).step_by(4) {
            let want = rat(n as i64)
                / Rational::from_integer(
                    num_bigint::BigInt::from(2u32).pow(n / 2) * factorial((n / 2 + 1) as usize),
                );
            assert_eq!(p_all_same_length(n, 2), want);
        }
        for n in (6..=22u32).step_by(4) {
            assert!(p_all_same_length(n, 2).is_zero(), "N={n}");
        }
        // closed form for r = 3
        for m in 1..=5u32 {
            let n = 3 * m;
            let mut sum = Rational::zero();
            for j in 0..=m {
                sum += binomial_rat(m as i64, j as i64)
                    * Rational::new(num_bigint::BigInt::from(3u32).pow(j), (2 * j + 1).into());
            }
            let want = rat(n as i64)
                / Rational::from_integer(
                    factorial(m as usize) * num_bigint::BigInt::from(12u32).pow(m),
                )
                * sum;
            assert_eq!(p_all_same_length(n, 3), want, "N={n}");
        }
    }

    #[test]
    fn involution_examples() {
        assert_eq!(p_involution_k2(2), rat(1));
        assert_eq!(p_involution_k2(3), ratio(1, 2));
        assert_eq!(p_involution_k2(4), ratio(1, 3));
        // must equal the class-distribution mass on involutions
        for n in 1..=9u32 {
            let want: Rational = product_class_distribution(n, 2)
                .into_iter()
                .filter(|(t, _)| t.counts().all(|(r, _)| r <= 2))
                .map(|(_, p)| p)
                .sum();
            assert_eq!(p_involution_k2(n), want, "N={n}");
        }
    }

    #[test]
    fn parity_zeros_are_exact() {
        for n in (2..=12u32).step_by(2) {
            assert!(p_is_cycle(ProductSpec::new(n, 2)).is_zero());
            assert!(p_identity(ProductSpec::new(n, 3)).is_zero());
        }
    }
}
