//! How the elements of the prefix `[ℓ] = {1, ..., ℓ}` sit inside the cycles
//! of the product: occupancy probabilities for a permitted count set `A`,
//! separation probabilities for disjoint sets, and the blocking probability.
//!
//! By relabeling symmetry the prefix case is fully general, so every
//! operation takes set sizes rather than explicit subsets.
//!
//! Several results come with more than one printed form; those operations
//! evaluate every applicable form and assert exact agreement before
//! returning, so each call doubles as an identity check.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exact::{
    binomial, binomial_rat, expect_integer, factorial, falling, rat, rat_pow, rat_pow_neg,
    rising, sign_pow, FormalSeries, Rational,
};
use crate::hooks::{permutation_probability, CycleType};

/// Permitted per-cycle counts of elements of `[ℓ]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OccupancySet {
    /// No constraint (every count allowed).
    Any,
    /// `A = Z_{>0}`: every cycle must meet `[ℓ]`.
    Positive,
    /// `A = {0, ℓ}`: all of `[ℓ]` in a single cycle.
    ZeroOrEll,
    /// An explicit finite set of permitted counts.
    Explicit(BTreeSet<u32>),
}

impl OccupancySet {
    pub fn contains(&self, count: u32, ell: u32) -> bool {
        match self {
            OccupancySet::Any => true,
            OccupancySet::Positive => count > 0,
            OccupancySet::ZeroOrEll => count == 0 || count == ell,
            OccupancySet::Explicit(set) => set.contains(&count),
        }
    }
}

impl fmt::Display for OccupancySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OccupancySet::Any => write!(f, "any"),
            OccupancySet::Positive => write!(f, "positive"),
            OccupancySet::ZeroOrEll => write!(f, "0,ell"),
            OccupancySet::Explicit(set) => {
                write!(f, "{{")?;
                for (i, a) in set.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

impl FromStr for OccupancySet {
    type Err = String;

    /// Accepts `positive`, `0,ell`, or `{a1,a2,...}`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "positive" => Ok(OccupancySet::Positive),
            "0,ell" => Ok(OccupancySet::ZeroOrEll),
            _ if s.starts_with('{') && s.ends_with('}') => {
                let inner = &s[1..s.len() - 1];
                let mut set = BTreeSet::new();
                for tok in inner.split(',') {
                    let tok = tok.trim();
                    if tok.is_empty() {
                        continue;
                    }
                    set.insert(
                        tok.parse::<u32>()
                            .map_err(|_| format!("bad occupancy count {tok:?}"))?,
                    );
                }
                Ok(OccupancySet::Explicit(set))
            }
            _ => Err(format!(
                "bad occupancy set {s:?}: expected \"positive\", \"0,ell\" or \"{{a1,a2,...}}\""
            )),
        }
    }
}

/// Occupancy question: counts of `[ℓ]` in each cycle must lie in `set`.
#[derive(Clone, Debug)]
pub struct OccupancySpec {
    pub n: u32,
    pub ell: u32,
    pub set: OccupancySet,
}

impl OccupancySpec {
    pub fn new(n: u32, ell: u32, set: OccupancySet) -> Self {
        assert!(ell <= n, "ell must not exceed N");
        OccupancySpec { n, ell, set }
    }
}

/// Separation question: sizes of the disjoint sets `S_1, ..., S_t`.
#[derive(Clone, Debug)]
pub struct SeparationSpec {
    pub n: u32,
    pub sizes: Vec<u32>,
}

impl SeparationSpec {
    pub fn new(n: u32, sizes: Vec<u32>) -> Self {
        assert!(!sizes.is_empty(), "at least one set required");
        assert!(sizes.iter().all(|&s| s >= 1), "set sizes must be positive");
        let ell: u32 = sizes.iter().sum();
        assert!(ell <= n, "sets must fit inside [N]");
        SeparationSpec { n, sizes }
    }

    /// Total size `ℓ = Σ ℓ_j`.
    pub fn ell(&self) -> u32 {
        self.sizes.iter().sum()
    }

    /// Number of sets `t`.
    pub fn t(&self) -> u32 {
        self.sizes.len() as u32
    }

    /// `Π ℓ_j!`.
    pub fn sizes_factorial(&self) -> BigInt {
        self.sizes.iter().map(|&s| factorial(s as usize)).product()
    }
}

/// Blocking question on the prefix `[ℓ]`.
#[derive(Clone, Copy, Debug)]
pub struct BlockingSpec {
    pub n: u32,
    pub ell: u32,
}

impl BlockingSpec {
    pub fn new(n: u32, ell: u32) -> Self {
        assert!(ell <= n, "ell must not exceed N");
        BlockingSpec { n, ell }
    }
}

/// Number of permutations of the given cycle type whose per-cycle counts of
/// `[ℓ]` all lie in `A`:
///
/// ```text
/// Q_A = (N-ℓ)! ℓ! [w^ℓ] prod_r (1/nu_r!) ( sum_{a in A} binom(r,a) w^a / r )^{nu_r}
/// ```
///
/// The prefactor clears every denominator; integrality is asserted.
pub fn q_a(ctype: &CycleType, spec: &OccupancySpec) -> BigInt {
    assert_eq!(spec.n, ctype.n(), "spec and type must share N");
    let ell = spec.ell as usize;
    let cap = ell;
    let mut series = FormalSeries::one(cap);
    for (r, count) in ctype.counts() {
        let mut coeffs = vec![Rational::zero(); cap + 1];
        for a in 0..=r.min(cap as u32) {
            if spec.set.contains(a, spec.ell) {
                coeffs[a as usize] = Rational::new(binomial(r as i64, a as i64), BigInt::from(r));
            }
        }
        let factor = FormalSeries::from_coeffs(coeffs)
            .pow_truncated(count as usize, cap)
            .scale(&Rational::from_integer(factorial(count as usize)).recip());
        series = series.mul_truncated(&factor, cap);
    }
    let scaled =
        Rational::from_integer(factorial(spec.n as usize - ell) * factorial(ell)) * series.coeff(ell);
    expect_integer(&scaled)
}

/// Occupancy probability `p_A(N, ℓ; k)` for a general count set, assembled
/// as the partition sum of per-permutation class probability times `Q_A`.
pub fn p_occupancy(spec: &OccupancySpec, k: u32) -> Rational {
    let mut total = Rational::zero();
    for ctype in CycleType::all(spec.n) {
        let q = q_a(&ctype, spec);
        if q.is_zero() {
            continue;
        }
        total += permutation_probability(spec.n, k, &ctype) * Rational::from_integer(q);
    }
    total
}

/// `A = Z_{>0}`: probability that every cycle contains an element of `[ℓ]`.
///
/// ```text
/// binom(N,ℓ)^{-1} sum_{arm=ℓ}^{N} (-1)^{(k-1)(N-arm)} binom(N-1, N-arm)^{-k+1} binom(arm-1, ℓ-1)
/// ```
pub fn p_a1(n: u32, ell: u32, k: u32) -> Rational {
    assert!((1..=n).contains(&ell), "ell must lie in 1..=N");
    assert!(k >= 1);
    let n_i = n as i64;
    let mut sum = Rational::zero();
    for arm in ell..=n {
        let r = (n - arm) as i64;
        sum += sign_pow((k as i64 - 1) * r)
            * rat_pow_neg(&binomial_rat(n_i - 1, r), k as usize - 1)
            * binomial_rat(arm as i64 - 1, ell as i64 - 1);
    }
    sum / binomial_rat(n_i, ell as i64)
}

/// Both printed `k = 2` reductions of [`p_a1`] (the `ℓ`-term bracket form
/// and the `(N-ℓ)`-term alternating form), asserted equal to each other and
/// to the general formula at `k = 2`.
pub fn p_a1_k2(n: u32, ell: u32) -> Rational {
    assert!((1..=n).contains(&ell));
    let n_i = n as i64;
    let l = ell as i64;

    let mut bracket = sign_pow(l - 1) / (rat(n_i + l) * binomial_rat(n_i + l - 1, l - 1));
    for j in 0..l {
        bracket += sign_pow(n_i + l - j) * binomial_rat(n_i, j) / rat(n_i + l - j);
    }
    let form_a = sign_pow(n_i - 1) * rat(n_i) / binomial_rat(n_i, l) * bracket;

    let mut alt = Rational::zero();
    for i in 0..=(n_i - l) {
        alt += sign_pow(i) * binomial_rat(n_i, i) / rat(i + l);
    }
    let form_b = sign_pow(n_i + l) * rat(n_i) / binomial_rat(n_i, l) * alt;

    let theorem = p_a1(n, ell, 2);
    assert_eq!(form_a, theorem, "A1 bracket form disagrees at N={n}, ell={ell}");
    assert_eq!(form_b, theorem, "A1 alternating form disagrees at N={n}, ell={ell}");
    theorem
}

/// `A = {0, ℓ}`: probability that all of `[ℓ]` lies in one cycle.
/// `ℓ ∈ {0, 1}` is vacuous and returns 1.
pub fn p_a2(n: u32, ell: u32, k: u32) -> Rational {
    assert!(ell <= n);
    assert!(k >= 1);
    if ell <= 1 {
        return rat(1);
    }
    let n_i = n as i64;
    let mut sum = Rational::zero();
    for arm in 1..=n {
        let leg_m1 = (n - arm) as i64; // leg - 1
        let inner = if arm < n {
            binomial_rat(n_i - 1, ell as i64 - 1)
                - binomial_rat(n_i - arm as i64 - 1, ell as i64 - 1)
        } else {
            binomial_rat(n_i, ell as i64)
        };
        sum += sign_pow((k as i64 + 1) * leg_m1)
            * rat_pow_neg(&binomial_rat(n_i - 1, arm as i64 - 1), k as usize - 1)
            * inner;
    }
    sum / (rat(ell as i64) * binomial_rat(n_i, ell as i64))
}

/// Both printed `k = 2` closed forms of [`p_a2`], asserted equal to each
/// other and to the general formula at `k = 2`. Requires `2 <= ℓ <= N`.
pub fn p_a2_k2(n: u32, ell: u32) -> Rational {
    assert!((2..=n).contains(&ell), "the closed forms need 2 <= ell <= N");
    let n_i = n as i64;
    let l = ell as i64;
    let lead = rat(l).recip() - (rat(n_i + 1) * rat(n_i)).recip();

    // moderate-ℓ form
    let mut inner = binomial_rat(n_i + l, l).recip();
    for j in 0..=(l - 2) {
        inner += rat(n_i) * sign_pow(n_i - j) * binomial_rat(n_i - 1, j) / rat(n_i + l - j);
    }
    let form_a = lead.clone() + sign_pow(l + 1) * inner / (rat(l) * binomial_rat(n_i, l));

    // moderate-(N-ℓ) form
    let mut alt = Rational::zero();
    for i in 0..=(n_i - l) {
        alt += sign_pow(i) * binomial_rat(n_i - 1, i) / rat(i + l + 1);
    }
    let form_b = lead + sign_pow(l + 1) * alt / binomial_rat(n_i - 1, l - 1);

    let theorem = p_a2(n, ell, 2);
    assert_eq!(form_a, theorem, "A2 moderate-ell form disagrees at N={n}, ell={ell}");
    assert_eq!(
        form_b, theorem,
        "A2 moderate-complement form disagrees at N={n}, ell={ell}"
    );
    theorem
}

/// `S_{n,a,b}` by its defining alternating sum.
pub fn s_nab_definition(n: u32, a: u32, b: u32) -> Rational {
    assert!(a + b <= n, "need a + b <= n");
    let (n, a, b) = (n as i64, a as i64, b as i64);
    let mut sum = Rational::zero();
    for r in (a + b)..=n {
        sum += sign_pow(r) * binomial_rat(r - a, b) / binomial_rat(n, r);
    }
    sum
}

/// `S_{n,a,b}` by the `b`-term expansion (efficient for moderate `b`).
pub fn s_nab_moderate_b(n: u32, a: u32, b: u32) -> Rational {
    assert!(a + b <= n);
    let (n, a, b) = (n as i64, a as i64, b as i64);
    let mut inner = sign_pow(a + b) / (rat(n + 2 + b) * binomial_rat(n + b + 1, a + b));
    for j in 0..=b {
        inner += sign_pow(n + b - j) * binomial_rat(n - a + 1, j) / rat(n + 2 + b - j);
    }
    rat(n + 1) * inner
}

/// `S_{n,a,b}` by the `(n-a-b)`-term expansion (efficient when the
/// complement is moderate).
pub fn s_nab_moderate_complement(n: u32, a: u32, b: u32) -> Rational {
    assert!(a + b <= n);
    let (n, a, b) = (n as i64, a as i64, b as i64);
    let mut sum = Rational::zero();
    for i in 0..=(n - a - b) {
        sum += sign_pow(i) * binomial_rat(n - a + 1, i) / rat(i + a + b + 1);
    }
    sign_pow(a + b) * rat(n + 1) * sum
}

/// `S_{n,a,b}`: all three evaluators, asserted identical.
pub fn s_nab(n: u32, a: u32, b: u32) -> Rational {
    let d = s_nab_definition(n, a, b);
    let mb = s_nab_moderate_b(n, a, b);
    let mc = s_nab_moderate_complement(n, a, b);
    assert_eq!(d, mb, "S_nab moderate-b form disagrees at ({n},{a},{b})");
    assert_eq!(d, mc, "S_nab moderate-complement form disagrees at ({n},{a},{b})");
    d
}

/// The separation kernel
/// `K(N,ℓ,t;r) = [ξ^{r-ℓ+t} z^{N-ℓ}] (1-ξ)^{t-1} (1-z)^{-t+1} (1-ξz)^{-ℓ-1}`,
/// computed both by the closed-form `j`-sum and by staged univariate
/// extraction; agreement is asserted. Vanishes for `r < ℓ-t` and `r >= N`.
pub fn k_coeff(n: u32, ell: u32, t: u32, r: i64) -> BigInt {
    assert!((1..=ell).contains(&t) && ell <= n, "need 1 <= t <= ell <= N");
    let delta = (ell - t) as i64;
    if r < delta {
        return BigInt::zero();
    }
    let closed = k_coeff_closed(n, ell, t, r);
    let staged = k_coeff_staged(n, ell, t, r);
    assert_eq!(
        closed, staged,
        "K routes disagree at N={n}, ell={ell}, t={t}, r={r}"
    );
    closed
}

/// Closed-form `j`-sum. The last factor carries the lower index `N-ℓ-j`
/// (it is the coefficient `[z^{N-ℓ-j}](1-z)^{-t+1}`), which matches the
/// usual `t-2` lower index whenever `t >= 2` and stays correct at `t = 1`.
fn k_coeff_closed(n: u32, ell: u32, t: u32, r: i64) -> BigInt {
    let (n, ell, t) = (n as i64, ell as i64, t as i64);
    let delta = ell - t;
    let lo = 0.max(r - delta - (t - 1));
    let hi = (r - delta).min(n - ell);
    let mut total = BigInt::zero();
    for j in lo..=hi {
        let term = binomial(ell + j, j)
            * binomial(t - 1, r - delta - j)
            * binomial(n - delta - j - 2, n - ell - j);
        total += if (r - delta - j) % 2 == 0 { term } else { -term };
    }
    total
}

/// Staged extraction: expand in `z` first, leaving a polynomial in `ξ` of
/// degree at most `N-ℓ+t-1`, then read off `[ξ^{r-ℓ+t}]`.
fn k_coeff_staged(n: u32, ell: u32, t: u32, r: i64) -> BigInt {
    let (n_i, ell_i, t_i) = (n as i64, ell as i64, t as i64);
    let delta = (ell_i - t_i) as usize;
    let cap = (n_i - ell_i + t_i - 1) as usize;
    let want = r as usize - delta;
    if want > cap {
        return BigInt::zero();
    }
    let mut coeffs = vec![Rational::zero(); cap + 1];
    for (j, slot) in coeffs.iter_mut().enumerate().take(((n - ell) as usize).min(cap) + 1) {
        let p = (n - ell) as usize - j;
        let c = sign_pow(p as i64) * binomial_rat(1 - t_i, p as i64);
        *slot = binomial_rat(ell_i + j as i64, j as i64) * c;
    }
    let series = FormalSeries::from_coeffs(coeffs)
        .mul_truncated(&FormalSeries::one_minus_z_pow(t_i - 1, cap), cap);
    expect_integer(series.coeff(want))
}

/// Separation probability for general `k`:
///
/// ```text
/// p = (-1)^{alpha} (Π ℓ_j!) / (N)_ℓ * sum_{r=ℓ-t}^{N-1} (-1)^{(k+1)r} binom(N-1,r)^{-k+1} K(N,ℓ,t;r)
/// ```
///
/// with `alpha = t-1` for odd `k` and `N+t` for even `k`. Besides the
/// `Π ℓ_j!` factor the value depends on the sizes only through `(ℓ, t)`.
pub fn p_separation(spec: &SeparationSpec, k: u32) -> Rational {
    assert!(k >= 1);
    let (n, ell, t) = (spec.n, spec.ell(), spec.t());
    let n_i = n as i64;
    let alpha = if k % 2 == 1 { t as i64 - 1 } else { n_i + t as i64 };
    let mut sum = Rational::zero();
    for r in (ell as i64 - t as i64)..n_i {
        let kv = k_coeff(n, ell, t, r);
        if kv.is_zero() {
            continue;
        }
        sum += sign_pow((k as i64 + 1) * r)
            * rat_pow_neg(&binomial_rat(n_i - 1, r), k as usize - 1)
            * Rational::from_integer(kv);
    }
    sign_pow(alpha) * Rational::from_integer(spec.sizes_factorial()) * sum
        / falling(&rat(n_i), ell as usize)
}

/// The `k = 2` separation formula with the alternating `(ℓ-t+2)`-term sum.
pub fn p_separation_k2_bernardi(spec: &SeparationSpec) -> Rational {
    let (n, ell, t) = (spec.n as i64, spec.ell() as i64, spec.t() as i64);
    let mut inner =
        sign_pow(n + ell) * binomial_rat(n - 1, t - 2) / binomial_rat(n + ell, ell - t);
    for j in 0..=(ell - t) {
        inner += sign_pow(j) * binomial_rat(ell - t, j) * binomial_rat(n + j + 1, ell)
            / binomial_rat(n + t + j, j);
    }
    Rational::new(
        factorial((n - ell) as usize) * spec.sizes_factorial(),
        BigInt::from(n + t) * factorial(n as usize - 1),
    ) * inner
}

/// The `k = 2` separation formula whose `(ℓ-t+1)`-term sum has constant
/// signs. Exact agreement with the other routes is asserted by
/// [`p_separation_all_k2`] and the verification suites.
pub fn p_separation_k2_final(spec: &SeparationSpec) -> Rational {
    let (n, ell, t) = (spec.n as i64, spec.ell() as i64, spec.t() as i64);
    let first = sign_pow(n + ell) * binomial_rat(n - 1, t - 2) / binomial_rat(n + ell, ell - t);
    let mut sum = Rational::zero();
    for v in 0..=(ell - t) {
        sum += Rational::from_integer(factorial((n + ell - v - 1) as usize))
            * falling(&rat(n - 1), v as usize)
            / (Rational::from_integer(factorial((ell - t - v) as usize))
                * falling(&rat(n - t), v as usize));
    }
    let second = rat(n + t) * falling(&rat(n + 1), (ell + 1) as usize) * sum
        / (rat(n - t + 1)
            * Rational::from_integer(factorial((n + ell) as usize))
            * falling(&rat(ell), t as usize));
    Rational::new(
        factorial((n - ell) as usize) * spec.sizes_factorial(),
        factorial(n as usize - 1) * BigInt::from(n + t),
    ) * (first + second)
}

/// The `k = 2` separation formula efficient for small complement `N-ℓ`.
pub fn p_separation_k2_smallcomp(spec: &SeparationSpec) -> Rational {
    let (n, ell, t) = (spec.n as i64, spec.ell() as i64, spec.t() as i64);
    let mut sum = Rational::zero();
    for m in 0..=(n - ell) {
        // binom(t+m-2, m) = [z^m](1-z)^{-t+1}, kept valid at t = 1
        let gf = sign_pow(m) * binomial_rat(1 - t, m);
        sum += sign_pow(m) * gf * binomial_rat(n - m, ell)
            / (rat(n - t + 1) * binomial_rat(n - t, m));
    }
    rat(n) * Rational::from_integer(spec.sizes_factorial()) / falling(&rat(n), ell as usize) * sum
}

/// Separation probability at `k = 2` when the sets cover all of `[N]`:
/// `Π ℓ_j! / ((N-1)! (N-t+1))`. Calling it with `Σ ℓ_j < N` is a usage error.
pub fn p_separation_full(spec: &SeparationSpec) -> Rational {
    assert_eq!(
        spec.ell(),
        spec.n,
        "p_separation_full requires the sets to cover [N]"
    );
    Rational::new(
        spec.sizes_factorial(),
        factorial(spec.n as usize - 1) * BigInt::from(spec.n - spec.t() + 1),
    )
}

/// Evaluate every applicable `k = 2` separation formula and assert pairwise
/// equality; returns the common value.
pub fn p_separation_all_k2(spec: &SeparationSpec) -> Rational {
    let lemma = p_separation(spec, 2);
    let bern = p_separation_k2_bernardi(spec);
    let fin = p_separation_k2_final(spec);
    let small = p_separation_k2_smallcomp(spec);
    assert_eq!(lemma, bern, "Bernardi form disagrees for sizes {:?}", spec.sizes);
    assert_eq!(lemma, fin, "constant-sign form disagrees for sizes {:?}", spec.sizes);
    assert_eq!(
        lemma, small,
        "small-complement form disagrees for sizes {:?}",
        spec.sizes
    );
    if spec.ell() == spec.n {
        assert_eq!(lemma, p_separation_full(spec), "full-cover form disagrees");
    }
    lemma
}

/// Probability that the product of two maximal cycles is a derangement:
/// `N Σ_{τ<N} (-1)^τ/((N-τ) τ!) + (-1)^N/(N-1)!`.
pub fn p_derangement_k2(n: u32) -> Rational {
    assert!(n >= 1);
    let n_i = n as i64;
    let mut sum = Rational::zero();
    for tau in 0..n_i {
        sum += sign_pow(tau) / (rat(n_i - tau) * Rational::from_integer(factorial(tau as usize)));
    }
    rat(n_i) * sum + sign_pow(n_i) / Rational::from_integer(factorial(n as usize - 1))
}

/// The hypergeometric sum `Σ(N, ℓ, t)` from the `k = 2` separation
/// derivation, evaluated both as its defining sum `S(t)` and by the closed
/// form `S*(t) = (N-1)_{t-2} (ℓ-t)! / ((t-2)! (N+t)^{(ℓ-t+1)})`; equality is
/// asserted and the common value returned. Requires `2 <= t <= ℓ <= N`.
pub fn sigma_wz(n: u32, ell: u32, t: u32) -> Rational {
    assert!((2..=ell).contains(&t) && ell <= n, "need 2 <= t <= ell <= N");
    let (n_i, ell_i, t_i) = (n as i64, ell as i64, t as i64);
    let delta = (ell_i - t_i) as usize;

    let mut defining = Rational::zero();
    for j in 1..=(t_i - 1 + delta as i64) {
        defining += rising(&rat(t_i + 1), (j - 1) as usize)
            * falling(&rat(j - 1), delta)
            * binomial_rat(n_i - j - 1, t_i + delta as i64 - j - 1)
            / (rising(&rat(t_i + 1), delta) * rising(&rat(n_i + 2), j as usize));
    }

    let closed = falling(&rat(n_i - 1), (t_i - 2) as usize)
        * Rational::from_integer(factorial(delta))
        / (Rational::from_integer(factorial((t_i - 2) as usize))
            * rising(&rat(n_i + t_i), delta + 1));

    assert_eq!(
        defining, closed,
        "sigma identity fails at N={n}, ell={ell}, t={t}"
    );
    defining
}

/// Probability that the product blocks the elements of `[ℓ]`: in every
/// cycle no two elements of `[ℓ]` are neighbors and each has a neighbor
/// from outside. The two-term formula is
///
/// ```text
/// p = binom(N-ℓ, ℓ)/binom(N, ℓ) + (-1)^{k+1} binom(N-ℓ-1, ℓ-1) / ((N-1)^{k-1} binom(N, ℓ))
/// ```
///
/// `ℓ = 0` is vacuous (probability 1); `ℓ = N` leaves no outside neighbors
/// (probability 0).
pub fn p_blocking(spec: &BlockingSpec, k: u32) -> Rational {
    assert!(k >= 1);
    let (n, ell) = (spec.n as i64, spec.ell as i64);
    if ell == 0 {
        return rat(1);
    }
    if ell == n {
        return rat(0);
    }
    let base = binomial_rat(n - ell, ell) / binomial_rat(n, ell);
    let hook_num = binomial(n - ell - 1, ell - 1);
    if hook_num.is_zero() {
        return base;
    }
    base + sign_pow(k as i64 + 1) * Rational::from_integer(hook_num)
        / (rat_pow(&rat(n - 1), k as usize - 1) * binomial_rat(n, ell))
}

/// Number of directed cycles on `a` marked and `b` unmarked elements with no
/// two marked elements adjacent: `c(a,b) = (b-1)! a! binom(b,a)`.
pub fn blocked_cycle_count(a: u32, b: u32) -> BigInt {
    assert!(b > 0, "a cycle with marked elements needs unmarked ones (b > 0)");
    factorial(b as usize - 1) * factorial(a as usize) * binomial(b as i64, a as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::{p_is_cycle, ProductSpec};
    use crate::exact::ratio;
    use num_traits::{One, Signed};

    fn occupancy(n: u32, ell: u32, set: OccupancySet) -> OccupancySpec {
        OccupancySpec::new(n, ell, set)
    }

    fn explicit(counts: &[u32]) -> OccupancySet {
        OccupancySet::Explicit(counts.iter().copied().collect())
    }

    #[test]
    fn q_a_examples() {
        // unconstrained: the full class size
        let t = CycleType::from_parts(&[2, 1, 1]);
        assert_eq!(q_a(&t, &occupancy(4, 2, OccupancySet::Any)), t.class_size());
        // A={0,ell}, ell=N, N-cycle: (N-1)! of them
        assert_eq!(
            q_a(
                &CycleType::single_cycle(5),
                &occupancy(5, 5, OccupancySet::ZeroOrEll)
            ),
            factorial(4)
        );
        // N=3, ell=2, A={0,1}: (13) and (23) qualify, (12) does not
        assert_eq!(
            q_a(
                &CycleType::from_parts(&[2, 1]),
                &occupancy(3, 2, explicit(&[0, 1]))
            ),
            BigInt::from(2)
        );
    }

    #[test]
    fn q_a_unconstrained_is_class_size() {
        for n in 1..=6u32 {
            for t in CycleType::all(n) {
                for ell in 0..=n {
                    assert_eq!(
                        q_a(&t, &occupancy(n, ell, OccupancySet::Any)),
                        t.class_size(),
                        "N={n}, ell={ell}, type {t}"
                    );
                }
            }
        }
    }

    #[test]
    fn occupancy_examples() {
        assert_eq!(p_occupancy(&occupancy(3, 2, explicit(&[0, 1])), 2), ratio(1, 2));
        assert_eq!(p_occupancy(&occupancy(3, 2, explicit(&[0, 2])), 2), ratio(1, 2));
        // A = Z_{>0} at ell = 1 is the cycle probability
        for n in 2..=8 {
            for k in 2..=3 {
                assert_eq!(
                    p_occupancy(&occupancy(n, 1, OccupancySet::Positive), k),
                    p_is_cycle(ProductSpec::new(n, k)),
                    "N={n}, k={k}"
                );
            }
        }
    }

    #[test]
    fn occupancy_agrees_with_closed_forms() {
        for n in 1..=9u32 {
            for k in 2..=3u32 {
                for ell in 1..=n {
                    assert_eq!(
                        p_occupancy(&occupancy(n, ell, OccupancySet::Positive), k),
                        p_a1(n, ell, k),
                        "A1 N={n}, ell={ell}, k={k}"
                    );
                    if ell >= 2 {
                        assert_eq!(
                            p_occupancy(&occupancy(n, ell, OccupancySet::ZeroOrEll), k),
                            p_a2(n, ell, k),
                            "A2 N={n}, ell={ell}, k={k}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn a1_examples() {
        assert_eq!(p_a1(5, 1, 2), ratio(1, 3));
        assert_eq!(p_a1(4, 1, 2), rat(0));
        assert_eq!(p_a1(3, 2, 2), ratio(1, 2));
        for n in 1..=20 {
            for ell in 1..=n {
                // asserts all three k=2 routes agree
                p_a1_k2(n, ell);
            }
        }
    }

    #[test]
    fn a2_examples() {
        assert_eq!(p_a2(3, 2, 2), ratio(1, 2));
        assert_eq!(p_a2(4, 0, 2), rat(1));
        assert_eq!(p_a2(4, 1, 3), rat(1));
        for n in 2..=20 {
            for ell in 2..=n {
                p_a2_k2(n, ell);
            }
        }
        // full prefix in one cycle means the product is an N-cycle
        for n in 2..=8 {
            for k in 2..=3 {
                assert_eq!(p_a2(n, n, k), p_is_cycle(ProductSpec::new(n, k)));
            }
        }
    }

    #[test]
    fn a2_leading_term_structure() {
        // At N=30, ell=2 the value is 1/2 - 1/(31*30) plus the printed correction.
        let n = 30i64;
        let correction =
            p_a2(30, 2, 2) - (ratio(1, 2) - Rational::new(1.into(), (31 * 30).into()));
        let mut inner = binomial_rat(n + 2, 2).recip();
        inner += rat(n) * sign_pow(n) * binomial_rat(n - 1, 0) / rat(n + 2);
        let printed = sign_pow(3) * inner / (rat(2) * binomial_rat(n, 2));
        assert_eq!(correction, printed);
    }

    #[test]
    fn s_nab_examples() {
        assert_eq!(s_nab(2, 0, 0), ratio(3, 2));
        assert_eq!(s_nab(1, 0, 0), rat(0));
        assert_eq!(s_nab(3, 1, 1), ratio(-5, 3));
        for n in 0..=25u32 {
            for a in 0..=n {
                for b in 0..=(n - a).min(8) {
                    s_nab(n, a, b); // asserts the three forms agree
                }
            }
        }
    }

    #[test]
    fn k_coeff_examples() {
        assert_eq!(k_coeff(4, 2, 2, 1), BigInt::from(2));
        // K(N, N, t; r) = (-1)^{r-N+t} binom(t-1, r-N+t)
        for n in 2..=8u32 {
            for t in 1..=n {
                for r in (n as i64 - t as i64)..(n as i64) {
                    let shift = r - n as i64 + t as i64;
                    let want = binomial(t as i64 - 1, shift);
                    let want = if shift % 2 == 0 { want } else { -want };
                    assert_eq!(k_coeff(n, n, t, r), want, "N={n}, t={t}, r={r}");
                }
            }
        }
        // vanishing at r >= N and r < ell - t
        for n in 2..=8u32 {
            for t in 1..=4u32.min(n) {
                for ell in t..=n {
                    assert!(k_coeff(n, ell, t, n as i64).is_zero());
                    assert!(k_coeff(n, ell, t, n as i64 + 2).is_zero());
                    assert!(k_coeff(n, ell, t, ell as i64 - t as i64 - 1).is_zero());
                }
            }
        }
    }

    #[test]
    fn separation_examples() {
        assert_eq!(p_separation(&SeparationSpec::new(3, vec![1, 1]), 2), ratio(1, 2));
        assert_eq!(
            p_separation(&SeparationSpec::new(3, vec![1, 1, 1]), 2),
            ratio(1, 2)
        );
        assert_eq!(
            p_separation_full(&SeparationSpec::new(3, vec![1, 1, 1])),
            ratio(1, 2)
        );
        assert_eq!(
            p_separation_k2_bernardi(&SeparationSpec::new(5, vec![1, 1])),
            ratio(1, 2)
        );
    }

    #[test]
    #[should_panic(expected = "cover")]
    fn separation_full_requires_cover() {
        p_separation_full(&SeparationSpec::new(5, vec![1, 1]));
    }

    #[test]
    fn separation_depends_only_on_sizes_product() {
        // with (ell, t) fixed, changing the partition rescales by Π ℓ_j!
        for n in [6u32, 9] {
            for k in 2..=3u32 {
                let a = SeparationSpec::new(n, vec![3, 1]);
                let b = SeparationSpec::new(n, vec![2, 2]);
                let pa = p_separation(&a, k);
                let pb = p_separation(&b, k);
                assert_eq!(
                    pa * Rational::from_integer(b.sizes_factorial()),
                    pb * Rational::from_integer(a.sizes_factorial()),
                    "N={n}, k={k}"
                );
            }
        }
    }

    #[test]
    fn separation_triple_agreement() {
        for n in 1..=10u32 {
            for sizes in size_vectors(n, 4) {
                p_separation_all_k2(&SeparationSpec::new(n, sizes));
            }
        }
    }

    #[test]
    fn separation_singletons_give_inverse_factorial() {
        for n in 2..=12u32 {
            for ell in 1..=5u32.min(n) {
                if (n - ell) % 2 == 1 {
                    let spec = SeparationSpec::new(n, vec![1; ell as usize]);
                    assert_eq!(
                        p_separation(&spec, 2),
                        Rational::from_integer(factorial(ell as usize)).recip(),
                        "N={n}, ell={ell}"
                    );
                }
            }
        }
    }

    #[test]
    fn derangement_examples() {
        assert_eq!(p_derangement_k2(1), rat(0));
        assert_eq!(p_derangement_k2(2), rat(0));
        assert_eq!(p_derangement_k2(3), ratio(1, 2));
    }

    #[test]
    fn sigma_wz_examples() {
        // t = ell specializes the closed form to (N-1)_{t-2}/((t-2)!(N+t))
        for n in 3..=10u32 {
            for t in 2..=n.min(6) {
                let want = falling(&rat(n as i64 - 1), (t - 2) as usize)
                    / (Rational::from_integer(factorial((t - 2) as usize))
                        * rat(n as i64 + t as i64));
                assert_eq!(sigma_wz(n, t, t), want);
            }
        }
        sigma_wz(8, 5, 3);
        sigma_wz(10, 6, 2);
    }

    #[test]
    fn blocking_examples() {
        assert_eq!(p_blocking(&BlockingSpec::new(3, 2), 2), rat(0));
        assert_eq!(p_blocking(&BlockingSpec::new(4, 1), 2), ratio(2, 3));
        assert_eq!(p_blocking(&BlockingSpec::new(5, 0), 7), rat(1));
        assert_eq!(p_blocking(&BlockingSpec::new(1, 1), 2), rat(0));
        assert_eq!(p_blocking(&BlockingSpec::new(4, 4), 3), rat(0));
        // N=2: k=2 forces the identity (1 is fixed), k=3 the transposition
        assert_eq!(p_blocking(&BlockingSpec::new(2, 1), 2), rat(0));
        assert_eq!(p_blocking(&BlockingSpec::new(2, 1), 3), rat(1));
    }

    #[test]
    fn blocking_limit_and_range() {
        // the hook term decays like (N-1)^{-(k-1)} toward the uniform value
        let uniform = binomial_rat(4, 2) / binomial_rat(6, 2);
        let diff = p_blocking(&BlockingSpec::new(6, 2), 10) - uniform;
        assert_eq!(
            diff,
            -Rational::new(binomial(3, 1), BigInt::from(5u64.pow(9) * 15))
        );
        for n in 1..=20u32 {
            for ell in 0..=n {
                for k in 1..=6 {
                    let p = p_blocking(&BlockingSpec::new(n, ell), k);
                    assert!(
                        !p.is_negative() && p <= rat(1),
                        "out of range at N={n}, ell={ell}, k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn blocked_cycle_count_examples() {
        assert_eq!(blocked_cycle_count(0, 4), BigInt::from(6));
        assert_eq!(blocked_cycle_count(1, 1), BigInt::one());
        assert_eq!(blocked_cycle_count(2, 2), BigInt::from(2));
        // the two printed forms of c(a,b) coincide
        for a in 1..=6u32 {
            for b in 1..=6u32 {
                let alt = factorial(a as usize - 1)
                    * factorial(b as usize)
                    * binomial(b as i64 - 1, a as i64 - 1);
                assert_eq!(blocked_cycle_count(a, b), alt);
            }
        }
    }

    #[test]
    #[should_panic(expected = "b > 0")]
    fn blocked_cycle_count_rejects_all_marked() {
        blocked_cycle_count(3, 0);
    }

    #[test]
    fn occupancy_set_text_forms() {
        assert_eq!(
            "positive".parse::<OccupancySet>().unwrap(),
            OccupancySet::Positive
        );
        assert_eq!("0,ell".parse::<OccupancySet>().unwrap(), OccupancySet::ZeroOrEll);
        assert_eq!("{1,2}".parse::<OccupancySet>().unwrap(), explicit(&[1, 2]));
        assert!("garbage".parse::<OccupancySet>().is_err());
        assert_eq!(explicit(&[0, 2]).to_string(), "{0,2}");
        assert_eq!(OccupancySet::Positive.to_string(), "positive");
    }

    fn size_vectors(max_ell: u32, max_t: usize) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut acc = Vec::new();
        rec(max_ell, max_ell, &mut acc, max_t, &mut out);
        return out;

        fn rec(rem: u32, max: u32, acc: &mut Vec<u32>, max_t: usize, out: &mut Vec<Vec<u32>>) {
            if !acc.is_empty() {
                out.push(acc.clone());
            }
            if acc.len() == max_t {
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                acc.push(p);
                rec(rem - p, p, acc, max_t, out);
                acc.pop();
            }
        }
    }
}
