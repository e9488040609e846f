//! Brute-force ground truth for small `N`.
//!
//! Kept deliberately simple: maximal cycles are enumerated outright, and the
//! distribution of the product is built from exhaustively counted one-step
//! class transitions. Because the law of the product is a class function
//! (conjugating every factor by `g` is a measure-preserving bijection of
//! factor tuples that conjugates the product), the transition counts out of a
//! single class representative are exact, and element-dependent events can be
//! recovered as class probability times the within-class fraction of
//! permutations satisfying the predicate, the fraction found by enumerating
//! all of `S_N` once.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::exact::Rational;
use crate::hooks::CycleType;
use crate::subsets::OccupancySet;

/// Default enumeration cap for the class view.
pub const DEFAULT_CLASS_CAP: u32 = 9;

/// Default cap for element-dependent predicates, by number of factors.
pub fn default_element_cap(k: u32) -> u32 {
    if k <= 2 {
        7
    } else {
        5
    }
}

/// Refusal to enumerate beyond the configured cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TooLarge {
    pub what: &'static str,
    pub n: u32,
    pub cap: u32,
}

impl fmt::Display for TooLarge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "refusing {} at N={}: exceeds the enumeration cap {} (override with CYCLEPROD_ORACLE_CAP)",
            self.what, self.n, self.cap
        )
    }
}

impl std::error::Error for TooLarge {}

/// A permutation of `{0, ..., N-1}` in one-line form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n).collect(),
        }
    }

    /// Build from a one-line image; must be a bijection.
    pub fn from_image(image: Vec<usize>) -> Self {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            assert!(v < n && !seen[v], "image is not a permutation of 0..{n}");
            seen[v] = true;
        }
        Permutation { image }
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    /// `self ∘ rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &Self) -> Self {
        assert_eq!(self.n(), rhs.n());
        Permutation {
            image: rhs.image.iter().map(|&i| self.image[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut image = vec![0; self.n()];
        for (i, &v) in self.image.iter().enumerate() {
            image[v] = i;
        }
        Permutation { image }
    }

    /// Cycle decomposition; each cycle starts at its smallest element,
    /// cycles ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                cycle.push(j);
                j = self.image[j];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        let parts: Vec<u32> = self.cycles().iter().map(|c| c.len() as u32).collect();
        CycleType::from_parts(&parts)
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_max_cycle(&self) -> bool {
        self.cycles().len() == 1
    }

    pub fn is_derangement(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i != v)
    }

    pub fn is_involution(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| self.image[v] == i)
    }
}

impl fmt::Display for Permutation {
    /// One-line form with 1-based values, e.g. `[2 3 1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.image.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, "]")
    }
}

/// All `(N-1)!` maximal cycles of `S_N`, sorted by one-line form.
pub fn all_maximal_cycles(n: u32, cap: u32) -> Result<Vec<Permutation>, TooLarge> {
    if n > cap {
        return Err(TooLarge {
            what: "maximal-cycle enumeration",
            n,
            cap,
        });
    }
    assert!(n >= 1);
    let rest: Vec<usize> = (1..n as usize).collect();
    let mut out = Vec::new();
    for arrangement in rest.iter().copied().permutations(rest.len()) {
        let mut image = vec![0; n as usize];
        let mut cur = 0;
        for v in arrangement {
            image[cur] = v;
            cur = v;
        }
        image[cur] = 0;
        out.push(Permutation { image });
    }
    out.sort_unstable();
    Ok(out)
}

/// The canonical class member: cycles laid out consecutively, longest first.
pub fn class_representative(ctype: &CycleType) -> Permutation {
    let n = ctype.n() as usize;
    let mut image = vec![0; n];
    let mut pos = 0;
    let mut parts: Vec<u32> = Vec::new();
    for (r, c) in ctype.counts() {
        parts.extend(std::iter::repeat_n(r, c as usize));
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    for r in parts {
        let r = r as usize;
        for i in 0..r {
            image[pos + i] = pos + (i + 1) % r;
        }
        pos += r;
    }
    Permutation { image }
}

/// Exact class-level law of the product of `k` uniform maximal cycles.
#[derive(Clone, Debug)]
pub struct ExactDistribution {
    pub n: u32,
    pub k: u32,
    classes: Vec<(CycleType, Rational)>,
}

impl ExactDistribution {
    /// Class probabilities in [`CycleType::all`] order.
    pub fn classes(&self) -> &[(CycleType, Rational)] {
        &self.classes
    }

    pub fn class_weight(&self, ctype: &CycleType) -> Rational {
        self.classes
            .iter()
            .find(|(t, _)| t == ctype)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Weight of a single permutation: class weight over class size
    /// (the law is constant on conjugacy classes).
    pub fn permutation_weight(&self, p: &Permutation) -> Rational {
        let t = p.cycle_type();
        self.class_weight(&t) / Rational::from_integer(t.class_size())
    }
}

/// One-step class transition counts: the class histogram of `rep ∘ p` over
/// all maximal cycles `p`, divided by `(N-1)!`. The factor list is split
/// across workers; the reduction is an exact integer count, so the result is
/// independent of scheduling.
fn kernel_row(
    rep: &Permutation,
    factors: &[Permutation],
    index: &BTreeMap<CycleType, usize>,
) -> Vec<Rational> {
    let counts = factors
        .par_chunks(4096)
        .map(|chunk| {
            let mut local = vec![0u64; index.len()];
            for p in chunk {
                local[index[&rep.compose(p).cycle_type()]] += 1;
            }
            local
        })
        .reduce(
            || vec![0u64; index.len()],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let total = Rational::from_integer(BigInt::from(factors.len() as u64));
    counts
        .into_iter()
        .map(|c| Rational::from_integer(BigInt::from(c)) / total.clone())
        .collect()
}

/// Exact class distribution of the product, built by chaining one-step
/// transitions from the maximal-cycle class (the law of the first factor).
pub fn exact_product_distribution(n: u32, k: u32, cap: u32) -> Result<ExactDistribution, TooLarge> {
    if n > cap {
        return Err(TooLarge {
            what: "class-distribution enumeration",
            n,
            cap,
        });
    }
    assert!(n >= 1 && k >= 1);
    let types = CycleType::all(n);
    let index: BTreeMap<CycleType, usize> =
        types.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let factors = all_maximal_cycles(n, cap)?;

    let mut weights = vec![Rational::zero(); types.len()];
    weights[index[&CycleType::single_cycle(n)]] = Rational::one();

    let mut rows: BTreeMap<usize, Vec<Rational>> = BTreeMap::new();
    for _ in 1..k {
        let mut next = vec![Rational::zero(); types.len()];
        for (i, w) in weights.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            let row = rows.entry(i).or_insert_with(|| {
                kernel_row(&class_representative(&types[i]), &factors, &index)
            });
            for (j, q) in row.iter().enumerate() {
                if !q.is_zero() {
                    next[j] += w * q;
                }
            }
        }
        weights = next;
    }

    let classes: Vec<(CycleType, Rational)> =
        types.into_iter().zip(weights).collect();
    let mass: Rational = classes.iter().map(|(_, p)| p.clone()).sum();
    assert!(mass.is_one(), "class distribution must have total mass 1");
    Ok(ExactDistribution { n, k, classes })
}

/// Fully exhaustive law over all `(N-1)!^k` ordered factor tuples, as a map
/// from product permutation to probability. Only for very small sizes; used
/// to validate the class route.
pub fn exhaustive_tuple_distribution(
    n: u32,
    k: u32,
    cap: u32,
) -> Result<BTreeMap<Permutation, Rational>, TooLarge> {
    let factors = all_maximal_cycles(n, cap)?;
    let tuples = (factors.len() as f64).powi(k as i32);
    if tuples > 3e6 {
        return Err(TooLarge {
            what: "full tuple enumeration",
            n,
            cap,
        });
    }
    let mut counts: BTreeMap<Permutation, u64> = BTreeMap::new();
    let mut stack = vec![Permutation::identity(n as usize)];
    for _ in 0..k {
        let mut next = Vec::with_capacity(stack.len() * factors.len());
        for acc in &stack {
            for p in &factors {
                next.push(acc.compose(p));
            }
        }
        stack = next;
    }
    for p in stack {
        *counts.entry(p).or_insert(0) += 1;
    }
    let total = Rational::from_integer(BigInt::from(factors.len() as u64).pow(k));
    Ok(counts
        .into_iter()
        .map(|(p, c)| (p, Rational::from_integer(BigInt::from(c)) / total.clone()))
        .collect())
}

/// Visit every permutation of `S_N` in lexicographic one-line order.
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&Permutation)) {
    for image in (0..n).permutations(n) {
        f(&Permutation { image });
    }
}

/// Exact probability of an arbitrary event under the product of `k` uniform
/// maximal cycles: class probability times the within-class fraction of
/// permutations satisfying the predicate.
pub fn event_probability(
    n: u32,
    k: u32,
    class_cap: u32,
    element_cap: u32,
    pred: impl Fn(&Permutation) -> bool,
) -> Result<Rational, TooLarge> {
    if n > element_cap {
        return Err(TooLarge {
            what: "element-predicate enumeration",
            n,
            cap: element_cap,
        });
    }
    let dist = exact_product_distribution(n, k, class_cap)?;
    let index: BTreeMap<CycleType, usize> = dist
        .classes()
        .iter()
        .enumerate()
        .map(|(i, (t, _))| (t.clone(), i))
        .collect();
    let mut satisfied = vec![0u64; index.len()];
    let mut seen = vec![0u64; index.len()];
    for_each_permutation(n as usize, |p| {
        let i = index[&p.cycle_type()];
        seen[i] += 1;
        if pred(p) {
            satisfied[i] += 1;
        }
    });
    let mut total = Rational::zero();
    for (i, (t, w)) in dist.classes().iter().enumerate() {
        debug_assert_eq!(BigInt::from(seen[i]), t.class_size());
        if w.is_zero() || satisfied[i] == 0 {
            continue;
        }
        total += w * Rational::new(satisfied[i].into(), seen[i].into());
    }
    Ok(total)
}

/// Does every cycle of `p` carry a permitted number of elements of `[ℓ]`?
pub fn occupancy_ok(p: &Permutation, ell: u32, set: &OccupancySet) -> bool {
    p.cycles().iter().all(|cycle| {
        let count = cycle.iter().filter(|&&x| (x as u32) < ell).count() as u32;
        set.contains(count, ell)
    })
}

/// Does `p` separate the consecutive prefix blocks of the given sizes
/// (no cycle meets two distinct blocks)?
pub fn separates(p: &Permutation, sizes: &[u32]) -> bool {
    let mut block_of = vec![usize::MAX; p.n()];
    let mut start = 0usize;
    for (b, &s) in sizes.iter().enumerate() {
        block_of[start..start + s as usize].fill(b);
        start += s as usize;
    }
    p.cycles().iter().all(|cycle| {
        let mut hit = None;
        for &x in cycle {
            let b = block_of[x];
            if b == usize::MAX {
                continue;
            }
            match hit {
                None => hit = Some(b),
                Some(h) if h != b => return false,
                _ => {}
            }
        }
        true
    })
}

/// Does `p` block `[ℓ]`? In every cycle, read cyclically: no element of
/// `[ℓ]` may neighbor another one, and each must have a neighbor outside
/// `[ℓ]`. A marked fixed point has no outside neighbor, so it fails; in a
/// 2-cycle the single other element counts as both neighbors.
pub fn blocks(p: &Permutation, ell: u32) -> bool {
    let marked = |x: usize| (x as u32) < ell;
    for cycle in p.cycles() {
        let m = cycle.len();
        for (i, &x) in cycle.iter().enumerate() {
            if !marked(x) {
                continue;
            }
            if m == 1 {
                return false;
            }
            if marked(cycle[(i + 1) % m]) || marked(cycle[(i + m - 1) % m]) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};
    use crate::hooks::product_class_distribution;

    #[test]
    fn maximal_cycle_enumeration() {
        assert_eq!(all_maximal_cycles(1, 9).unwrap().len(), 1);
        let three = all_maximal_cycles(3, 9).unwrap();
        assert_eq!(three.len(), 2);
        assert_eq!(three[0].image(), &[1, 2, 0]);
        assert_eq!(three[1].image(), &[2, 0, 1]);
        assert_eq!(all_maximal_cycles(4, 9).unwrap().len(), 6);
        for p in all_maximal_cycles(5, 9).unwrap() {
            assert!(p.is_max_cycle());
        }
        let err = all_maximal_cycles(12, 9).unwrap_err();
        assert!(err.to_string().contains("cap 9"));
    }

    #[test]
    fn permutation_basics() {
        let p = Permutation::from_image(vec![1, 0, 3, 2]);
        assert!(p.is_involution() && p.is_derangement());
        assert_eq!(p.cycle_type(), CycleType::from_parts(&[2, 2]));
        assert_eq!(p.compose(&p), Permutation::identity(4));
        let q = Permutation::from_image(vec![2, 0, 1]);
        assert_eq!(q.compose(&q.inverse()), Permutation::identity(3));
        assert_eq!(q.to_string(), "[3 1 2]");
    }

    #[test]
    #[should_panic(expected = "not a permutation")]
    fn from_image_rejects_duplicates() {
        Permutation::from_image(vec![0, 0, 2]);
    }

    #[test]
    fn class_distribution_small_cases() {
        let d = exact_product_distribution(3, 2, 9).unwrap();
        assert_eq!(d.class_weight(&CycleType::identity(3)), ratio(1, 2));
        assert_eq!(d.class_weight(&CycleType::single_cycle(3)), ratio(1, 2));
        assert_eq!(d.class_weight(&CycleType::from_parts(&[2, 1])), rat(0));

        let d = exact_product_distribution(2, 5, 9).unwrap();
        assert_eq!(d.class_weight(&CycleType::single_cycle(2)), rat(1));
    }

    #[test]
    fn class_distribution_matches_characters() {
        for n in 1..=7u32 {
            for k in 1..=3u32 {
                let oracle = exact_product_distribution(n, k, 9).unwrap();
                for (t, p) in product_class_distribution(n, k) {
                    assert_eq!(oracle.class_weight(&t), p, "N={n}, k={k}, type {t}");
                }
            }
        }
    }

    #[test]
    fn class_route_matches_full_tuple_enumeration() {
        for (n, k) in [(2u32, 4u32), (3, 3), (4, 3), (5, 2), (5, 3), (6, 2)] {
            let full = exhaustive_tuple_distribution(n, k, 9).unwrap();
            let by_class = exact_product_distribution(n, k, 9).unwrap();
            let mut mass: BTreeMap<CycleType, Rational> = BTreeMap::new();
            for (p, w) in &full {
                *mass.entry(p.cycle_type()).or_insert_with(Rational::zero) += w;
            }
            for (t, w) in by_class.classes() {
                assert_eq!(
                    mass.get(t).cloned().unwrap_or_else(Rational::zero),
                    w.clone(),
                    "N={n}, k={k}, type {t}"
                );
            }
            // constancy on classes, and agreement with permutation_weight
            for (p, w) in &full {
                assert_eq!(
                    by_class.permutation_weight(p),
                    w.clone(),
                    "N={n}, k={k}, perm {p}"
                );
            }
        }
    }

    #[test]
    fn event_probabilities_match_named_examples() {
        let p_id = event_probability(3, 2, 9, 7, |p| p.is_identity()).unwrap();
        assert_eq!(p_id, ratio(1, 2));
        let p_blk = event_probability(4, 2, 9, 7, |p| blocks(p, 1)).unwrap();
        assert_eq!(p_blk, ratio(2, 3));
        let p_sep = event_probability(3, 2, 9, 7, |p| separates(p, &[1, 1])).unwrap();
        assert_eq!(p_sep, ratio(1, 2));
    }

    type NamedEvents = Vec<(&'static str, Box<dyn Fn(&Permutation) -> bool>)>;

    #[test]
    fn event_probability_matches_full_enumeration() {
        for (n, k) in [(4u32, 2u32), (5, 2), (4, 3)] {
            let full = exhaustive_tuple_distribution(n, k, 9).unwrap();
            let events: NamedEvents = vec![
                ("derangement", Box::new(|p: &Permutation| p.is_derangement())),
                ("blocks[2]", Box::new(|p: &Permutation| blocks(p, 2))),
                ("sep(1,1)", Box::new(|p: &Permutation| separates(p, &[1, 1]))),
                ("sep(2,1)", Box::new(|p: &Permutation| separates(p, &[2, 1]))),
                (
                    "occ{0,1}",
                    Box::new(|p: &Permutation| {
                        occupancy_ok(p, 2, &OccupancySet::Explicit([0, 1].into()))
                    }),
                ),
            ];
            for (name, pred) in events {
                let direct: Rational = full
                    .iter()
                    .filter(|(p, _)| pred(p))
                    .map(|(_, w)| w.clone())
                    .sum();
                let via_classes = event_probability(n, k, 9, 7, &pred).unwrap();
                assert_eq!(via_classes, direct, "N={n}, k={k}, event {name}");
            }
        }
    }

    #[test]
    fn blocking_predicate_edge_cases() {
        // a marked fixed point never blocks
        assert!(!blocks(&Permutation::identity(4), 1));
        // 4-cycle 1->3->2->4->1 keeps 1 and 2 adjacent
        let p = Permutation::from_image(vec![2, 3, 1, 0]);
        assert!(p.is_max_cycle());
        assert!(!separates(&p, &[1, 1]));
        // (1 3)(2 4): each marked element only neighbors {3, 4}
        let q = Permutation::from_image(vec![2, 3, 0, 1]);
        assert!(blocks(&q, 2));
        // 2-cycle with both elements marked fails
        let r = Permutation::from_image(vec![1, 0, 2]);
        assert!(!blocks(&r, 2));
        assert!(blocks(&r, 1));
    }

    #[test]
    fn element_cap_is_enforced() {
        assert!(event_probability(8, 2, 9, 7, |p| p.is_identity()).is_err());
        assert_eq!(default_element_cap(2), 7);
        assert_eq!(default_element_cap(3), 5);
    }
}
