//! Cross-module invariants that go beyond the per-module unit tests: the
//! subset formulas against the oracle at the full module ranges, and the
//! Monte Carlo coverage audit.

use cycleprod::cycles::{p_is_cycle, ProductSpec};
use cycleprod::exact::{rat, to_f64, Rational};
use cycleprod::montecarlo::{estimate, Confidence, McConfig};
use cycleprod::oracle;
use cycleprod::subsets::{
    p_a1, p_a2, p_blocking, p_occupancy, p_separation, BlockingSpec, OccupancySet, OccupancySpec,
    SeparationSpec,
};

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

/// Every probability the subset module returns lies in [0, 1] and matches
/// the oracle exactly for N <= 7, k <= 3 (explicit caps; the defaults are
/// CLI policy, not a library limit).
#[test]
fn subset_probabilities_match_oracle_to_n7_k3() {
    let in_range = |p: &Rational| *p >= rat(0) && *p <= rat(1);
    for n in 2..=7u32 {
        for k in 2..=3u32 {
            let event = |pred: &dyn Fn(&oracle::Permutation) -> bool| {
                oracle::event_probability(n, k, 9, 7, pred).unwrap()
            };
            for ell in 1..=n {
                for set in [
                    OccupancySet::Positive,
                    OccupancySet::ZeroOrEll,
                    OccupancySet::Explicit([0, 1].into()),
                    OccupancySet::Explicit([1, 2].into()),
                ] {
                    let spec = OccupancySpec::new(n, ell, set.clone());
                    let p = p_occupancy(&spec, k);
                    assert!(in_range(&p));
                    assert_eq!(p, event(&|q| oracle::occupancy_ok(q, ell, &set)));
                }
                assert_eq!(
                    p_a1(n, ell, k),
                    event(&|q| oracle::occupancy_ok(q, ell, &OccupancySet::Positive))
                );
                if ell >= 2 {
                    assert_eq!(
                        p_a2(n, ell, k),
                        event(&|q| oracle::occupancy_ok(q, ell, &OccupancySet::ZeroOrEll))
                    );
                }
            }
            for sizes in size_vectors(n, 4) {
                let spec = SeparationSpec::new(n, sizes.clone());
                let p = p_separation(&spec, k);
                assert!(in_range(&p));
                assert_eq!(p, event(&|q| oracle::separates(q, &sizes)), "sizes {sizes:?}");
            }
            for ell in 0..=n {
                let p = p_blocking(&BlockingSpec::new(n, ell), k);
                assert!(in_range(&p));
                assert_eq!(p, event(&|q| oracle::blocks(q, ell)), "ell {ell}");
            }
        }
    }
}

/// Coverage audit: over a 20-case grid with known exact values, at least 17
/// of the 95% Wilson intervals contain the exact value. Seeded, so the count
/// is reproducible; the margin makes it rerun-tolerant by construction.
#[test]
fn wilson_coverage_audit() {
    type Case = (Rational, Box<dyn Fn(&oracle::Permutation) -> bool + Sync>);
    let mut covered = 0;
    let mut total = 0;
    for &n in &[6u32, 9, 12, 15, 20] {
        for &k in &[2u32, 3] {
            let cases: [Case; 2] = [
                (
                    p_is_cycle(ProductSpec::new(n, k)),
                    Box::new(|p: &oracle::Permutation| p.is_max_cycle()),
                ),
                (
                    p_blocking(&BlockingSpec::new(n, 2), k),
                    Box::new(|p: &oracle::Permutation| oracle::blocks(p, 2)),
                ),
            ];
            for (i, (exact, pred)) in cases.iter().enumerate() {
                total += 1;
                let config = McConfig::new(n, k, 40_000, 1000 + total + i as u64, Confidence::P95);
                if estimate(&config, pred).contains(to_f64(exact)) {
                    covered += 1;
                }
            }
        }
    }
    assert_eq!(total, 20);
    assert!(covered >= 17, "only {covered} of {total} intervals covered");
}
