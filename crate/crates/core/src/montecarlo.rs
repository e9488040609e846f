//! Seeded Monte Carlo estimation for parameters beyond exhaustive reach.
//!
//! Trials are grouped into fixed-size batches; batch `b` draws from a ChaCha
//! stream derived from `(seed, b)`, and the batch of a trial is a pure
//! function of its index. Batches run in parallel and successes are summed as
//! integers, so the estimate is identical for any worker count.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::exact::Rational;
use crate::oracle::Permutation;

const BATCH_SIZE: u64 = 1 << 14;

/// Confidence level for the Wilson score interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Confidence {
    P95,
    P99,
}

impl Confidence {
    /// Two-sided normal quantile for the level.
    pub fn z(self) -> f64 {
        match self {
            Confidence::P95 => 1.959963984540054,
            Confidence::P99 => 2.5758293035489004,
        }
    }

    pub fn level(self) -> &'static str {
        match self {
            Confidence::P95 => "0.95",
            Confidence::P99 => "0.99",
        }
    }
}

impl std::str::FromStr for Confidence {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "0.95" | "95" => Ok(Confidence::P95),
            "0.99" | "99" => Ok(Confidence::P99),
            _ => Err(format!("bad confidence {s:?}: expected 0.95 or 0.99")),
        }
    }
}

/// Sampling parameters.
#[derive(Clone, Copy, Debug)]
pub struct McConfig {
    pub n: u32,
    pub k: u32,
    pub trials: u64,
    pub seed: u64,
    pub confidence: Confidence,
}

impl McConfig {
    pub fn new(n: u32, k: u32, trials: u64, seed: u64, confidence: Confidence) -> Self {
        assert!(n >= 1 && k >= 1 && trials >= 1);
        McConfig {
            n,
            k,
            trials,
            seed,
            confidence,
        }
    }
}

/// Point estimate and Wilson interval for an event probability.
#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    pub successes: u64,
    pub trials: u64,
    /// Exact empirical frequency `successes / trials`.
    pub point: Rational,
    pub low: f64,
    pub high: f64,
}

impl Estimate {
    pub fn contains(&self, value: f64) -> bool {
        self.low <= value && value <= self.high
    }
}

/// A uniform maximal cycle: a uniform arrangement of `2..=N` following
/// element 1, closed into a single cycle.
pub fn sample_maximal_cycle<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Permutation {
    let n = n as usize;
    let mut rest: Vec<usize> = (1..n).collect();
    rest.shuffle(rng);
    let mut image = vec![0; n];
    let mut cur = 0;
    for v in rest {
        image[cur] = v;
        cur = v;
    }
    image[cur] = 0;
    Permutation::from_image(image)
}

/// Wilson score interval, clamped to `[0, 1]`. The boundary cases are pinned
/// exactly: zero successes give `low = 0` and all successes give `high = 1`
/// (rounding in the radius must not exclude them).
fn wilson(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    let t = trials as f64;
    let p_hat = successes as f64 / t;
    let z2 = z * z;
    let denom = 1.0 + z2 / t;
    let center = p_hat + z2 / (2.0 * t);
    let radius = z * (p_hat * (1.0 - p_hat) / t + z2 / (4.0 * t * t)).sqrt();
    let low = if successes == 0 {
        0.0
    } else {
        ((center - radius) / denom).max(0.0)
    };
    let high = if successes == trials {
        1.0
    } else {
        ((center + radius) / denom).min(1.0)
    };
    (low, high)
}

/// Estimate the probability of `pred` under the product of `k` uniform
/// maximal cycles. Deterministic for a fixed `(seed, trials, N, k, pred)`.
pub fn estimate(config: &McConfig, pred: impl Fn(&Permutation) -> bool + Sync) -> Estimate {
    let batches = config.trials.div_ceil(BATCH_SIZE);
    let successes: u64 = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(b);
            let lo = b * BATCH_SIZE;
            let hi = (lo + BATCH_SIZE).min(config.trials);
            let mut count = 0u64;
            for _ in lo..hi {
                let mut sigma = sample_maximal_cycle(config.n, &mut rng);
                for _ in 1..config.k {
                    sigma = sigma.compose(&sample_maximal_cycle(config.n, &mut rng));
                }
                if pred(&sigma) {
                    count += 1;
                }
            }
            count
        })
        .sum();
    let point = Rational::new(BigInt::from(successes), BigInt::from(config.trials));
    let (low, high) = wilson(successes, config.trials, config.confidence.z());
    Estimate {
        successes,
        trials: config.trials,
        point,
        low,
        high,
    }
}
