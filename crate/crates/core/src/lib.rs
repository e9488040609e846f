//! Exact cycle-structure statistics for the product of `k` independent uniform
//! maximal cycles in the symmetric group `S_N`.
//!
//! Everything is computed in arbitrary-precision rational arithmetic; floats
//! appear only when formatting output or reporting Monte Carlo confidence
//! intervals. The crate is organized as:
//!
//! - [`exact`]: rationals, factorials, binomials, Stirling numbers, and the
//!   dense truncated power series used for every coefficient extraction.
//! - [`hooks`]: hook characters of `S_N`, class character sums, and the
//!   Fourier-inversion class distribution of the product, the independent
//!   character engine the formula modules are checked against.
//! - [`cycles`]: distribution of the number of cycles, identity and
//!   maximal-cycle probabilities, probability generating functions, the
//!   integral formula for an arbitrary cycle type at `k = 2`, same-length
//!   and involution probabilities.
//! - [`subsets`]: occupancy probabilities for the counts of `[ℓ]` inside the
//!   cycles (general `A`, `A = Z_{>0}`, `A = {0, ℓ}`), separation
//!   probabilities for disjoint sets, and the blocking probability.
//! - [`oracle`]: brute-force ground truth by exhaustive enumeration of
//!   maximal-cycle products for small `N`, with exact event probabilities
//!   for arbitrary predicates.
//! - [`montecarlo`]: deterministic seeded sampling with Wilson confidence
//!   intervals, for parameters beyond exhaustive reach.

pub mod cycles;
pub mod exact;
pub mod hooks;
pub mod montecarlo;
pub mod oracle;
pub mod subsets;

pub use exact::{FormalSeries, Rational};
pub use hooks::{CycleType, HookShape};
pub use oracle::Permutation;
