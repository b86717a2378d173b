//! Monte Carlo and exhaustive-enumeration harness.
//!
//! Trial `t` of an experiment with seed `s` uses the arrival order
//! `random_permutation(n, s, t)` and the coin stream `coin_rng(s, t)`, so an
//! estimate depends only on `(instance, parameters, trials, seed)` and not
//! on how trials are scheduled across threads.

mod enumerate;
mod estimate;
mod families;
mod results;
mod stats;

pub use enumerate::{enumerate_exact, rank_instance, EnumeratedStats, ENUMERATION_MAX_N};
pub use estimate::{
    estimate_probability, estimate_ratio, Algorithm, Event, OptKind, OptRef, RatioEstimate,
};
pub use families::{generate, matching_table, FamilyKind, InstanceFamily};
pub use results::{read_rows, write_rows, ExperimentRow};
pub use stats::{neumaier_sum, Estimate};
