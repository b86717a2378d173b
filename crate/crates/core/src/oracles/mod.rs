//! Offline reference solvers.
//!
//! These are the yardsticks the online algorithms are measured against and
//! the independent routes the analysis is cross-checked with. Everything is
//! exact: rationals throughout, or integers after scaling by a common
//! denominator.

mod gap;
pub mod gap_lp;
mod knapsack;
mod matching;
pub mod simplex;

pub use gap::{
    gap_lp1, gap_opt_fractional, gap_opt_fractional_dense, gap_opt_integral, GapFractionalSolution, GapIntegralSolution,
};
pub use knapsack::{
    density_order, knapsack_opt_fractional, knapsack_opt_integral, FractionalSolution,
    KnapsackOptimum,
};
pub use matching::{matching_opt, max_weight_matching, Matching};

use serde::{Deserialize, Serialize};

/// Size limits for the exponential-time exact solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverCaps {
    /// Largest item count accepted by the branch-and-bound knapsack solver.
    pub knapsack_max_items: usize,
    /// Largest `(m + 1)^n` accepted by the GAP enumeration.
    pub gap_max_assignments: u64,
}

impl Default for SolverCaps {
    fn default() -> Self {
        SolverCaps {
            knapsack_max_items: 40,
            gap_max_assignments: 2_000_000,
        }
    }
}
