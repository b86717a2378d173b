//! Online knapsack and generalized assignment in the random-order model.
//!
//! The crate covers the whole pipeline: instances and their δ-split,
//! seeded arrival orders, the online algorithms (a two-item secretary
//! rule for large items, fractional-greedy rounding for small items,
//! matching and LP rounding for GAP), exact offline reference solvers,
//! the closed-form success probabilities and ratio bounds, and a
//! Monte Carlo harness tying them together.

pub mod analysis;
pub mod error;
pub mod instance;
pub mod online;
pub mod oracles;
pub mod perm;
pub mod rational;
pub mod simulator;
pub mod split;

pub use error::{Error, Result};
pub use instance::{GapInstance, GapOption, Instance, KnapsackInstance, KnapsackItem};
pub use online::{AssignmentTrace, RunTrace, SeqParams, SmallPhase};
pub use perm::Permutation;
pub use rational::Rational;
