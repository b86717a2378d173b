//! Closed-form analysis of the algorithms.
//!
//! * [`probs`]: exact finite-`n` probabilities that the two-item secretary
//!   rule accepts a given ranked item (or pair) first.
//! * [`bounds`]: their `n → ∞` limits, the packing-type algebra, the five
//!   case bounds, the small-item and matching ratio functions.
//! * [`optimize`]: grid search for the phase parameters `(c, d)`.

pub mod bounds;
pub mod optimize;
pub mod probs;
mod report;

pub use bounds::{
    case_bounds, case_values_general, feasibility_f, feasibility_f_polynomial, is_feasible,
    p_first_asymptotic, p_pair_asymptotic, ratio_as_bound, ratio_bundle, ratio_matching_bound,
    type_probabilities, CaseTerms, PairIndex, Problem, RatioBundle, TypeProbabilities,
};
pub use optimize::{optimize_params, Optimum};
pub use probs::{p_first, p_first_exact, p_ordered_pair_exact, p_pair, p_pair_exact, EXACT_MAX_N};
pub use report::ProbabilityReport;
