//! The convergent exact formula for `c_delta(n)`: individual terms, the
//! `k = 10` main term, truncated sums with rigorous tail bounds, and the
//! closed-form inequality that separates the main term from the rest.
//!
//! Every term uses the shifted index `M = 5n + 3 delta`.

mod bounds;
mod engine;
mod terms;

pub use bounds::{
    error_bound_total, main_error_split, tail_bound_op, tail_min_k, threshold_crossover, threshold_lhs,
    threshold_lhs_with, MainErrorSplit, ThresholdForm,
};
pub use engine::{
    c_exact, c_exact_at_cutoffs, c_exact_many, default_k_max, ExactEval, MAX_DOUBLINGS, MIN_DEFAULT_K,
};
pub use terms::{main_term, main_term_phase, shifted_index, term_k};
