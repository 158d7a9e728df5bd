//! Cusp decompositions, divisor counts, Kloosterman sums `K_k(n, m)`, the
//! twisted sums `A_{k,j}(n)`, `A_k(n)`, `cal A_k(n)`, their Kloosterman
//! reductions, and the bounds they satisfy.
//!
//! Every sum here is a sum of roots of unity and is built as a [`RootSum`]
//! before any floating-point evaluation.

mod basic;
mod bounds;
mod cusp;
mod kloosterman;
mod roots;
mod sums;

pub use basic::{divisor_count, divisor_counts_upto, euler_phi, gcd, gcd3, mod_inverse};
pub use bounds::{
    a_k_bound, a_kj_bound, aggregate_bound_check, bound_check_d10, bound_check_d5,
    sweep_kj_bounds, write_sweep_csv, AggregateOutcome, BoundOutcome, SweepRow,
};
pub use cusp::{alpha, cusp_d, decompose, hprime, CuspData};
pub use kloosterman::{kloosterman, kloosterman_roots, weil_bound_check, KloostermanValue, WeilCheck};
pub use roots::{RootSum, RootTable};
pub use sums::{
    a_k, a_kj, a_kj_reduced_d10_abs, a_kj_reduced_d10_abs_with_alpha, a_kj_reduced_d5,
    a_kj_reduced_d5_with_alpha, a_kj_rewritten, a_kj_roots, cal_a_k, reduced_m_coefficient,
    CuspFamily,
};

/// Working precision (bits) for identity checks; values are then accurate far
/// below the `1e-20` comparison tolerance.
pub const DEFAULT_PREC: u32 = 128;
