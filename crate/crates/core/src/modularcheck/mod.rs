//! Numerical checks of the modular identities behind the exact formula:
//! Jacobi theta and its triple product, Dedekind eta, the eta multiplier
//! `omega_{h,k}`, the transformation of `f(tau) = theta(tau; 10 tau)/theta(3 tau; 10 tau)`
//! and the classification of cusps that carry a principal part.

mod multiplier;
mod suite;
mod theta;
mod transform;

pub use multiplier::{omega_at, omega_hk, EtaMultiplier, MultiplierSummary};
pub use suite::{
    growth_records, validation_suite, ValidationRecord, GROWTH_SET, GROWTH_SET_RECIPROCAL,
    LEADING_TERM_MAX_CONSTANT, SUITE_TOLERANCE, TRIPLE_PRODUCT_TOLERANCE,
};
pub use theta::{eta, nome, q_pochhammer, theta, theta_quasi_period_rhs, theta_triple_product};
pub use transform::{
    f_eval, f_series_sides, growth_classifier, growth_classifier_reciprocal, leading_term_constant,
    leading_term_ratio, theta_transform_rhs, transformation_check, transformation_sides, ThetaPhase,
};
