//! Error-tracked arbitrary-precision arithmetic and the special values used by
//! the analytic side: `I_1`, `zeta(3/2)`, and inequality checks on `I_1`.

mod bessel;
mod complex;
mod errreal;
mod soundness;
mod zeta;

pub use bessel::{
    bessel_bound_checks, bessel_i1, bessel_i1_quadrature, BesselBoundChecks, BoundCheck,
};
pub(crate) use bessel::next_up;
pub use complex::ErrComplex;
pub use errreal::{ErrReal, Sign};
pub use soundness::{
    bessel_bound_grids, precision_containment, BesselBound, Containment, GridPoint, CONTAINMENT_BESSEL_MAX,
};
pub use zeta::{bernoulli_numbers, zeta_3_2, zeta_3_2_bracket};
pub(crate) use zeta::inv_pow_3_2;
