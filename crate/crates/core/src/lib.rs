//! Verification toolkit for the sign pattern of the Fourier coefficients of
//!
//! ```text
//! Q10(q) = (q, q^9; q^10)_inf / (q^3, q^7; q^10)_inf
//! ```
//!
//! and of its reciprocal. Coefficients are computed two ways: exactly, by
//! truncated power-series arithmetic over big integers ([`qseries`]), and
//! analytically, through a Kloosterman/Bessel exact formula
//! ([`exactformula`]). Every analytic quantity is carried as an [`ErrReal`]
//! with a rigorous radius so that sign claims and bound checks never rest on
//! an unqualified floating-point comparison.
//!
//! The [`verifier`] module ties everything together into reproducible
//! reports.

pub mod arithmetic;
mod delta;
mod error;
pub mod exactformula;
pub mod modularcheck;
pub mod numerics;
pub mod qseries;
pub mod verifier;

pub use delta::Delta;
pub use error::{Error, Result};
pub use numerics::{ErrComplex, ErrReal, Sign};
