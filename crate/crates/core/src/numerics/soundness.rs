use std::cmp::Ordering;

use rug::float::Round;
use rug::{Float, Rational};
use serde::Serialize;

use super::{bessel_bound_checks, bessel_i1, ErrReal};
use crate::error::{domain, Result};

/// Largest argument passed to `I_1` by [`precision_containment`].
pub const CONTAINMENT_BESSEL_MAX: f64 = 60.0;

#[derive(Debug, Clone, Serialize)]
pub struct Containment {
    pub op: &'static str,
    /// The high-precision midpoint lies inside the low-precision enclosure.
    pub contained: bool,
}

fn contains(low: &ErrReal, high: &ErrReal) -> bool {
    if !low.is_finite() {
        return true;
    }
    let d = ErrReal::exact(high.mid().clone()) - ErrReal::exact(low.mid().clone());
    d.abs_upper() <= *low.rad()
}

fn panel(a: &ErrReal, b: &ErrReal) -> Result<Vec<(&'static str, ErrReal)>> {
    let prec = a.prec();
    let abs_a = a.abs();
    let mut out = vec![
        ("add", a + b),
        ("sub", a - b),
        ("mul", a * b),
        ("div", a / b),
        ("sqrt", abs_a.sqrt()),
        ("exp", a.exp()),
        ("ln", abs_a.ln()),
        ("sin", a.sin()),
        ("cos", a.cos()),
        ("pow_3_2", abs_a.pow_ratio(3, 2)),
        ("poly", (a.sqr() - b.mul_i64(3)) * (a + &ErrReal::one(prec)).powi(3)),
    ];
    if abs_a.to_f64() <= CONTAINMENT_BESSEL_MAX {
        let target = (abs_a.to_f64().exp() * 0.5f64.powi(prec as i32 / 2)).max(f64::MIN_POSITIVE);
        out.push(("bessel_i1", bessel_i1(&abs_a, target)?));
    }
    Ok(out)
}

/// Evaluates a fixed panel of operations on the rationals `a` and `b` at
/// `prec` and at `4 prec` bits and reports, per operation, whether the
/// low-precision enclosure contains the high-precision midpoint.
pub fn precision_containment(a: (i64, i64), b: (i64, i64), prec: u32) -> Result<Vec<Containment>> {
    if a.1 == 0 || b.1 == 0 || a.0 == 0 || b.0 == 0 {
        return Err(domain("containment inputs need nonzero numerators and denominators"));
    }
    let at = |p: u32| panel(&ErrReal::from_ratio(a.0, a.1, p), &ErrReal::from_ratio(b.0, b.1, p));
    let low = at(prec)?;
    let high = at(4 * prec)?;
    Ok(low.iter().zip(&high).map(|((op, l), (_, h))| Containment { op, contained: contains(l, h) }).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BesselBound {
    /// `I_1(x) <= x` for `0 <= x < 1`.
    SmallArgument,
    /// `I_1(x) <= sqrt(2/(pi x)) e^x` for `x >= 1`.
    Upper,
    /// `I_1(x) >= e^x / (4 sqrt x)` for `x >= 3`.
    Lower,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridPoint {
    pub bound: BesselBound,
    pub x: f64,
    pub holds: bool,
}

/// `num / den` with zero radius when it is representable at `prec`.
fn grid_value(num: i64, den: i64, prec: u32) -> ErrReal {
    let (f, ord) = Float::with_val_round(prec, Rational::from((num, den)), Round::Nearest);
    if ord == Ordering::Equal {
        ErrReal::exact(f)
    } else {
        ErrReal::from_ratio(num, den, prec)
    }
}

/// `(bound, first, last, step)` as hundredths.
const GRIDS: [(BesselBound, i64, i64, i64); 3] =
    [(BesselBound::SmallArgument, 1, 99, 1), (BesselBound::Upper, 100, 5000, 50), (BesselBound::Lower, 300, 6000, 50)];

/// Each `I_1` bound on its grid: `0.01..=0.99` step 0.01, `1..=50` step 0.5
/// and `3..=60` step 0.5. A point where the bound is vacuous counts as a
/// violation.
pub fn bessel_bound_grids(prec: u32) -> Result<Vec<GridPoint>> {
    let mut out = Vec::new();
    for (bound, first, last, step) in GRIDS {
        for i in (first..=last).step_by(step as usize) {
            let c = bessel_bound_checks(&grid_value(i, 100, prec))?;
            let check = match bound {
                BesselBound::SmallArgument => c.small_arg,
                BesselBound::Upper => c.upper,
                BesselBound::Lower => c.lower,
            };
            out.push(GridPoint { bound, x: i as f64 / 100.0, holds: check.holds && !check.vacuous });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panel_is_contained_at_small_inputs() {
        let r = precision_containment((7, 3), (-5, 11), 64).unwrap();
        assert_eq!(r.len(), 12);
        assert!(r.iter().all(|c| c.contained), "{r:?}");
    }

    #[test]
    fn bessel_skipped_for_large_arguments() {
        let r = precision_containment((1000, 1), (1, 2), 64).unwrap();
        assert!(r.iter().all(|c| c.op != "bessel_i1"));
    }

    #[test]
    fn rejects_zero_inputs() {
        assert!(precision_containment((0, 1), (1, 1), 64).is_err());
        assert!(precision_containment((1, 0), (1, 1), 64).is_err());
    }

    #[test]
    fn grid_sizes() {
        let g = bessel_bound_grids(128).unwrap();
        let count = |b| g.iter().filter(|p| p.bound == b).count();
        assert_eq!(count(BesselBound::SmallArgument), 99);
        assert_eq!(count(BesselBound::Upper), 99);
        assert_eq!(count(BesselBound::Lower), 115);
        assert!(g.iter().all(|p| p.holds));
    }
}
