use rug::Float;
use serde::Serialize;

use super::{ErrReal, Sign};
use crate::error::{domain, Error, Result};

const MAX_PRECISION_DOUBLINGS: u32 = 6;

/// `I_1(x)` for `x >= 0` from the ascending series
/// `sum_k (x/2)^(2k+1) / (k! (k+1)!)`.
///
/// The result's radius is at most `target_err`. The working precision starts
/// at the precision of `x` and doubles until the target is met; if the
/// radius of `x` alone prevents it, `TargetNotMet` is returned.
pub fn bessel_i1(x: &ErrReal, target_err: f64) -> Result<ErrReal> {
    if !(target_err > 0.0) {
        return Err(domain(format!("target error must be positive, got {target_err}")));
    }
    if x.sign() == Sign::Negative || !x.is_finite() {
        return Err(domain(format!("I1 requires x >= 0, got {x:?}")));
    }
    let mut prec = x.prec().max(64);
    let mut best = f64::INFINITY;
    for _ in 0..=MAX_PRECISION_DOUBLINGS {
        let v = i1_series(&x.with_prec(prec), target_err / 4.0);
        let err = v.rad_f64();
        if err <= target_err {
            return Ok(v);
        }
        best = best.min(err);
        prec *= 2;
    }
    Err(Error::TargetNotMet { target: target_err, achieved: best })
}

fn i1_series(x: &ErrReal, tail_target: f64) -> ErrReal {
    let prec = x.prec();
    let half = x.div_i64(2);
    let sq = half.sqr();
    let mut term = half.clone();
    let mut sum = half;
    let mut k: i64 = 0;
    loop {
        // ratio between consecutive terms: term_{k+1} = term_k * sq / ((k+1)(k+2))
        let denom = (k + 1) * (k + 2);
        let ratio_up = sq.upper().to_f64_round(rug::float::Round::Up) / denom as f64;
        if ratio_up <= 0.5 {
            let t_up = term.abs_upper().to_f64_round(rug::float::Round::Up);
            let tail = t_up * ratio_up / (1.0 - ratio_up);
            if tail <= tail_target || tail == 0.0 || k > 100_000 {
                let widened = ErrReal::from_parts(
                    sum.mid().clone(),
                    Float::with_val(64, sum.rad()) + next_up(tail),
                );
                return widened.with_prec(prec);
            }
        }
        term = (&term * &sq).div_i64(denom);
        sum = &sum + &term;
        k += 1;
    }
}

/// Slightly enlarges a non-negative f64 to absorb its own rounding.
pub(crate) fn next_up(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v * (1.0 + 4.0 * f64::EPSILON) + f64::MIN_POSITIVE
    }
}

/// `I_1(x)` from `(x/pi) int_{-1}^{1} sqrt(1-u^2) e^{xu} du` by the midpoint
/// rule on `points` nodes. Plain floating point; a low-accuracy independent
/// cross-check of [`bessel_i1`], not an evaluator.
pub fn bessel_i1_quadrature(x: f64, points: usize) -> f64 {
    let h = 2.0 / points as f64;
    let s: f64 = (0..points)
        .map(|i| {
            let u = -1.0 + (i as f64 + 0.5) * h;
            (1.0 - u * u).sqrt() * (x * u).exp()
        })
        .sum();
    x / std::f64::consts::PI * s * h
}

/// Outcome of one inequality check. `vacuous` marks an argument outside the
/// range where the inequality is asserted; such checks count as holding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub holds: bool,
    pub vacuous: bool,
}

impl BoundCheck {
    fn vacuous() -> Self {
        BoundCheck { holds: true, vacuous: true }
    }

    fn checked(holds: bool) -> Self {
        BoundCheck { holds, vacuous: false }
    }
}

/// The three classical bounds on `I_1`:
/// `I_1(x) <= x` on `[0, 1)`, `I_1(x) <= sqrt(2/(pi x)) e^x` on `[1, inf)`,
/// `I_1(x) >= e^x / (4 sqrt x)` on `[3, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BesselBoundChecks {
    pub small_arg: BoundCheck,
    pub upper: BoundCheck,
    pub lower: BoundCheck,
}

impl BesselBoundChecks {
    pub fn all_hold(&self) -> bool {
        self.small_arg.holds && self.upper.holds && self.lower.holds
    }
}

pub fn bessel_bound_checks(x: &ErrReal) -> Result<BesselBoundChecks> {
    let prec = x.prec();
    let i1 = bessel_i1(x, 1e-20 * x.to_f64().exp().max(1.0))?;
    let lo = x.lower();
    let hi = x.upper();

    let small_arg = if lo >= 0 && hi < 1 {
        BoundCheck::checked(i1.le_within(x))
    } else {
        BoundCheck::vacuous()
    };

    let upper = if lo >= 1 {
        let pi = ErrReal::pi(prec);
        let bound = (ErrReal::from_i64(2, prec) / (&pi * x)).sqrt() * x.exp();
        BoundCheck::checked(i1.le_within(&bound))
    } else {
        BoundCheck::vacuous()
    };

    let lower = if lo >= 3 {
        let bound = x.exp() / x.sqrt().mul_i64(4);
        BoundCheck::checked(bound.le_within(&i1))
    } else {
        BoundCheck::vacuous()
    };

    Ok(BesselBoundChecks { small_arg, upper, lower })
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    fn i1(num: i64, den: i64) -> ErrReal {
        bessel_i1(&ErrReal::from_ratio(num, den, P), 1e-30).unwrap()
    }

    #[test]
    fn zero_maps_to_zero() {
        let v = bessel_i1(&ErrReal::zero(P), 1e-30).unwrap();
        assert_eq!(v.to_f64(), 0.0);
        assert!(v.rad_f64() == 0.0);
    }

    #[test]
    fn reference_values() {
        // Ascending series summed independently in high-precision decimal.
        let cases = [
            ((2, 1), 1.590_636_854_637_329),
            ((1, 2), 0.257_894_305_390_896_3),
            ((1, 1), 0.565_159_103_992_485),
            ((3, 1), 3.953_370_217_402_609),
        ];
        for ((num, den), want) in cases {
            let got = i1(num, den);
            assert!((got.to_f64() - want).abs() < 1e-14, "I1({num}/{den}) = {got:?}");
            assert!(got.rad_f64() <= 1e-30);
        }
    }

    #[test]
    fn large_argument_needs_precision_escalation() {
        let x = ErrReal::from_i64(60, 64);
        let v = bessel_i1(&x, 1e-6).unwrap();
        assert!(v.rad_f64() <= 1e-6);
        // I1(60) ~ 5.84e24
        assert!((v.to_f64() / 5.844_751_588_390_468e24 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_target() {
        assert!(bessel_i1(&ErrReal::one(P), 0.0).is_err());
        assert!(bessel_i1(&ErrReal::from_i64(-1, P), 1e-10).is_err());
    }

    #[test]
    fn quadrature_agrees_roughly() {
        for (num, den) in [(1, 2), (1, 1), (2, 1), (3, 1)] {
            let exact = i1(num, den).to_f64();
            let quad = bessel_i1_quadrature(num as f64 / den as f64, 10);
            assert!((quad / exact - 1.0).abs() < 0.05, "{num}/{den}: {quad} vs {exact}");
        }
    }

    #[test]
    fn bound_checks_at_examples() {
        let half = bessel_bound_checks(&ErrReal::from_ratio(1, 2, P)).unwrap();
        assert!(!half.small_arg.vacuous && half.small_arg.holds);
        assert!(half.upper.vacuous && half.lower.vacuous);

        let one = bessel_bound_checks(&ErrReal::one(P)).unwrap();
        assert!(one.small_arg.vacuous);
        assert!(!one.upper.vacuous && one.upper.holds);

        let three = bessel_bound_checks(&ErrReal::from_i64(3, P)).unwrap();
        assert!(!three.lower.vacuous && three.lower.holds);
        assert!(three.all_hold());
    }
}
