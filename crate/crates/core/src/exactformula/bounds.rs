use rug::float::Round;
use serde::Serialize;

use super::terms::{bessel_at_prec, main_term, shifted_index};
use crate::arithmetic::divisor_counts_upto;
use crate::error::{domain, Result};
use crate::numerics::{inv_pow_3_2, zeta_3_2, ErrReal};
use crate::Delta;

/// `zeta(3/2)^2` to roughly `prec` bits.
pub(crate) fn zeta_sq(prec: u32) -> Result<ErrReal> {
    let target = 2f64.powi(-(prec as i32 - 8)).max(1e-300);
    Ok(zeta_3_2(target)?.with_prec(prec).sqr())
}

fn upper(x: &ErrReal) -> f64 {
    x.upper().to_f64_round(Round::Up)
}

/// Smallest `K` such that every Bessel argument with `k > K` is below 1:
/// `K >= (4 pi/5) sqrt(3M)`.
pub fn tail_min_k(delta: Delta, n: u64) -> Result<u64> {
    let m = shifted_index(delta, n)? as f64;
    // f64 error is far below the one unit of slack added here
    Ok((4.0 * std::f64::consts::PI / 5.0 * (3.0 * m).sqrt()).ceil() as u64 + 1)
}

/// `sum_{m <= x} d(m) m^{-3/2}` for `x = 0..=len-1`, as prefix sums.
fn divisor_prefix(limit: usize, prec: u32) -> Vec<ErrReal> {
    let d = divisor_counts_upto(limit);
    let mut out = Vec::with_capacity(limit + 1);
    let mut acc = ErrReal::zero(prec);
    out.push(acc.clone());
    for m in 1..=limit {
        acc = acc + inv_pow_3_2(m as u64, prec).mul_i64(d[m] as i64);
        out.push(acc.clone());
    }
    out
}

/// Rigorous tail bound evaluator for one `n`, reusable across cutoffs.
pub(crate) struct TailBounder {
    zeta_sq: ErrReal,
    c5: ErrReal,
    c10: ErrReal,
    prefix: Vec<ErrReal>,
    prec: u32,
}

impl TailBounder {
    pub fn new(k_max: u64, prec: u32) -> Result<Self> {
        let pi2 = ErrReal::pi(prec).sqr();
        let c5 = pi2.mul_i64(32).div_i64(125);
        let c10 = pi2.mul_i64(108).div_i64(125) * ErrReal::from_i64(6, prec).sqrt();
        let prefix = divisor_prefix((k_max / 5) as usize, prec);
        Ok(TailBounder { zeta_sq: zeta_sq(prec)?, c5, c10, prefix, prec })
    }

    /// `32 pi^2/125 [zeta(3/2)^2 - S(K/5)] + 108 sqrt(6) pi^2/125 [zeta(3/2)^2 - S(K/10)]`
    /// with `S(x) = sum_{m <= x} d(m) m^{-3/2}`.
    pub fn bound(&self, k: u64) -> f64 {
        let s5 = self.prefix_at((k / 5) as usize);
        let s10 = self.prefix_at((k / 10) as usize);
        let t = &self.c5 * &(&self.zeta_sq - &s5) + &self.c10 * &(&self.zeta_sq - &s10);
        upper(&t).max(0.0)
    }

    fn prefix_at(&self, x: usize) -> ErrReal {
        match self.prefix.get(x) {
            Some(v) => v.clone(),
            None => divisor_prefix(x, self.prec).pop().expect("non-empty"),
        }
    }
}

/// Upper bound for `|sum_{k > K} term_k(delta, n, k)|`.
///
/// Each tail term is bounded by `(4 pi^2/5)(d-4) |A_k(n)| / k^2` using
/// `I_1(x) <= x` on `[0, 1)`, then `|A_k| <= 4 d(k) sqrt(k/5)` (`d = 5`) and
/// `|A_k| <= 2 d(10k) sqrt(3k/5)` (`d = 10`), with `d(5m) <= 2 d(m)` and
/// `d(100m) <= 9 d(m)`. The remaining divisor series are
/// `zeta(3/2)^2` minus explicit partial sums.
pub fn tail_bound_op(delta: Delta, n: u64, k: u64, prec: u32) -> Result<f64> {
    let k_min = tail_min_k(delta, n)?;
    if k < k_min {
        return Err(domain(format!(
            "tail bound needs K >= {k_min} so that all tail Bessel arguments are below 1, got K={k}"
        )));
    }
    Ok(TailBounder::new(k, prec)?.bound(k))
}

/// `(sqrt(2) pi / sqrt(M)) (32 pi^2 zeta^2/125 + (64 pi^2/125) I_1((2 pi/25) sqrt(2M))
///  + 108 sqrt(6) pi^2 zeta^2/125 + (216 sqrt(6) pi^2/125) I_1((pi/25) sqrt(3M)))`,
/// an upper bound for the error term `|c_delta(n) - M_delta(n)|`.
pub fn error_bound_total(delta: Delta, n: u64, prec: u32) -> Result<ErrReal> {
    let n_min = match delta {
        Delta::Plus => 8,
        Delta::Minus => 12,
    };
    if n < n_min {
        return Err(domain(format!("error bound assembled for n >= {n_min}, got n={n}")));
    }
    let m = ErrReal::from_i64(shifted_index(delta, n)?, prec);
    let pi = ErrReal::pi(prec);
    let pi2 = pi.sqr();
    let sqrt6 = ErrReal::from_i64(6, prec).sqrt();
    let z2 = zeta_sq(prec)?;
    let i1_a = bessel_at_prec(&(pi.mul_i64(2) * m.mul_i64(2).sqrt()).div_i64(25), prec)?;
    let i1_b = bessel_at_prec(&(&pi * &m.mul_i64(3).sqrt()).div_i64(25), prec)?;
    let bracket = pi2.mul_i64(32).div_i64(125) * &z2
        + pi2.mul_i64(64).div_i64(125) * i1_a
        + pi2.mul_i64(108).div_i64(125) * &sqrt6 * &z2
        + pi2.mul_i64(216).div_i64(125) * &sqrt6 * i1_b;
    let pre = ErrReal::from_i64(2, prec).sqrt() * &pi / m.sqrt();
    Ok(pre * bracket)
}

/// The main term next to the bound for everything else.
#[derive(Debug, Clone, Serialize)]
pub struct MainErrorSplit {
    pub delta: Delta,
    pub n: u64,
    #[serde(skip)]
    pub main: ErrReal,
    #[serde(rename = "main")]
    pub main_value: f64,
    pub error_bound: f64,
    /// `error_bound < |main|` with the error of `main` accounted for.
    pub conclusive: bool,
}

pub fn main_error_split(delta: Delta, n: u64, prec: u32) -> Result<MainErrorSplit> {
    let main = main_term(delta, n, prec)?;
    let bound = error_bound_total(delta, n, prec)?;
    let error_bound = upper(&bound);
    let main_abs_lower = main.abs().lower().to_f64_round(Round::Down);
    Ok(MainErrorSplit {
        delta,
        n,
        main_value: main.to_f64(),
        main,
        error_bound,
        conclusive: error_bound < main_abs_lower,
    })
}

/// Which shifted index enters the closed-form threshold inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdForm {
    /// `5n + 8 delta`, the form in which the inequality is usually quoted.
    Published,
    /// `5n + 3 delta`, the index of the convergent exact formula.
    Corrected,
}

impl ThresholdForm {
    pub fn index(self, delta: Delta, n: u64) -> i64 {
        let shift = match self {
            ThresholdForm::Published => 8,
            ThresholdForm::Corrected => 3,
        };
        5 * n as i64 + shift * delta.sign()
    }
}

/// Left-hand side of the closed-form inequality `error_bound_total < |M_delta(n)|`
/// after dividing through by the main term's lower bound:
///
/// `2 sqrt(2) M^{3/4} / (3^{1/4} sqrt(pi) |cos(c pi/25)|) e^{-(2 pi/25) sqrt(3M)}
///  ((8 + 27 sqrt 6) 4 pi^2 zeta(3/2)^2/125 + 32 2^{3/4} pi e^{(2 pi/25) sqrt(2M)}/(25 M^{1/4})
///  + 432 3^{1/4} pi e^{(pi/25) sqrt(3M)}/(25 M^{1/4}))`
///
/// with `c = 13` for `delta = 1` and `c = 14` for `delta = -1`.
pub fn threshold_lhs_with(delta: Delta, n: u64, form: ThresholdForm, prec: u32) -> Result<ErrReal> {
    let n_min = match delta {
        Delta::Plus => 8,
        Delta::Minus => 12,
    };
    if n < n_min {
        return Err(domain(format!("threshold inequality stated for n >= {n_min}, got n={n}")));
    }
    let m = ErrReal::from_i64(form.index(delta, n), prec);
    let pi = ErrReal::pi(prec);
    let c = match delta {
        Delta::Plus => 13,
        Delta::Minus => 14,
    };
    let cos = pi.mul_i64(c).div_i64(25).cos().abs();
    let m14 = m.pow_ratio(1, 4);
    let m34 = m.pow_ratio(3, 4);
    let sqrt6 = ErrReal::from_i64(6, prec).sqrt();
    let r3_14 = ErrReal::from_i64(3, prec).pow_ratio(1, 4);
    let r2_34 = ErrReal::from_i64(2, prec).pow_ratio(3, 4);
    let e_main = (-(pi.mul_i64(2) * m.mul_i64(3).sqrt()).div_i64(25)).exp();
    let e_a = ((pi.mul_i64(2) * m.mul_i64(2).sqrt()).div_i64(25)).exp();
    let e_b = ((&pi * &m.mul_i64(3).sqrt()).div_i64(25)).exp();

    let t0 = (ErrReal::from_i64(8, prec) + sqrt6.mul_i64(27)) * pi.sqr().mul_i64(4) * zeta_sq(prec)?;
    let t0 = t0.div_i64(125);
    let t1 = (r2_34.mul_i64(32) * &pi * e_a) / m14.mul_i64(25);
    let t2 = (r3_14.mul_i64(432) * &pi * e_b) / m14.mul_i64(25);
    let pre = ErrReal::from_i64(2, prec).sqrt().mul_i64(2) * m34 / (&r3_14 * &pi.sqrt() * cos);
    Ok(pre * e_main * (t0 + t1 + t2))
}

/// [`threshold_lhs_with`] in the published form.
pub fn threshold_lhs(delta: Delta, n: u64, prec: u32) -> Result<ErrReal> {
    threshold_lhs_with(delta, n, ThresholdForm::Published, prec)
}

/// First `n` in `from..=to` at which the closed-form left-hand side is
/// certainly below 1.
pub fn threshold_crossover(delta: Delta, form: ThresholdForm, from: u64, to: u64, prec: u32) -> Result<Option<u64>> {
    let one = ErrReal::one(prec);
    for n in from..=to {
        if threshold_lhs_with(delta, n, form, prec)?.certainly_lt(&one) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}
