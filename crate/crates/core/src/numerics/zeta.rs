use rug::{Float, Integer, Rational};

use super::ErrReal;
use crate::error::{domain, Result};

/// Bernoulli numbers `B_0 ..= B_m` (with `B_1 = -1/2`).
pub fn bernoulli_numbers(m: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(m + 1);
    b.push(Rational::from(1));
    for n in 1..=m {
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (k, bk) in b.iter().enumerate() {
            acc += Rational::from(&binom * bk.numer()) / bk.denom();
            binom = binom * (n + 1 - k) / (k + 1);
        }
        b.push(-acc / (n as u32 + 1));
    }
    b
}

fn rational(r: &Rational, prec: u32) -> ErrReal {
    ErrReal::from_integer(r.numer(), prec) / ErrReal::from_integer(r.denom(), prec)
}

/// `n^{-3/2}` as an enclosure.
pub(crate) fn inv_pow_3_2(n: u64, prec: u32) -> ErrReal {
    let x = ErrReal::from_integer(&Integer::from(n), prec);
    ErrReal::one(prec) / (x.sqrt() * &x)
}

/// `zeta(3/2)` by Euler-Maclaurin summation with exact Bernoulli numbers.
///
/// With head length `N` and `M` correction terms the remainder obeys
/// `|R| <= |B_2M| / (2M)! * (s)_2M * N^(1-s-2M) / (s+2M-1)`. `N` grows until
/// that bound is at most half of `target_err`.
pub fn zeta_3_2(target_err: f64) -> Result<ErrReal> {
    if !(target_err > 0.0) {
        return Err(domain(format!("target error must be positive, got {target_err}")));
    }
    let bits = (-target_err.log2()).max(0.0) as u32;
    let prec = (bits + 32).max(64);
    let s = Rational::from((3, 2));
    let mut n_head = 8u64;
    loop {
        let m = n_head as usize;
        let bern = bernoulli_numbers(2 * m);
        let rem = remainder_bound(&s, &bern[2 * m], 2 * m, n_head);
        if rem <= target_err / 2.0 {
            let v = euler_maclaurin(&s, &bern, m, n_head, prec);
            let v = ErrReal::from_parts(v.mid().clone(), Float::with_val(64, v.rad()) + rem);
            if v.rad_f64() <= target_err {
                return Ok(v);
            }
        }
        n_head *= 2;
    }
}

/// `(s)_j = s (s+1) ... (s+j-1)` over the rationals.
fn rising(s: &Rational, j: usize) -> Rational {
    (0..j).fold(Rational::from(1), |acc, i| acc * (s.clone() + Integer::from(i)))
}

fn factorial(j: usize) -> Integer {
    Integer::from(Integer::factorial(j as u32))
}

fn remainder_bound(s: &Rational, b2m: &Rational, two_m: usize, n: u64) -> f64 {
    // f64 is ample here: the bound only steers the choice of N and is padded.
    let coeff = Rational::from(b2m.clone().abs() * rising(s, two_m)) / factorial(two_m);
    let expo = 1.0 - s.to_f64() - two_m as f64;
    let tail = (n as f64).powf(expo) / (s.to_f64() + two_m as f64 - 1.0);
    coeff.to_f64() * tail * 1.01
}

fn euler_maclaurin(s: &Rational, bern: &[Rational], m: usize, n: u64, prec: u32) -> ErrReal {
    let mut sum = ErrReal::zero(prec);
    for k in 1..n {
        sum = sum + inv_pow_3_2(k, prec);
    }
    let nn = ErrReal::from_integer(&Integer::from(n), prec);
    let n_pow_s = nn.sqrt() * &nn;
    // N^{1-s}/(s-1) = 2 / sqrt(N)
    sum = sum + ErrReal::from_i64(2, prec) / nn.sqrt();
    sum = sum + (ErrReal::one(prec) / &n_pow_s).div_i64(2);
    for j in 1..m {
        let coeff = Rational::from(&bern[2 * j] * rising(s, 2 * j - 1)) / factorial(2 * j);
        // N^{-s-2j+1}
        let pow = ErrReal::one(prec) / (&n_pow_s * nn.powi(2 * j as u32 - 1));
        sum = sum + rational(&coeff, prec) * pow;
    }
    sum
}

/// Integral-comparison bracket for `zeta(3/2)`:
/// `S_N + 2/sqrt(N+1) <= zeta(3/2) <= S_N + 2/sqrt(N)` with `S_N` the
/// partial sum up to `N`. Returns the bracket as an enclosure. Converges like
/// `N^{-3/2}`, so it serves as an independent check, not an evaluator.
pub fn zeta_3_2_bracket(n: u64, prec: u32) -> ErrReal {
    let mut sum = ErrReal::zero(prec);
    for k in 1..=n {
        sum = sum + inv_pow_3_2(k, prec);
    }
    let two = ErrReal::from_i64(2, prec);
    let lo = &sum + &two / ErrReal::from_i64(n as i64 + 1, prec).sqrt();
    let hi = &sum + &two / ErrReal::from_i64(n as i64, prec).sqrt();
    let mid = (&lo + &hi).div_i64(2);
    let half_width = (&hi - &lo).div_i64(2);
    let rad = Float::with_val(64, half_width.abs_upper()) + mid.rad_f64();
    ErrReal::from_parts(mid.mid().clone(), rad)
}
