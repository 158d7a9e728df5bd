use rug::float::Round;

use crate::error::{domain, Result};
use crate::numerics::{ErrComplex, ErrReal};

/// Bound safety factor applied to tail estimates computed in `f64`.
const SLACK: f64 = 1.01;

fn upper_f64(x: &ErrReal) -> f64 {
    x.upper().to_f64_round(Round::Up)
}

fn lower_f64(x: &ErrReal) -> f64 {
    x.lower().to_f64_round(Round::Down)
}

fn require_upper_half(tau: &ErrComplex) -> Result<f64> {
    let y = lower_f64(&tau.im);
    if !(y > 0.0) {
        return Err(domain(format!("Im(tau) must be positive, got {:?}", tau.im)));
    }
    Ok(y)
}

/// `e^{i pi x}` for complex `x`.
pub(crate) fn exp_i_pi(x: &ErrComplex) -> ErrComplex {
    let pi = ErrReal::pi(x.prec());
    x.mul_i().scale(&pi).exp()
}

/// `e^{2 pi i tau}`.
pub fn nome(tau: &ErrComplex) -> ErrComplex {
    exp_i_pi(&tau.mul_i64(2))
}

/// Jacobi theta function
/// `theta(w; tau) = sum_{n in Z + 1/2} q^{n^2/2} e^{2 pi i n (w + 1/2)}`, `q = e^{2 pi i tau}`.
///
/// The sum runs over `|n| < M` where `M` is the first half-integer at which
/// both outer term ratios are at most 1/2 and the two geometric tails together
/// are below half of `target_err`; that tail bound is added to the radius.
pub fn theta(w: &ErrComplex, tau: &ErrComplex, target_err: f64) -> Result<ErrComplex> {
    if !(target_err > 0.0) {
        return Err(domain("target error must be positive"));
    }
    let y = require_upper_half(tau)?;
    let v = upper_f64(&w.im.abs()).max(0.0);
    let pi = std::f64::consts::PI;
    // log |term| at n = +-x (worst case over the enclosure of Im w)
    let log_term = |x: f64| -pi * y * x * x + 2.0 * pi * x * v;
    let log_ratio = |x: f64| -pi * y * (2.0 * x + 1.0) + 2.0 * pi * v;
    let mut m: i64 = 0;
    let tail = loop {
        let x = m as f64 + 0.5;
        if log_ratio(x) <= -std::f64::consts::LN_2 {
            let tail = 2.0 * 2.0 * log_term(x).exp() * SLACK;
            if tail <= target_err / 2.0 {
                break tail;
            }
        }
        m += 1;
        if m > 1_000_000 {
            return Err(domain("theta: Im(tau) too small for the requested accuracy"));
        }
    };
    let prec = w.prec().max(tau.prec());
    let w_half = w + &ErrComplex::real(ErrReal::from_ratio(1, 2, prec));
    let mut sum = ErrComplex::zero(prec);
    for i in -m..m {
        // n = (2i + 1) / 2
        let two_n = 2 * i + 1;
        let n_sq = ErrReal::from_ratio(two_n * two_n, 4, prec);
        let arg = tau.scale(&n_sq) + w_half.mul_i64(two_n);
        sum = sum + exp_i_pi(&arg);
    }
    Ok(sum.add_error(tail))
}

/// `(a; q)_inf = prod_{n >= 0} (1 - a q^n)` for `|q| < 1`, truncated once the
/// omitted factors change the product by less than half of `target_err`.
pub fn q_pochhammer(a: &ErrComplex, q: &ErrComplex, target_err: f64) -> Result<ErrComplex> {
    let qa = upper_f64(&q.abs());
    if !(qa < 1.0) {
        return Err(domain("q-Pochhammer symbol needs |q| < 1"));
    }
    let aa = upper_f64(&a.abs());
    let bound_all = (aa / (1.0 - qa)).exp();
    let prec = a.prec().max(q.prec());
    let one = ErrComplex::one(prec);
    let mut prod = one.clone();
    let mut aqn = a.clone();
    let mut n = 0i32;
    loop {
        // omitted factors n..: sum |a q^m| = aa qa^n / (1 - qa) =: s; |tail - 1| <= e^s - 1
        let s = aa * qa.powi(n) / (1.0 - qa);
        if s <= 0.5 {
            let err = bound_all * s.exp_m1() * SLACK;
            if err <= target_err / 2.0 || s == 0.0 {
                return Ok(prod.add_error(err));
            }
        }
        prod = prod.mul_ref(&(&one - &aqn));
        aqn = aqn.mul_ref(q);
        n += 1;
        if n > 1_000_000 {
            return Err(domain("q-Pochhammer symbol: |q| too close to 1"));
        }
    }
}

/// Dedekind eta `q^{1/24} prod_{n >= 1} (1 - q^n)`.
pub fn eta(tau: &ErrComplex, target_err: f64) -> Result<ErrComplex> {
    require_upper_half(tau)?;
    let q = nome(tau);
    let prod = q_pochhammer(&q, &q, target_err / 2.0)?;
    let pre = exp_i_pi(&tau.scale(&ErrReal::from_ratio(1, 12, tau.prec())));
    Ok(pre.mul_ref(&prod))
}

/// Right-hand side of the triple product:
/// `-i q^{1/8} zeta^{-1/2} (q;q)_inf (zeta;q)_inf (zeta^{-1} q;q)_inf`, `zeta = e^{2 pi i w}`.
pub fn theta_triple_product(w: &ErrComplex, tau: &ErrComplex, target_err: f64) -> Result<ErrComplex> {
    require_upper_half(tau)?;
    let prec = w.prec().max(tau.prec());
    let q = nome(tau);
    let zeta = exp_i_pi(&w.mul_i64(2));
    let zeta_inv = zeta.recip();
    let t = target_err / 8.0;
    let p1 = q_pochhammer(&q, &q, t)?;
    let p2 = q_pochhammer(&zeta, &q, t)?;
    let p3 = q_pochhammer(&zeta_inv.mul_ref(&q), &q, t)?;
    let q18 = exp_i_pi(&tau.scale(&ErrReal::from_ratio(1, 4, prec)));
    let zeta_m_half = exp_i_pi(&(-w));
    let minus_i = -ErrComplex::i(prec);
    Ok(minus_i.mul_ref(&q18).mul_ref(&zeta_m_half).mul_ref(&p1).mul_ref(&p2).mul_ref(&p3))
}

/// Right-hand side of quasi-periodicity:
/// `theta(w + l tau + m; tau) = (-1)^{l+m} q^{-l^2/2} zeta^{-l} theta(w; tau)`.
pub fn theta_quasi_period_rhs(
    w: &ErrComplex,
    tau: &ErrComplex,
    l: i64,
    m: i64,
    target_err: f64,
) -> Result<ErrComplex> {
    let base = theta(w, tau, target_err)?;
    // q^{-l^2/2} zeta^{-l} = e^{-i pi (l^2 tau + 2 l w)}
    let arg = tau.mul_i64(l * l) + w.mul_i64(2 * l);
    let factor = exp_i_pi(&(-arg));
    let sign = if (l + m).rem_euclid(2) == 0 { 1 } else { -1 };
    Ok(factor.mul_ref(&base).mul_i64(sign))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn c(re: f64, im: f64) -> ErrComplex {
        ErrComplex::from_f64(re, im, P)
    }

    #[test]
    fn theta_is_odd_in_w() {
        for tau in [c(0.2, 0.9), c(-0.3, 0.4)] {
            let z = theta(&c(0.0, 0.0), &tau, 1e-40).unwrap();
            assert!(z.abs_upper_f64() < 1e-35);
            let a = theta(&c(0.13, 0.07), &tau, 1e-40).unwrap();
            let b = theta(&c(-0.13, -0.07), &tau, 1e-40).unwrap();
            assert!((a + b).abs_upper_f64() < 1e-35);
        }
    }

    #[test]
    fn triple_product_at_reference_point() {
        let (w, tau) = (c(0.3, 0.1), c(0.2, 0.9));
        let a = theta(&w, &tau, 1e-40).unwrap();
        let b = theta_triple_product(&w, &tau, 1e-40).unwrap();
        assert!(a.dist_upper(&b) < 1e-30, "{a:?} vs {b:?}");
    }

    #[test]
    fn eta_at_i() {
        let e = eta(&c(0.0, 1.0), 1e-40).unwrap();
        // Gamma(1/4) / (2 pi^{3/4})
        assert!((e.re.to_f64() - 0.768_225_422_326_056_7).abs() < 1e-15);
        assert!(e.im.abs_upper().to_f64() < 1e-35);
    }

    #[test]
    fn eta_translation_and_inversion() {
        let tau = c(0.1, 0.8);
        let a = eta(&(&tau + &c(1.0, 0.0)), 1e-40).unwrap();
        let twelfth = ErrComplex::real(ErrReal::from_ratio(1, 12, P));
        let b = exp_i_pi(&twelfth).mul_ref(&eta(&tau, 1e-40).unwrap());
        assert!(a.dist_upper(&b) < 1e-30);

        let two_i = c(0.0, 2.0);
        let lhs = eta(&(-two_i.recip()), 1e-40).unwrap();
        let rhs = (-two_i.mul_i()).sqrt().mul_ref(&eta(&two_i, 1e-40).unwrap());
        assert!(lhs.dist_upper(&rhs) < 1e-30);
    }

    #[test]
    fn quasi_periodicity() {
        let (w, tau) = (c(0.21, -0.05), c(0.1, 1.1));
        for (l, m) in [(1, 0), (0, 1), (-1, 2), (2, -1)] {
            let shifted = &(&w + &tau.mul_i64(l)) + &c(m as f64, 0.0);
            let a = theta(&shifted, &tau, 1e-40).unwrap();
            let b = theta_quasi_period_rhs(&w, &tau, l, m, 1e-40).unwrap();
            assert!(a.dist_upper(&b) < 1e-30, "l={l} m={m}");
        }
    }

    #[test]
    fn lower_half_plane_rejected() {
        assert!(theta(&c(0.1, 0.0), &c(0.0, -1.0), 1e-20).is_err());
        assert!(eta(&c(0.0, 0.0), 1e-20).is_err());
    }
}
