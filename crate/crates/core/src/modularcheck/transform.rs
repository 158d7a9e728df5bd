use serde::Serialize;

use super::theta::{exp_i_pi, nome, theta};
use crate::arithmetic::{alpha, decompose, gcd};
use crate::error::{domain, Error, Result};
use crate::numerics::{ErrComplex, ErrReal};
use crate::qseries::q10_series;
use crate::Delta;

fn rat(num: i64, den: i64, prec: u32) -> ErrComplex {
    ErrComplex::real(ErrReal::from_ratio(num, den, prec))
}

fn checked_quotient(num: ErrComplex, den: ErrComplex, at: &ErrComplex) -> Result<ErrComplex> {
    if den.contains_zero() {
        return Err(Error::Pole(format!("{at:?}")));
    }
    Ok(num.div_ref(&den))
}

/// `f(tau) = theta(tau; 10 tau) / theta(3 tau; 10 tau)`.
pub fn f_eval(tau: &ErrComplex, target_err: f64) -> Result<ErrComplex> {
    let ten_tau = tau.mul_i64(10);
    let num = theta(tau, &ten_tau, target_err)?;
    let den = theta(&tau.mul_i64(3), &ten_tau, target_err)?;
    checked_quotient(num, den, tau)
}

/// `q^{-1} f(tau)` and the truncated expansion `sum_{n < order} c_1(n) q^n`.
pub fn f_series_sides(tau: &ErrComplex, order: usize, target_err: f64) -> Result<(ErrComplex, ErrComplex)> {
    let q = nome(tau);
    let lhs = f_eval(tau, target_err)?.div_ref(&q);
    let prec = tau.prec();
    let series = q10_series(Delta::Plus, order);
    let mut sum = ErrComplex::zero(prec);
    let mut qn = ErrComplex::one(prec);
    for c in series.coeffs() {
        sum = sum + qn.scale(&ErrReal::from_integer(c, prec));
        qn = qn.mul_ref(&q);
    }
    Ok((lhs, sum))
}

/// Which eighth root of unity multiplies the theta transformation law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaPhase {
    /// `e^{3 pi i/4}`, as printed in the source statement; it is off by a factor `-i`.
    Published,
    /// `e^{-3 pi i/4}`, the value that makes the identity hold.
    Corrected,
}

impl ThetaPhase {
    fn eighths(self) -> i64 {
        match self {
            ThetaPhase::Published => 3,
            ThetaPhase::Corrected => -3,
        }
    }
}

/// Right-hand side of the theta transformation law
///
/// `theta(w; (h + iz)/k) = e^{pi i (h - h')/(4k)} phase omega_{h,k}^{-3} sqrt(i/z)
///  e^{-pi k w^2 / z} theta(iw/z; (h' + i/z)/k)`.
#[allow(clippy::too_many_arguments)]
pub fn theta_transform_rhs(
    w: &ErrComplex,
    h: i64,
    k: u64,
    hprime: i64,
    z: &ErrComplex,
    omega: &ErrComplex,
    phase: ThetaPhase,
    target_err: f64,
) -> Result<ErrComplex> {
    let prec = w.prec().max(z.prec());
    let k_i = k as i64;
    let i = ErrComplex::i(prec);
    let tau_r = (&rat(hprime, 1, prec) + &i.div_ref(z)).div_ref(&rat(k_i, 1, prec));
    let inner = theta(&w.mul_i().div_ref(z), &tau_r, target_err)?;
    let e1 = exp_i_pi(&rat(h - hprime, 4 * k_i, prec));
    let e2 = exp_i_pi(&rat(phase.eighths(), 4, prec));
    let om3 = omega.powi(3).recip();
    let root = i.div_ref(z).sqrt();
    let pi = ErrReal::pi(prec);
    let gauss = (-(w.mul_ref(w).scale(&pi).mul_i64(k_i).div_ref(z))).exp();
    Ok(e1.mul_ref(&e2).mul_ref(&om3).mul_ref(&root).mul_ref(&gauss).mul_ref(&inner))
}

/// `theta(a tau + b; tau) / (-i e^{-pi i b} q^{1/8 - a/2})` at `tau = it`.
pub fn leading_term_ratio(a: &ErrReal, b: &ErrReal, t: &ErrReal, target_err: f64) -> Result<ErrComplex> {
    let prec = t.prec();
    let tau = ErrComplex::new(ErrReal::zero(prec), t.clone());
    let w = &tau.scale(a) + &ErrComplex::real(b.clone());
    let th = theta(&w, &tau, target_err)?;
    // -i e^{-pi i b} q^{1/8 - a/2} = -i e^{i pi (2 tau (1/8 - a/2) - b)}
    let expo = &tau.scale(&(ErrReal::from_ratio(1, 4, prec) - a)) - &ErrComplex::real(b.clone());
    let lead = exp_i_pi(&expo).mul_i().mul_i64(-1);
    Ok(th.div_ref(&lead))
}

/// Smallest `C` with `|ratio - 1| <= C |q|^{min(a, 1 - a)}` over the sampled `t`,
/// where `ratio` is [`leading_term_ratio`] and `|q| = e^{-2 pi t}`.
pub fn leading_term_constant(a: f64, b: f64, ts: &[f64], prec: u32) -> Result<f64> {
    if !(0.0 < a && a < 1.0) {
        return Err(domain(format!("need 0 < a < 1, got {a}")));
    }
    let e = a.min(1.0 - a);
    let mut c: f64 = 0.0;
    for &t in ts {
        let tt = ErrReal::from_f64(t, prec);
        let r = leading_term_ratio(&ErrReal::from_f64(a, prec), &ErrReal::from_f64(b, prec), &tt, 1e-40)?;
        let dev = r.dist_upper(&ErrComplex::one(prec));
        let scale = (-2.0 * std::f64::consts::PI * t * e).exp();
        c = c.max(dev / scale);
    }
    Ok(c)
}

/// Both sides of the transformation of `f` under `(h + iz)/k`:
///
/// `f((h + iz)/k) = (-1)^{h1+nu1+mu1} zeta_{10k}^{3 mu2 - nu2}
///  e^{2 pi i d^2 (nu1^2 - mu1^2) h'/(20k)} e^{pi (mu2^2 - nu2^2)/(10kz)} e^{-4 pi z/(5k)}
///  theta(i nu2 d/(10kz) - nu1 d^2 h'/(10k) - d/(10k); tau') /
///  theta(i mu2 d/(10kz) - mu1 d^2 h'/(10k) - 3d/(10k); tau')`
///
/// with `tau' = d^2 (h' + i/z)/(10k)`.
pub fn transformation_sides(h: u64, k: u64, z: &ErrComplex, target_err: f64) -> Result<(ErrComplex, ErrComplex)> {
    if z.re.sign() != crate::Sign::Positive {
        return Err(domain(format!("Re(z) must be positive, got {z:?}")));
    }
    let c = decompose(h, k)?;
    let prec = z.prec();
    let i = ErrComplex::i(prec);
    let ki = k as i64;
    let d = c.d as i64;
    let hp = c.hprime as i64;
    let (nu1, nu2, mu1, mu2) = (c.nu1 as i64, c.nu2 as i64, c.mu1 as i64, c.mu2 as i64);

    let tau = (&rat(h as i64, 1, prec) + &i.mul_ref(z)).div_ref(&rat(ki, 1, prec));
    let lhs = f_eval(&tau, target_err)?;

    let i_over_z = i.div_ref(z);
    let tau_p = (&rat(hp, 1, prec) + &i_over_z).mul_ref(&rat(d * d, 10 * ki, prec));
    let arg = |x2: i64, x1: i64, shift: i64| -> ErrComplex {
        let a = i_over_z.mul_ref(&rat(x2 * d, 10 * ki, prec));
        let b = rat(-(x1 * d * d * hp) - shift * d, 10 * ki, prec);
        &a + &b
    };
    let num = theta(&arg(nu2, nu1, 1), &tau_p, target_err)?;
    let den = theta(&arg(mu2, mu1, 3), &tau_p, target_err)?;
    let quotient = checked_quotient(num, den, &tau_p)?;

    let m = 20 * ki as i128;
    let quad = ((d * d) as i128 * (nu1 * nu1 - mu1 * mu1) as i128 * hp as i128).rem_euclid(m) as i64;
    let root1 = ErrComplex::root_of_unity(3 * mu2 - nu2, 10 * ki, prec);
    let root2 = ErrComplex::root_of_unity(quad, 20 * ki, prec);
    let pi = ErrReal::pi(prec);
    let gauss = ErrComplex::real(pi.mul_i64(mu2 * mu2 - nu2 * nu2).div_i64(10 * ki)).div_ref(z).exp();
    let decay = (-z.scale(&pi).mul_i64(4).div_ref(&rat(5 * ki, 1, prec))).exp();
    let sign = if c.sign_is_negative() { -1 } else { 1 };
    let rhs = root1.mul_ref(&root2).mul_ref(&gauss).mul_ref(&decay).mul_ref(&quotient).mul_i64(sign);
    Ok((lhs, rhs))
}

/// True iff both sides of the transformation of `f` agree within their error bounds.
pub fn transformation_check(h: u64, k: u64, z: &ErrComplex, target_err: f64) -> Result<bool> {
    let (lhs, rhs) = transformation_sides(h, k, z, target_err)?;
    Ok(lhs.overlaps(&rhs))
}

fn classify(d: u64, nu2: u64, flip: bool) -> Result<bool> {
    if !(d == 5 || d == 10) || nu2 >= d || gcd(nu2 as i64, d as i64) != 1 {
        return Err(domain(format!("need d in {{5, 10}} and nu2 a unit mod d, got d={d}, nu2={nu2}")));
    }
    let (d, nu2) = (d as i64, nu2 as i64);
    let mu2 = alpha(nu2, d as u64)? as i64;
    let v = mu2 * mu2 - nu2 * nu2 + d * (nu2 - mu2);
    Ok(if flip { v < 0 } else { v > 0 })
}

/// Whether the cusp term with this `(d, nu2)` contributes to the principal part
/// of `f`: `mu2^2 - nu2^2 + d (nu2 - mu2) > 0` with `mu2 = 3 nu2 mod d`.
pub fn growth_classifier(d: u64, nu2: u64) -> Result<bool> {
    classify(d, nu2, false)
}

/// The same test for the reciprocal `1/f`:
/// `nu2^2 - mu2^2 + d (mu2 - nu2) > 0`.
pub fn growth_classifier_reciprocal(d: u64, nu2: u64) -> Result<bool> {
    classify(d, nu2, true)
}

#[cfg(test)]
mod tests {
    use super::super::multiplier::omega_hk;
    use super::*;

    const P: u32 = 256;

    fn c(re: f64, im: f64) -> ErrComplex {
        ErrComplex::from_f64(re, im, P)
    }

    #[test]
    fn f_matches_series() {
        for tau in [c(0.1, 0.5), c(0.37, 0.8)] {
            let (a, b) = f_series_sides(&tau, 61, 1e-40).unwrap();
            assert!(a.dist_upper(&b) < 1e-15, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn f_conjugation_symmetry() {
        let tau = c(0.23, 0.6);
        let a = f_eval(&(-tau.conj()), 1e-40).unwrap();
        let b = f_eval(&tau, 1e-40).unwrap().conj();
        assert!(a.dist_upper(&b) < 1e-30);
    }

    #[test]
    fn corrected_phase_holds_and_published_phase_is_off_by_minus_i() {
        let (w, z) = (c(0.3, 0.1), c(0.9, 0.2));
        let om = omega_hk(1, 5, 4, &c(1.0, 0.0), 1e-50).unwrap().omega;
        let lhs = theta(&w, &(&c(1.0, 0.0) + &z.mul_i()).div_ref(&c(5.0, 0.0)), 1e-50).unwrap();
        let good = theta_transform_rhs(&w, 1, 5, 4, &z, &om, ThetaPhase::Corrected, 1e-50).unwrap();
        let bad = theta_transform_rhs(&w, 1, 5, 4, &z, &om, ThetaPhase::Published, 1e-50).unwrap();
        assert!(lhs.dist_upper(&good) < 1e-30);
        assert!(lhs.dist_upper(&bad) > 0.1);
        assert!(lhs.mul_i().mul_i64(-1).dist_upper(&bad) < 1e-30);
    }

    #[test]
    fn leading_term_constant_is_small() {
        for a in [0.1, 0.3] {
            let cst = leading_term_constant(a, 0.2, &[2.0, 3.0, 4.0, 5.0], P).unwrap();
            assert!(cst < 10.0, "a={a}: C={cst}");
        }
    }

    #[test]
    fn transformation_examples() {
        for (h, k, z) in [(2, 5, c(1.0, 0.0)), (3, 10, c(0.8, 0.0)), (7, 10, c(1.2, 0.3)), (4, 15, c(1.5, 0.0)), (1, 20, c(0.9, -0.4))] {
            let (l, r) = transformation_sides(h, k, &z, 1e-40).unwrap();
            assert!(l.dist_upper(&r) < 1e-15, "h={h} k={k}: {l:?} vs {r:?}");
            assert!(transformation_check(h, k, &z, 1e-40).unwrap());
        }
    }

    #[test]
    fn transformation_rejects_bad_cusps() {
        assert!(transformation_sides(1, 7, &c(1.0, 0.0), 1e-20).is_err());
        assert!(transformation_sides(2, 10, &c(1.0, 0.0), 1e-20).is_err());
        assert!(transformation_sides(1, 5, &c(-1.0, 0.0), 1e-20).is_err());
    }

    #[test]
    fn growth_classification_examples() {
        assert!(growth_classifier(5, 2).unwrap());
        assert!(growth_classifier(10, 7).unwrap());
        assert!(!growth_classifier(5, 1).unwrap());
        assert!(growth_classifier(5, 0).is_err());
        assert!(growth_classifier(10, 5).is_err());
        assert!(growth_classifier_reciprocal(5, 4).unwrap());
        assert!(growth_classifier_reciprocal(10, 9).unwrap());
    }
}
