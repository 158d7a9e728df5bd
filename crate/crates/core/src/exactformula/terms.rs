use crate::arithmetic::{cusp_d, CuspFamily, RootSum};
use crate::error::{domain, Error, Result};
use crate::numerics::{bessel_i1, ErrComplex, ErrReal};
use crate::Delta;

/// `M = 5n + 3 delta`, the shifted index `5(n + 3/5)` (or `5(n - 3/5)`) that
/// appears in the prefactor and in every Bessel argument of the exact formula.
pub fn shifted_index(delta: Delta, n: u64) -> Result<i64> {
    let m = 5 * n as i64 + 3 * delta.sign();
    if m <= 0 {
        return Err(domain(format!("5n + 3 delta must be positive, got n={n}, delta={delta}")));
    }
    Ok(m)
}

/// Target error for `I_1(x)` relative to its size `<= e^x` at `prec` bits.
pub(crate) fn bessel_at_prec(x: &ErrReal, prec: u32) -> Result<ErrReal> {
    let x_hi = x.upper().to_f64_round(rug::float::Round::Up);
    let rel = 2f64.powi(-(prec as i32 - 12)).max(1e-300);
    bessel_i1(x, rel * x_hi.max(0.0).exp().max(1.0))
}

/// Per-`n` factors of the exact formula: `sqrt(2) pi / sqrt(M)` and `sqrt(M)`.
#[derive(Clone)]
pub(crate) struct IndexFactors {
    pub sqrt_m: ErrReal,
    pub prefactor: ErrReal,
}

impl IndexFactors {
    pub fn new(m: i64, prec: u32) -> Self {
        let sqrt_m = ErrReal::from_i64(m, prec).sqrt();
        let prefactor = ErrReal::from_i64(2, prec).sqrt() * ErrReal::pi(prec) / &sqrt_m;
        IndexFactors { sqrt_m, prefactor }
    }

    /// `(sqrt(2) pi / sqrt(M)) (sqrt(d-4)/k) I_1((2 pi/(5k)) sqrt(2 (d-4) M))`.
    pub fn weight(&self, k: u64, d: u64, prec: u32) -> Result<ErrReal> {
        let dm4 = ErrReal::from_i64(d as i64 - 4, prec).sqrt();
        let arg = (ErrReal::pi(prec).mul_i64(2) * &dm4 * ErrReal::from_i64(2, prec).sqrt() * &self.sqrt_m)
            .div_i64(5 * k as i64);
        let i1 = bessel_at_prec(&arg, prec)?;
        Ok(&self.prefactor * &dm4.div_i64(k as i64) * i1)
    }
}

/// The root-of-unity sum weighted in the `k`-th term: `A_k(n)` for
/// `delta = 1` and `cal A_k(n)` for `delta = -1`.
pub(crate) fn twisted_sum(family: &CuspFamily, delta: Delta, n: u64) -> RootSum {
    match delta {
        Delta::Plus => family.a_k_roots(n as i64),
        Delta::Minus => family.cal_a_k_roots(n as i64),
    }
}

/// Fails when the imaginary part of a quantity that must be real exceeds
/// three times its error bound.
pub(crate) fn require_real(z: &ErrComplex, k: u64) -> Result<ErrReal> {
    let residue = z.im.to_f64().abs();
    let tolerance = 3.0 * z.re.rad_f64().max(z.im.rad_f64());
    if residue > tolerance {
        return Err(Error::ImaginaryResidue { k, residue, tolerance });
    }
    Ok(z.re.clone())
}

/// The `k`-th summand of the exact formula for `c_delta(n)`:
///
/// `(sqrt(2) pi / sqrt(M)) (sqrt(d-4)/k) A_k(n) I_1((2 pi/(5k)) sqrt(2 (d-4) M))`
///
/// with `M = 5n + 3 delta`, `d = gcd(k, 10)`, and `cal A_k` in place of `A_k`
/// for `delta = -1`.
pub fn term_k(delta: Delta, n: u64, k: u64, prec: u32) -> Result<ErrReal> {
    if k == 0 {
        return Err(domain("k must be positive"));
    }
    let d = cusp_d(k)?;
    let f = IndexFactors::new(shifted_index(delta, n)?, prec);
    let family = CuspFamily::new(k)?;
    let s = twisted_sum(&family, delta, n).evaluate(prec);
    let term = s.scale(&f.weight(k, d, prec)?);
    require_real(&term, k)
}

/// Fraction `x` with `cos(2 pi x)` the cosine in the main term:
/// `4/25 + 3n/10` for `delta = 1` and `3/25 - n/10` for `delta = -1`, in fiftieths.
pub fn main_term_phase(delta: Delta, n: u64) -> u64 {
    let n = n as i64;
    let r = match delta {
        Delta::Plus => 8 + 15 * n,
        Delta::Minus => 6 - 5 * n,
    };
    r.rem_euclid(50) as u64
}

/// `M_delta(n) = (2 sqrt(3) pi / (5 sqrt(M))) cos(2 pi x) I_1((2 pi/25) sqrt(3M))`,
/// the `k = 10` term.
pub fn main_term(delta: Delta, n: u64, prec: u32) -> Result<ErrReal> {
    let m = shifted_index(delta, n)?;
    let pi = ErrReal::pi(prec);
    let sqrt_m = ErrReal::from_i64(m, prec).sqrt();
    let sqrt3 = ErrReal::from_i64(3, prec).sqrt();
    let cos = ErrComplex::root_of_unity(main_term_phase(delta, n) as i64, 50, prec).re;
    let arg = (pi.mul_i64(2) * &sqrt3 * &sqrt_m).div_i64(25);
    let i1 = bessel_at_prec(&arg, prec)?;
    Ok((pi.mul_i64(2) * sqrt3 / sqrt_m.mul_i64(5)) * cos * i1)
}
