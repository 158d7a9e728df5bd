use serde::Serialize;

use super::theta::{eta, exp_i_pi};
use crate::arithmetic::gcd;
use crate::error::{domain, Error, Result};
use crate::numerics::{ErrComplex, ErrReal};

/// `omega_{h,k}` solved from
/// `eta((h + iz)/k) = e^{pi i (h - h')/(12k)} omega^{-1} z^{-1/2} eta((h' + i/z)/k)`.
#[derive(Debug, Clone)]
pub struct EtaMultiplier {
    pub k: u64,
    pub h: i64,
    pub hprime: i64,
    pub omega: ErrComplex,
    /// `|omega| = 1` within error bars.
    pub unit_modulus: bool,
    /// `omega^{24k} = 1` within error bars.
    pub root_of_unity: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiplierSummary {
    pub k: u64,
    pub h: i64,
    pub hprime: i64,
    pub omega: [f64; 2],
    pub unit_modulus: bool,
    pub root_of_unity: bool,
}

impl EtaMultiplier {
    pub fn summary(&self) -> MultiplierSummary {
        let (re, im) = self.omega.to_f64_pair();
        MultiplierSummary {
            k: self.k,
            h: self.h,
            hprime: self.hprime,
            omega: [re, im],
            unit_modulus: self.unit_modulus,
            root_of_unity: self.root_of_unity,
        }
    }
}

fn check_pair(h: i64, k: u64, hprime: i64) -> Result<()> {
    if k == 0 || gcd(h, k as i64) != 1 {
        return Err(domain(format!("need k >= 1 and gcd(h, k) = 1, got h={h}, k={k}")));
    }
    if (h as i128 * hprime as i128 + 1).rem_euclid(k as i128) != 0 {
        return Err(domain(format!("h h' must be -1 mod k, got h={h}, h'={hprime}, k={k}")));
    }
    Ok(())
}

fn require_right_half(z: &ErrComplex) -> Result<()> {
    if z.re.sign() != crate::Sign::Positive {
        return Err(domain(format!("Re(z) must be positive, got {z:?}")));
    }
    Ok(())
}

/// `omega_{h,k}` from the defining equation at a single sample `z`.
pub fn omega_at(h: i64, k: u64, hprime: i64, z: &ErrComplex, target_err: f64) -> Result<ErrComplex> {
    check_pair(h, k, hprime)?;
    require_right_half(z)?;
    let prec = z.prec();
    let i = ErrComplex::i(prec);
    let kk = ErrReal::from_i64(k as i64, prec);
    let k_c = ErrComplex::real(kk.clone());
    let tau_l = (&ErrComplex::real(ErrReal::from_i64(h, prec)) + &i.mul_ref(z)) / &k_c;
    let tau_r = (&ErrComplex::real(ErrReal::from_i64(hprime, prec)) + &i.div_ref(z)) / &k_c;
    let lhs = eta(&tau_l, target_err)?;
    let rhs = eta(&tau_r, target_err)?;
    let phase = exp_i_pi(&ErrComplex::real(ErrReal::from_i64(h - hprime, prec).div_i64(12 * k as i64)));
    let z_m_half = z.sqrt().recip();
    Ok(phase.mul_ref(&z_m_half).mul_ref(&rhs).div_ref(&lhs))
}

/// Solves `omega_{h,k}` at `z_sample` and at a second point
/// `z_sample + 1/2 + i/4`, requires the two to agree, and checks `|omega| = 1`
/// and `omega^{24k} = 1`.
pub fn omega_hk(
    h: i64,
    k: u64,
    hprime: i64,
    z_sample: &ErrComplex,
    target_err: f64,
) -> Result<EtaMultiplier> {
    let prec = z_sample.prec();
    let z2 = z_sample + &ErrComplex::new(ErrReal::from_ratio(1, 2, prec), ErrReal::from_ratio(1, 4, prec));
    let a = omega_at(h, k, hprime, z_sample, target_err)?;
    let b = omega_at(h, k, hprime, &z2, target_err)?;
    if !a.overlaps(&b) {
        return Err(Error::Inconsistent(format!(
            "omega_{{{h},{k}}} differs between samples: {a:?} vs {b:?}"
        )));
    }
    let one = ErrComplex::one(prec);
    let unit_modulus = a.abs().overlaps(&one.re);
    let root_of_unity = a.powi(24 * k as u32).overlaps(&one);
    Ok(EtaMultiplier { k, h, hprime, omega: a, unit_modulus, root_of_unity })
}
