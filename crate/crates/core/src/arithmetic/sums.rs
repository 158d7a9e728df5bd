use super::basic::gcd;
use super::cusp::{alpha, cusp_d, decompose, CuspData};
use super::kloosterman::kloosterman_roots;
use super::roots::RootSum;
use crate::error::{domain, Error, Result};
use crate::numerics::{ErrComplex, ErrReal};

/// All cusp decompositions `h/k` with `1 <= h < k`, `gcd(h, k) = 1`, for one
/// `k`. The summands of `A_{k,j}(n)` only depend on `n` through
/// `-20 (n+1) h (mod 20k)`, so the rest of each exponent is computed once.
#[derive(Debug, Clone)]
pub struct CuspFamily {
    k: u64,
    d: u64,
    cusps: Vec<CuspData>,
    base: Vec<u64>,
}

impl CuspFamily {
    pub fn new(k: u64) -> Result<Self> {
        let d = cusp_d(k)?;
        let mut cusps = Vec::new();
        let mut base = Vec::new();
        for h in 1..k {
            if gcd(h as i64, k as i64) != 1 {
                continue;
            }
            let c = decompose(h, k)?;
            base.push(c.summand_exponent(-1));
            cusps.push(c);
        }
        Ok(CuspFamily { k, d, cusps, base })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn cusps(&self) -> &[CuspData] {
        &self.cusps
    }

    pub fn modulus(&self) -> u64 {
        20 * self.k
    }

    fn check_j(&self, j: i64) -> Result<()> {
        if gcd(j, self.d as i64) != 1 {
            return Err(domain(format!("gcd(j, d) must be 1, got j={j}, d={}", self.d)));
        }
        Ok(())
    }

    /// Appends the summands of `A_{k,j}(n)` to `out` (modulus `20k`).
    pub fn push_a_kj(&self, j: i64, n: i64, out: &mut RootSum) -> Result<()> {
        self.check_j(j)?;
        debug_assert_eq!(out.modulus(), self.modulus());
        let d = self.d as i64;
        let shift = 20 * (n as i128 + 1);
        for (c, &b) in self.cusps.iter().zip(&self.base) {
            if (c.h as i64 - j).rem_euclid(d) == 0 {
                out.push(b as i128 - shift * c.h as i128);
            }
        }
        Ok(())
    }

    pub fn a_kj_roots(&self, j: i64, n: i64) -> Result<RootSum> {
        let mut s = RootSum::new(self.modulus());
        self.push_a_kj(j, n, &mut s)?;
        Ok(s)
    }

    /// `A_k(n) = A_{k,3}(n) + A_{k,-3}(n)`.
    pub fn a_k_roots(&self, n: i64) -> RootSum {
        let mut s = RootSum::new(self.modulus());
        for j in [3, -3] {
            self.push_a_kj(j, n, &mut s).expect("3 is a unit mod 5 and 10");
        }
        s
    }

    /// `cal A_k(n) = conj(A_{k,1}(-n)) + conj(A_{k,-1}(-n))`.
    pub fn cal_a_k_roots(&self, n: i64) -> RootSum {
        let mut s = RootSum::new(self.modulus());
        for j in [1, -1] {
            self.push_a_kj(j, -n, &mut s).expect("1 is a unit");
        }
        s.conj()
    }
}

/// `A_{k,j}(n)` as a formal root-of-unity sum over `1 <= h < k`.
pub fn a_kj_roots(k: u64, j: i64, n: i64) -> Result<RootSum> {
    CuspFamily::new(k)?.a_kj_roots(j, n)
}

/// `A_{k,j}(n)` by direct summation of its defining sum.
pub fn a_kj(k: u64, j: i64, n: i64, prec: u32) -> Result<ErrComplex> {
    Ok(a_kj_roots(k, j, n)?.evaluate(prec))
}

pub fn a_k(k: u64, n: i64, prec: u32) -> Result<ErrComplex> {
    Ok(CuspFamily::new(k)?.a_k_roots(n).evaluate(prec))
}

pub fn cal_a_k(k: u64, n: i64, prec: u32) -> Result<ErrComplex> {
    Ok(CuspFamily::new(k)?.cal_a_k_roots(n).evaluate(prec))
}

/// `A_{k,j}(n)` in its rewritten form: the `h`-independent factor
/// `zeta_{10k}^{3 alpha_j - j - d}` times a sum over residues `h (mod k)`.
///
/// The residues are deliberately represented by `k < h < 2k`, and `h'` by the
/// shifted class representative `h' + 2k` (`d = 5`) or `h' + k` (`d = 10`),
/// so agreement with [`a_kj`] exercises the invariance of each summand under
/// those shifts.
pub fn a_kj_rewritten(k: u64, j: i64, n: i64, prec: u32) -> Result<ErrComplex> {
    let d = cusp_d(k)?;
    let j = normalize_j(j, d)?;
    let a = alpha(j, d)? as i128;
    let modulus = 20 * k;
    let shift_hp = if d == 5 { 2 * k } else { k };
    let mut inner = RootSum::new(modulus);
    for h in (k + 1)..(2 * k) {
        if gcd(h as i64, k as i64) != 1 || (h as i64 - j).rem_euclid(d as i64) != 0 {
            continue;
        }
        let c = decompose(h, k)?;
        let c = c.with_hprime(c.hprime + shift_hp)?;
        inner.push(c.unit_exponent(n));
    }
    let twist = 2 * (3 * a - j as i128 - d as i128);
    let factor = ErrComplex::root_of_unity(twist as i64, modulus as i64, prec);
    Ok(factor.mul_ref(&inner.evaluate(prec)))
}

fn normalize_j(j: i64, d: u64) -> Result<i64> {
    if gcd(j, d as i64) != 1 {
        return Err(domain(format!("gcd(j, d) must be 1, got j={j}, d={d}")));
    }
    Ok(j.rem_euclid(d as i64))
}

/// `j^2 - d j - alpha^2 + d alpha`.
pub fn reduced_m_coefficient(j: i64, alpha: i64, d: i64) -> i64 {
    j * j - d * j - alpha * alpha + d * alpha
}

fn require_d(k: u64, want: u64) -> Result<u64> {
    let d = gcd(k as i64, 10);
    if d != want {
        return Err(domain(format!("this form needs gcd(k, 10) = {want}, got k={k} (d={d})")));
    }
    Ok(d)
}

/// `A_{k,j}(n)` for `gcd(k, 10) = 5` via its Kloosterman reduction
///
/// `-(1/25) sum_{l mod 5} e^{2 pi i j l / 5} K_{5k}((5n+3)(k^2-1)/4 + l k, j^2-5j-alpha_j^2+5 alpha_j)`,
///
/// where `(k^2-1)/4` enters as `-[4]^{-1} (mod 5k)`.
pub fn a_kj_reduced_d5(k: u64, j: i64, n: i64, prec: u32) -> Result<ErrComplex> {
    require_d(k, 5)?;
    let j = normalize_j(j, 5)?;
    a_kj_reduced_d5_with_alpha(k, j, n, alpha(j, 5)? as i64, prec)
}

/// [`a_kj_reduced_d5`] with an explicit `alpha_j`; a wrong value must break
/// the identity, which makes this the mutation hook for negative controls.
pub fn a_kj_reduced_d5_with_alpha(
    k: u64,
    j: i64,
    n: i64,
    alpha_j: i64,
    prec: u32,
) -> Result<ErrComplex> {
    require_d(k, 5)?;
    let j = normalize_j(j, 5)?;
    let m5k = 5 * k as i128;
    let quarter = (1 - (k as i128) * (k as i128)) / 4;
    if (4 * quarter - 1).rem_euclid(m5k) != 0 {
        return Err(Error::Inconsistent(format!("(1-k^2)/4 is not 4^-1 mod 5k for k={k}")));
    }
    let first_base = ((5 * n as i128 + 3) * (-quarter)).rem_euclid(m5k);
    let m = reduced_m_coefficient(j, alpha_j, 5);
    let mut s = RootSum::new(5 * k);
    for l in 0..5i128 {
        let first = (first_base + l * k as i128).rem_euclid(m5k) as i64;
        let twist = j as i128 * l * k as i128;
        for e in kloosterman_roots(5 * k, first, m).exponents() {
            s.push(*e as i128 + twist);
        }
    }
    let v = s.evaluate(prec);
    let scale = ErrReal::from_ratio(-1, 25, prec);
    Ok(v.scale(&scale))
}

/// `|A_{k,j}(n)|` for `gcd(k, 10) = 10` via
///
/// `(1/50) |sum_{l mod 5} e^{-2 pi i j l / 5} K_{10k}(2(k l - 5n - 3), (j^2-10j-alpha_j^2+10 alpha_j)/2)|`.
pub fn a_kj_reduced_d10_abs(k: u64, j: i64, n: i64, prec: u32) -> Result<ErrReal> {
    require_d(k, 10)?;
    let j = normalize_j(j, 10)?;
    a_kj_reduced_d10_abs_with_alpha(k, j, n, alpha(j, 10)? as i64, prec)
}

/// [`a_kj_reduced_d10_abs`] with an explicit `alpha_j` (mutation hook).
pub fn a_kj_reduced_d10_abs_with_alpha(
    k: u64,
    j: i64,
    n: i64,
    alpha_j: i64,
    prec: u32,
) -> Result<ErrReal> {
    require_d(k, 10)?;
    let j = normalize_j(j, 10)?;
    let c = reduced_m_coefficient(j, alpha_j, 10);
    if c % 2 != 0 {
        return Err(domain(format!("j^2-10j-alpha^2+10alpha = {c} is odd")));
    }
    let m10k = 10 * k as i128;
    let mut s = RootSum::new(10 * k);
    for l in 0..5i128 {
        let first = (2 * (k as i128 * l - 5 * n as i128 - 3)).rem_euclid(m10k) as i64;
        let twist = -(j as i128) * l * 2 * k as i128;
        for e in kloosterman_roots(10 * k, first, c / 2).exponents() {
            s.push(*e as i128 + twist);
        }
    }
    Ok(s.evaluate(prec).abs().div_i64(50))
}
