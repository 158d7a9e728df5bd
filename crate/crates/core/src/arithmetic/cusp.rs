use serde::Serialize;

use super::basic::{gcd, mod_inverse};
use crate::error::{domain, Result};

/// `alpha_j(d)`: the representative of `3j (mod d)` in `1..d`.
pub fn alpha(j: i64, d: u64) -> Result<u64> {
    if gcd(j, d as i64) != 1 {
        return Err(domain(format!("alpha_j(d) needs gcd(j, d) = 1, got j={j}, d={d}")));
    }
    Ok((3 * j).rem_euclid(d as i64) as u64)
}

/// `gcd(k, 10)` when it is 5 or 10, otherwise a domain error.
pub fn cusp_d(k: u64) -> Result<u64> {
    match gcd(k as i64, 10) {
        d @ (5 | 10) => Ok(d),
        d => Err(domain(format!("gcd(k, 10) must be 5 or 10, got k={k} (d={d})"))),
    }
}

/// Smallest `x >= 0` with `h x = -1 (mod k)` and `(10/d) | x`.
///
/// Starts from the inverse class representative `x0` in `0..k` and scans
/// `x0 + t k` for `t = 0..10/d`.
pub fn hprime(h: i64, k: u64, d: u64) -> Result<u64> {
    let inv = mod_inverse(h, k)
        .ok_or_else(|| domain(format!("h={h} is not invertible modulo k={k}")))?;
    let x0 = (k - inv) % k;
    let step = 10 / d;
    (0..step)
        .map(|t| x0 + t * k)
        .find(|x| x % step == 0)
        .ok_or_else(|| domain(format!("no h' for h={h}, k={k}")))
}

/// The integers attached to a fraction `h/k` with `gcd(k, 10) = d in {5, 10}`:
///
/// `3h = h1 k + h2` with `0 <= h2 < k`, `h = d nu1 + nu2` and
/// `h2 = d mu1 + mu2` with `0 <= nu2, mu2 < d`, and `alpha = alpha_{h mod d}(d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CuspData {
    pub k: u64,
    pub h: u64,
    pub hprime: u64,
    pub d: u64,
    pub h1: u64,
    pub h2: u64,
    pub nu1: u64,
    pub nu2: u64,
    pub mu1: u64,
    pub mu2: u64,
    pub alpha: u64,
}

/// Decomposes `h/k`. `h` is not reduced modulo `k`, so shifted
/// representatives `h + l k` keep their own `h1` and `nu1`.
pub fn decompose(h: u64, k: u64) -> Result<CuspData> {
    if k == 0 {
        return Err(domain("k must be positive"));
    }
    if gcd(h as i64, k as i64) != 1 {
        return Err(domain(format!("gcd(h, k) must be 1, got h={h}, k={k}")));
    }
    let d = cusp_d(k)?;
    let hp = hprime(h as i64, k, d)?;
    Ok(build(h, k, d, hp, alpha(h as i64, d)?))
}

fn build(h: u64, k: u64, d: u64, hprime: u64, alpha: u64) -> CuspData {
    let (h1, h2) = (3 * h / k, 3 * h % k);
    let (nu1, nu2) = (h / d, h % d);
    let (mu1, mu2) = (h2 / d, h2 % d);
    CuspData { k, h, hprime, d, h1, h2, nu1, nu2, mu1, mu2, alpha }
}

impl CuspData {
    /// The same cusp with another admissible representative of `h'`.
    pub fn with_hprime(&self, x: u64) -> Result<CuspData> {
        let k = self.k as i128;
        if ((self.h as i128 * x as i128) + 1).rem_euclid(k) != 0 || x % (10 / self.d) != 0 {
            return Err(domain(format!("{x} is not an admissible h' for h={}, k={}", self.h, self.k)));
        }
        Ok(CuspData { hprime: x, ..*self })
    }

    /// `(-1)^{h1 + nu1 + mu1} = -1`.
    pub fn sign_is_negative(&self) -> bool {
        (self.h1 + self.nu1 + self.mu1) % 2 == 1
    }

    /// `nu1^2 - mu1^2 + nu1 - mu1`.
    pub fn quadratic(&self) -> i128 {
        let (a, b) = (self.nu1 as i128, self.mu1 as i128);
        a * a - b * b + a - b
    }

    pub fn root_modulus(&self) -> u64 {
        20 * self.k
    }

    /// Exponent `e` (mod `20k`) such that the summand of `A_{k,j}(n)` at this
    /// `h` is `e^{2 pi i e / 20k}`:
    ///
    /// `(-1)^{h1+nu1+mu1} zeta_{10k}^{3 mu2 - nu2 - d} e^{(2 pi i/k)((d^2/20) X h' - (n+1) h)}`.
    pub fn summand_exponent(&self, n: i64) -> u64 {
        let m = self.root_modulus() as i128;
        let twist = 2 * (3 * self.mu2 as i128 - self.nu2 as i128 - self.d as i128);
        (twist + self.unit_exponent(n)).rem_euclid(m) as u64
    }

    /// The summand exponent without the `zeta_{10k}^{3 mu2 - nu2 - d}` factor.
    pub fn unit_exponent(&self, n: i64) -> i128 {
        let k = self.k as i128;
        let m = 20 * k;
        let d2 = (self.d * self.d) as i128;
        let quad = (d2 * self.quadratic()).rem_euclid(m) * (self.hprime as i128 % m);
        let lin = 20 * (n as i128 + 1) * self.h as i128;
        let sign = if self.sign_is_negative() { 10 * k } else { 0 };
        (quad - lin + sign).rem_euclid(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompose_three_tenths() {
        let c = decompose(3, 10).unwrap();
        assert_eq!((c.d, c.nu1, c.nu2, c.alpha), (10, 0, 3, 9));
        assert_eq!((c.h1, c.h2, c.mu1, c.mu2), (0, 9, 0, 9));
        assert_eq!(c.hprime, 3);
    }

    #[test]
    fn decompose_two_fifths() {
        let c = decompose(2, 5).unwrap();
        assert_eq!((c.d, c.nu2, c.alpha), (5, 2, 1));
        assert_eq!((c.h1, c.h2, c.mu1, c.mu2), (1, 1, 0, 1));
        // 2 h' = -1 (mod 5) and 2 | h'
        assert_eq!(c.hprime, 2);
    }

    #[test]
    fn invariants_on_grid() {
        for k in (5..=200).step_by(5) {
            for h in 1..k {
                let Ok(c) = decompose(h, k) else {
                    assert!(gcd(h as i64, k as i64) > 1);
                    continue;
                };
                assert_eq!(3 * h, c.h1 * k + c.h2);
                assert!(c.h2 < k);
                assert_eq!(h, c.d * c.nu1 + c.nu2);
                assert_eq!(c.h2, c.d * c.mu1 + c.mu2);
                assert!(c.nu2 < c.d && c.mu2 < c.d);
                assert!(c.alpha >= 1 && c.alpha < c.d);
                assert_eq!(c.nu2, h % c.d);
                assert_eq!(c.mu2, c.alpha);
                assert_eq!((h * c.hprime + 1) % k, 0);
                assert_eq!(c.hprime % (10 / c.d), 0);
                assert!(c.hprime < 10 / c.d * k);
            }
        }
    }

    #[test]
    fn shifted_h_keeps_residues() {
        let a = decompose(7, 25).unwrap();
        let b = decompose(32, 25).unwrap();
        assert_eq!((a.nu2, a.mu2, a.h2, a.hprime), (b.nu2, b.mu2, b.h2, b.hprime));
        assert_eq!(b.h1, a.h1 + 3);
        assert_eq!(b.nu1, a.nu1 + 5);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(decompose(2, 10).is_err());
        assert!(decompose(1, 7).is_err());
        assert!(decompose(1, 0).is_err());
        assert!(alpha(5, 5).is_err());
        assert!(decompose(3, 10).unwrap().with_hprime(4).is_err());
    }
}
