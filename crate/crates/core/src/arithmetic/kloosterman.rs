use serde::Serialize;

use super::basic::{divisor_count, euler_phi, gcd, gcd3, mod_inverse};
use super::roots::RootSum;
use crate::numerics::{ErrComplex, ErrReal};

/// `K_k(n, m) = sum_{h mod k, gcd(h,k)=1} e^{2 pi i (n h + m h') / k}`
/// with `h h' = -1 (mod k)`, as a formal root-of-unity sum of modulus `k`.
pub fn kloosterman_roots(k: u64, n: i64, m: i64) -> RootSum {
    assert!(k >= 1, "k must be positive");
    let mut s = RootSum::new(k);
    let (n, m) = (n as i128, m as i128);
    for h in 0..k {
        if gcd(h as i64, k as i64) != 1 {
            continue;
        }
        let inv = mod_inverse(h as i64, k).expect("h is a unit");
        let hp = ((k - inv) % k) as i128;
        s.push(n * h as i128 + m * hp);
    }
    s
}

#[derive(Debug, Clone)]
pub struct KloostermanValue {
    pub k: u64,
    pub n: i64,
    pub m: i64,
    pub value: ErrComplex,
}

impl KloostermanValue {
    /// `|K| <= phi(k)` holds within error bars.
    pub fn within_trivial_bound(&self) -> bool {
        self.value.abs().le_within(&ErrReal::from_i64(euler_phi(self.k) as i64, self.value.prec()))
    }
}

pub fn kloosterman(k: u64, n: i64, m: i64, prec: u32) -> KloostermanValue {
    KloostermanValue { k, n, m, value: kloosterman_roots(k, n, m).evaluate(prec) }
}

#[derive(Debug, Clone, Serialize)]
pub struct WeilCheck {
    pub k: u64,
    pub n: i64,
    pub m: i64,
    pub abs: f64,
    pub bound: f64,
    pub ok: bool,
}

/// `|K_k(n,m)| <= sqrt(gcd(n,m,k)) d(k) sqrt(k)` within error bars.
pub fn weil_bound_check(k: u64, n: i64, m: i64, prec: u32) -> WeilCheck {
    let value = kloosterman(k, n, m, prec).value.abs();
    let g = gcd3(n, m, k as i64) as i64;
    let dk = divisor_count(k).expect("k >= 1") as i64;
    let bound = (ErrReal::from_i64(g, prec) * ErrReal::from_i64(k as i64, prec)).sqrt().mul_i64(dk);
    WeilCheck { k, n, m, abs: value.to_f64(), bound: bound.to_f64(), ok: value.le_within(&bound) }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    fn close(v: &ErrComplex, re: f64, im: f64) -> bool {
        v.dist_upper(&ErrComplex::from_f64(re, im, P)) < 1e-30
    }

    #[test]
    fn small_values() {
        for (n, m) in [(0, 0), (3, -5), (17, 4)] {
            assert!(close(&kloosterman(1, n, m, P).value, 1.0, 0.0));
        }
        assert!(close(&kloosterman(2, 0, 0, P).value, 1.0, 0.0));
        assert!(close(&kloosterman(3, 1, 1, P).value, 2.0, 0.0));
        // Ramanujan sum: K_k(n, 0) = c_k(n); c_10(1) = mu(10) = 1
        assert!(close(&kloosterman(10, 1, 0, P).value, 1.0, 0.0));
    }

    #[test]
    fn weil_examples() {
        let c = weil_bound_check(1, 5, 7, P);
        assert!(c.ok && (c.abs - 1.0).abs() < 1e-12 && (c.bound - 1.0).abs() < 1e-12);
        let c = weil_bound_check(3, 1, 1, P);
        assert!(c.ok && (c.abs - 2.0).abs() < 1e-12);
        assert!((c.bound - 2.0 * 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn trivial_bound() {
        for k in 1..40 {
            assert!(kloosterman(k, 3, 5, P).within_trivial_bound());
        }
    }
}
