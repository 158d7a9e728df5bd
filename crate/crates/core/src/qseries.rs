//! Truncated power series in `q` with big-integer coefficients, and the
//! exact expansion of `Q10` and its reciprocal.

use std::fmt;

use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Delta;

/// `sum_{n=0}^{order} coeffs[n] q^n + O(q^{order+1})`.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Integer>,
}

impl TruncatedSeries {
    /// Builds a series of order `coeffs.len() - 1`. Panics on an empty vector.
    pub fn new(coeffs: Vec<Integer>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least one coefficient");
        TruncatedSeries { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![Integer::new(); order + 1])
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Integer::from(1);
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &Integer {
        &self.coeffs[n]
    }

    pub fn into_coeffs(self) -> Vec<Integer> {
        self.coeffs
    }

    /// Drops coefficients above `order`.
    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs[..=order.min(self.order())].to_vec())
    }

    /// Cauchy product, truncated at the smaller of the two orders.
    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(other.order());
        let mut out = vec![Integer::new(); order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                if *b != 0 {
                    out[i + j] += a * b;
                }
            }
        }
        TruncatedSeries::new(out)
    }

    /// Multiplicative inverse by term-by-term long division.
    ///
    /// Requires the constant term to be `+1` or `-1`.
    pub fn recip(&self) -> Result<TruncatedSeries> {
        let c0 = &self.coeffs[0];
        let unit = if *c0 == 1 {
            1
        } else if *c0 == -1 {
            -1
        } else {
            return Err(Error::NonInvertible(c0.to_string()));
        };
        let order = self.order();
        let mut b: Vec<Integer> = Vec::with_capacity(order + 1);
        b.push(Integer::from(unit));
        for n in 1..=order {
            let mut acc = Integer::new();
            for i in 1..=n {
                let a = &self.coeffs[i];
                if *a != 0 {
                    acc += a * &b[n - i];
                }
            }
            // a0 * b_n = -acc, and a0 = a0^{-1}
            acc *= -unit;
            b.push(acc);
        }
        Ok(TruncatedSeries::new(b))
    }

    /// Multiplies in place by `(1 - q^e)`.
    pub fn mul_one_minus_q_pow(&mut self, e: usize) {
        if e == 0 {
            self.coeffs.iter_mut().for_each(|c| *c = Integer::new());
            return;
        }
        for i in (e..self.coeffs.len()).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(i);
            hi[0] -= &lo[i - e];
        }
    }

    /// Divides in place by `(1 - q^e)` for `e >= 1`.
    pub fn div_one_minus_q_pow(&mut self, e: usize) {
        assert!(e >= 1, "1 - q^0 is not invertible");
        for i in e..self.coeffs.len() {
            let (lo, hi) = self.coeffs.split_at_mut(i);
            hi[0] += &lo[i - e];
        }
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self.coeffs.iter().take(12).map(|c| c.to_string()).collect();
        write!(f, "[{}", shown.join(", "))?;
        if self.coeffs.len() > 12 {
            write!(f, ", ...")?;
        }
        write!(f, "] + O(q^{})", self.order() + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProductExponent {
    Product,
    Reciprocal,
}

/// `prod_{n >= 1, n = residue (mod modulus)} (1 - q^n)`, or its reciprocal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResidueProductSpec {
    residue: u64,
    modulus: u64,
    exponent: ProductExponent,
}

impl ResidueProductSpec {
    /// Normalizes `residue` into `0..modulus`. Panics if `modulus == 0`.
    pub fn new(residue: i64, modulus: u64, exponent: ProductExponent) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        let residue = residue.rem_euclid(modulus as i64) as u64;
        ResidueProductSpec { residue, modulus, exponent }
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn exponent(&self) -> ProductExponent {
        self.exponent
    }

    /// Exponents `1 <= n <= order` in the residue class.
    fn exponents(&self, order: usize) -> impl Iterator<Item = usize> {
        let first = if self.residue == 0 { self.modulus } else { self.residue } as usize;
        (first..=order).step_by(self.modulus as usize)
    }
}

/// Expands the residue-class product to order `order`. Factors with exponent
/// above `order` do not affect the retained coefficients and are skipped.
pub fn pochhammer_inf(spec: ResidueProductSpec, order: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(order);
    for e in spec.exponents(order) {
        match spec.exponent {
            ProductExponent::Product => s.mul_one_minus_q_pow(e),
            ProductExponent::Reciprocal => s.div_one_minus_q_pow(e),
        }
    }
    s
}

/// Coefficients `c_delta(0..=order)` of
/// `Q10^delta`, `Q10 = (q, q^9; q^10)_inf / (q^3, q^7; q^10)_inf`.
pub fn q10_series(delta: Delta, order: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(order);
    let (up, down) = match delta {
        Delta::Plus => ([1, 9], [3, 7]),
        Delta::Minus => ([3, 7], [1, 9]),
    };
    for r in up {
        for e in ResidueProductSpec::new(r, 10, ProductExponent::Product).exponents(order) {
            s.mul_one_minus_q_pow(e);
        }
    }
    for r in down {
        for e in ResidueProductSpec::new(r, 10, ProductExponent::Product).exponents(order) {
            s.div_one_minus_q_pow(e);
        }
    }
    s
}

/// Indices at which `c_1(n)` vanishes. These are the only zeros: every other
/// coefficient has the sign given by [`expected_positive`].
pub const ZEROS_PLUS: [u64; 10] = [2, 5, 7, 9, 15, 17, 22, 27, 37, 47];

/// Indices at which `c_{-1}(n)` vanishes; the only zeros for `delta = -1`.
pub const ZEROS_MINUS: [u64; 10] = [3, 4, 5, 6, 9, 13, 19, 23, 29, 39];

pub fn zero_exceptions(delta: Delta) -> &'static [u64] {
    match delta {
        Delta::Plus => &ZEROS_PLUS,
        Delta::Minus => &ZEROS_MINUS,
    }
}

/// Whether the sign pattern prescribes `c_delta(n) > 0`.
///
/// `delta = 1`: positive iff `n = 0, 2, 3, 6, 9 (mod 10)` (pattern `+-++--+--+`).
/// `delta = -1`: positive iff `n = 0, 1, 2, 3, 9 (mod 10)` (pattern `++++-----+`).
pub fn expected_positive(delta: Delta, n: u64) -> bool {
    let positive: &[u64] = match delta {
        Delta::Plus => &[0, 2, 3, 6, 9],
        Delta::Minus => &[0, 1, 2, 3, 9],
    };
    positive.contains(&(n % 10))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    MatchPositive,
    MatchNegative,
    ZeroException,
    Mismatch,
}

impl Verdict {
    pub fn is_match(self) -> bool {
        self != Verdict::Mismatch
    }
}

pub fn sign_pattern_verdict(delta: Delta, n: u64, c: &Integer) -> Verdict {
    if *c == 0 {
        return if zero_exceptions(delta).contains(&n) {
            Verdict::ZeroException
        } else {
            Verdict::Mismatch
        };
    }
    if zero_exceptions(delta).contains(&n) {
        return Verdict::Mismatch;
    }
    match (*c > 0, expected_positive(delta, n)) {
        (true, true) => Verdict::MatchPositive,
        (false, false) => Verdict::MatchNegative,
        _ => Verdict::Mismatch,
    }
}

/// JSON form of a coefficient list. Coefficients are decimal strings because
/// they outgrow 64-bit integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesExport {
    pub delta: Delta,
    pub order: usize,
    pub coeffs: Vec<String>,
}

impl SeriesExport {
    pub fn new(delta: Delta, series: &TruncatedSeries) -> Self {
        SeriesExport {
            delta,
            order: series.order(),
            coeffs: series.coeffs().iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn to_series(&self) -> Result<TruncatedSeries> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|s| {
                s.parse::<Integer>()
                    .map_err(|e| crate::error::domain(format!("bad coefficient {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() != self.order + 1 {
            return Err(crate::error::domain(format!(
                "order {} does not match {} coefficients",
                self.order,
                coeffs.len()
            )));
        }
        Ok(TruncatedSeries::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &TruncatedSeries) -> Vec<i64> {
        s.coeffs().iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn difference_of_squares() {
        let a = TruncatedSeries::from_i64s(&[1, 1, 0]);
        let b = TruncatedSeries::from_i64s(&[1, -1, 0]);
        assert_eq!(ints(&a.mul(&b)), vec![1, 0, -1]);
    }

    #[test]
    fn mixed_orders_truncate_to_minimum() {
        let a = TruncatedSeries::from_i64s(&[1, 2, 3, 4]);
        let b = TruncatedSeries::from_i64s(&[1, 1]);
        let c = a.mul(&b);
        assert_eq!(c.order(), 1);
        assert_eq!(ints(&c), vec![1, 3]);
    }

    #[test]
    fn geometric_series() {
        let a = TruncatedSeries::from_i64s(&[1, -1, 0, 0, 0]);
        assert_eq!(ints(&a.recip().unwrap()), vec![1; 5]);
        let one = TruncatedSeries::one(3);
        assert_eq!(one.recip().unwrap(), one);
    }

    #[test]
    fn negative_unit_is_invertible() {
        let a = TruncatedSeries::from_i64s(&[-1, 2, 0, 5]);
        let b = a.recip().unwrap();
        assert_eq!(a.mul(&b), TruncatedSeries::one(3));
    }

    #[test]
    fn non_unit_constant_rejected() {
        let a = TruncatedSeries::from_i64s(&[2, 1]);
        assert!(matches!(a.recip(), Err(Error::NonInvertible(_))));
        let z = TruncatedSeries::from_i64s(&[0, 1]);
        assert!(z.recip().is_err());
    }

    #[test]
    fn pochhammer_examples() {
        let s = pochhammer_inf(ResidueProductSpec::new(1, 10, ProductExponent::Product), 9);
        assert_eq!(ints(&s), vec![1, -1, 0, 0, 0, 0, 0, 0, 0, 0]);
        let euler = pochhammer_inf(ResidueProductSpec::new(0, 1, ProductExponent::Product), 5);
        assert_eq!(ints(&euler), vec![1, -1, -1, 0, 0, 1]);
        let three = pochhammer_inf(ResidueProductSpec::new(3, 10, ProductExponent::Product), 12);
        let mut want = vec![0; 13];
        want[0] = 1;
        want[3] = -1;
        assert_eq!(ints(&three), want);
    }

    #[test]
    fn residue_is_normalized() {
        let spec = ResidueProductSpec::new(-7, 10, ProductExponent::Reciprocal);
        assert_eq!(spec.residue(), 3);
    }

    #[test]
    fn euler_pentagonal_to_ten() {
        let euler = pochhammer_inf(ResidueProductSpec::new(1, 1, ProductExponent::Product), 10);
        assert_eq!(ints(&euler), vec![1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0]);
    }

    #[test]
    fn small_q10_coefficients() {
        let plus = q10_series(Delta::Plus, 50);
        assert_eq!(*plus.coeff(0), 1);
        for &n in &ZEROS_PLUS {
            assert!(plus.coeff(n as usize).cmp0().is_eq(), "c_1({n})");
        }
        let minus = q10_series(Delta::Minus, 50);
        for &n in &ZEROS_MINUS {
            assert!(minus.coeff(n as usize).cmp0().is_eq(), "c_-1({n})");
        }
    }

    #[test]
    fn verdict_examples() {
        let pos = Integer::from(5);
        let zero = Integer::new();
        assert_eq!(sign_pattern_verdict(Delta::Plus, 10, &pos), Verdict::MatchPositive);
        assert_eq!(sign_pattern_verdict(Delta::Plus, 2, &zero), Verdict::ZeroException);
        assert_eq!(sign_pattern_verdict(Delta::Minus, 4, &zero), Verdict::ZeroException);
        assert_eq!(sign_pattern_verdict(Delta::Plus, 11, &zero), Verdict::Mismatch);
        assert_eq!(sign_pattern_verdict(Delta::Plus, 1, &pos), Verdict::Mismatch);
        assert_eq!(sign_pattern_verdict(Delta::Plus, 1, &-pos), Verdict::MatchNegative);
    }

    #[test]
    fn export_round_trip() {
        let s = q10_series(Delta::Minus, 20);
        let e = SeriesExport::new(Delta::Minus, &s);
        let json = serde_json::to_string(&e).unwrap();
        assert!(json.starts_with("{\"delta\":-1,\"order\":20,\"coeffs\":[\"1\""));
        let back: SeriesExport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_series().unwrap(), s);
    }
}
