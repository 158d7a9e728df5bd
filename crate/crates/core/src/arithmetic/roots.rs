use rug::float::Constant;
use rug::ops::AssignRound;
use rug::Float;

use crate::numerics::{ErrComplex, ErrReal};

/// A formal sum `sum_e e^{2 pi i e / modulus}` of roots of unity.
///
/// Sums of this shape are exact objects; only [`RootSum::evaluate`] and
/// [`RootSum::evaluate_with`] introduce (bounded) rounding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSum {
    modulus: u64,
    exponents: Vec<u64>,
}

impl RootSum {
    pub fn new(modulus: u64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        RootSum { modulus, exponents: Vec::new() }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn push(&mut self, e: i128) {
        self.exponents.push(e.rem_euclid(self.modulus as i128) as u64);
    }

    /// Appends the terms of `other`, lifting both to a common modulus.
    pub fn extend(&mut self, other: &RootSum) {
        let m = num_integer::lcm(self.modulus, other.modulus);
        let (a, b) = (m / self.modulus, m / other.modulus);
        if a != 1 {
            self.exponents.iter_mut().for_each(|e| *e *= a);
        }
        self.modulus = m;
        self.exponents.extend(other.exponents.iter().map(|e| e * b));
    }

    pub fn conj(&self) -> RootSum {
        let m = self.modulus;
        RootSum { modulus: m, exponents: self.exponents.iter().map(|&e| (m - e) % m).collect() }
    }

    /// Number of occurrences of each exponent, in increasing exponent order.
    fn histogram(&self) -> Vec<(u64, u64)> {
        let mut sorted = self.exponents.clone();
        sorted.sort_unstable();
        let mut out: Vec<(u64, u64)> = Vec::new();
        for e in sorted {
            match out.last_mut() {
                Some((last, count)) if *last == e => *count += 1,
                _ => out.push((e, 1)),
            }
        }
        out
    }

    /// Evaluates the sum with enclosures, computing one sine/cosine pair per
    /// distinct exponent.
    pub fn evaluate(&self, prec: u32) -> ErrComplex {
        let mut re = ErrReal::zero(prec);
        let mut im = ErrReal::zero(prec);
        for (e, count) in self.histogram() {
            let z = ErrComplex::root_of_unity(e as i64, self.modulus as i64, prec);
            re = re + z.re.mul_i64(count as i64);
            im = im + z.im.mul_i64(count as i64);
        }
        ErrComplex::new(re, im)
    }

    /// Evaluates the sum from a precomputed table for the same modulus.
    pub fn evaluate_with(&self, table: &RootTable) -> ErrComplex {
        assert_eq!(self.modulus, table.modulus, "root table modulus mismatch");
        table.sum(&self.exponents)
    }
}

/// `cos` and `sin` of `2 pi e / modulus` for every `e`, with a uniform bound
/// on the error of each entry.
pub struct RootTable {
    modulus: u64,
    prec: u32,
    cos: Vec<Float>,
    sin: Vec<Float>,
    entry_rad: f64,
}

impl RootTable {
    pub fn new(modulus: u64, prec: u32) -> Self {
        // Work with guard bits; each entry is then rounded once to `prec`.
        let guard = prec + 32;
        let two_pi = Float::with_val(guard, Constant::Pi) * 2u32;
        let mut cos = Vec::with_capacity(modulus as usize);
        let mut sin = Vec::with_capacity(modulus as usize);
        for e in 0..modulus {
            let theta = Float::with_val(guard, &two_pi * e) / modulus;
            let mut s = Float::new(prec);
            let mut c = Float::new(prec);
            (&mut s, &mut c).assign_round(theta.sin_cos_ref(), rug::float::Round::Nearest);
            sin.push(s);
            cos.push(c);
        }
        // |entry - true| <= 2^-prec (final rounding, values <= 1) + guard-bit error.
        let entry_rad = 2f64.powi(-(prec as i32)) + 2f64.powi(-(guard as i32) + 6);
        RootTable { modulus, prec, cos, sin, entry_rad }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn cos(&self, e: u64) -> &Float {
        &self.cos[e as usize]
    }

    /// `sum_e e^{2 pi i e / modulus}` with a radius covering entry errors and
    /// the `N` additions: `N * entry_rad + N^2 2^{1-prec}`.
    pub fn sum(&self, exponents: &[u64]) -> ErrComplex {
        let (re, im) = self.raw_sum(exponents);
        let n = exponents.len() as f64;
        let rad = n * self.entry_rad + n * n * 2f64.powi(1 - self.prec as i32);
        let rad = crate::numerics::next_up(rad);
        ErrComplex::new(
            ErrReal::from_parts(re, Float::with_val(64, rad)),
            ErrReal::from_parts(im, Float::with_val(64, rad)),
        )
    }

    /// Real part only; same radius as [`RootTable::sum`].
    pub fn sum_re(&self, exponents: &[u64]) -> ErrReal {
        self.sum(exponents).re
    }

    fn raw_sum(&self, exponents: &[u64]) -> (Float, Float) {
        let mut re = Float::new(self.prec);
        let mut im = Float::new(self.prec);
        for &e in exponents {
            re += &self.cos[e as usize];
            im += &self.sin[e as usize];
        }
        (re, im)
    }
}
