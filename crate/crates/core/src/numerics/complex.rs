use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::{ErrReal, Sign};

/// A complex number with independently error-bounded real and imaginary parts.
#[derive(Clone)]
pub struct ErrComplex {
    pub re: ErrReal,
    pub im: ErrReal,
}

impl ErrComplex {
    pub fn new(re: ErrReal, im: ErrReal) -> Self {
        ErrComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        ErrComplex::real(ErrReal::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        ErrComplex::real(ErrReal::one(prec))
    }

    pub fn i(prec: u32) -> Self {
        ErrComplex::new(ErrReal::zero(prec), ErrReal::one(prec))
    }

    pub fn real(re: ErrReal) -> Self {
        let prec = re.prec();
        ErrComplex { re, im: ErrReal::zero(prec) }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        ErrComplex::new(ErrReal::from_f64(re, prec), ErrReal::from_f64(im, prec))
    }

    /// `e^{2 pi i num/den}`.
    pub fn root_of_unity(num: i64, den: i64, prec: u32) -> Self {
        let den = den as i128;
        let num = (num as i128).rem_euclid(den);
        let pi = ErrReal::pi(prec);
        let theta = pi.mul_i64(2 * num as i64).div_i64(den as i64);
        let (s, c) = theta.sin_cos();
        ErrComplex::new(c, s)
    }

    /// `e^{i theta}`.
    pub fn cis(theta: &ErrReal) -> Self {
        let (s, c) = theta.sin_cos();
        ErrComplex::new(c, s)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// Widens both component radii by `extra`.
    pub fn add_error(&self, extra: f64) -> Self {
        ErrComplex::new(self.re.add_error(extra), self.im.add_error(extra))
    }

    /// True when the enclosure may contain zero.
    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    /// True when the enclosures of `self` and `other` intersect.
    pub fn overlaps(&self, other: &ErrComplex) -> bool {
        self.re.overlaps(&other.re) && self.im.overlaps(&other.im)
    }

    pub fn conj(&self) -> Self {
        ErrComplex::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> ErrReal {
        self.re.sqr() + self.im.sqr()
    }

    pub fn abs(&self) -> ErrReal {
        self.norm_sqr().sqrt()
    }

    /// Upper bound for the distance between the midpoint and any enclosed value.
    pub fn rad_f64(&self) -> f64 {
        self.re.rad_f64().hypot(self.im.rad_f64())
    }

    /// Upper bound of `|self|`, computed from the component enclosures.
    pub fn abs_upper_f64(&self) -> f64 {
        let r = self.re.abs_upper().to_f64_round(rug::float::Round::Up);
        let i = self.im.abs_upper().to_f64_round(rug::float::Round::Up);
        r.hypot(i) * (1.0 + 4.0 * f64::EPSILON)
    }

    pub fn scale(&self, s: &ErrReal) -> Self {
        ErrComplex::new(&self.re * s, &self.im * s)
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        ErrComplex::new(self.re.mul_i64(k), self.im.mul_i64(k))
    }

    pub fn mul_i(&self) -> Self {
        ErrComplex::new(-&self.im, self.re.clone())
    }

    pub fn mul_ref(&self, o: &ErrComplex) -> Self {
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        ErrComplex::new(re, im)
    }

    pub fn div_ref(&self, o: &ErrComplex) -> Self {
        let den = o.norm_sqr();
        let num = self.mul_ref(&o.conj());
        ErrComplex::new(&num.re / &den, &num.im / &den)
    }

    pub fn recip(&self) -> Self {
        ErrComplex::one(self.prec()).div_ref(self)
    }

    pub fn exp(&self) -> Self {
        let r = self.re.exp();
        let (s, c) = self.im.sin_cos();
        ErrComplex::new(&r * &c, &r * &s)
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let prec = self.prec();
        let m = self.abs();
        if self.re.sign() == Sign::Positive {
            let t = ((&m + &self.re).div_i64(2)).sqrt();
            let im = &self.im / &t.mul_i64(2);
            return ErrComplex::new(t, im);
        }
        match self.im.sign() {
            Sign::Unknown => {
                let nan = ErrReal::indeterminate(prec);
                ErrComplex::new(nan.clone(), nan)
            }
            sign => {
                let s = ((&m - &self.re).div_i64(2)).sqrt();
                let s = if sign == Sign::Negative { -s } else { s };
                let re = &self.im / &s.mul_i64(2);
                ErrComplex::new(re, s)
            }
        }
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = ErrComplex::one(self.prec());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    /// Upper bound of `|self - other|`, as f64 rounded up.
    pub fn dist_upper(&self, other: &ErrComplex) -> f64 {
        (self - other).abs_upper_f64()
    }

    /// `|mid(self) - mid(other)|`, the plain numerical discrepancy.
    pub fn mid_dist(&self, other: &ErrComplex) -> f64 {
        let d = self - other;
        d.re.to_f64().hypot(d.im.to_f64())
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Debug for ErrComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) + ({:?})i", self.re, self.im)
    }
}

impl fmt::Display for ErrComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})i", self.re, self.im)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, |$a:ident, $b:ident| $body:expr) => {
        impl $trait<&ErrComplex> for &ErrComplex {
            type Output = ErrComplex;
            fn $method(self, rhs: &ErrComplex) -> ErrComplex {
                let ($a, $b) = (self, rhs);
                $body
            }
        }
        impl $trait<ErrComplex> for ErrComplex {
            type Output = ErrComplex;
            fn $method(self, rhs: ErrComplex) -> ErrComplex {
                let ($a, $b) = (&self, &rhs);
                $body
            }
        }
        impl $trait<&ErrComplex> for ErrComplex {
            type Output = ErrComplex;
            fn $method(self, rhs: &ErrComplex) -> ErrComplex {
                let ($a, $b) = (&self, rhs);
                $body
            }
        }
    };
}

binop!(Add, add, |a, b| ErrComplex::new(&a.re + &b.re, &a.im + &b.im));
binop!(Sub, sub, |a, b| ErrComplex::new(&a.re - &b.re, &a.im - &b.im));
binop!(Mul, mul, |a, b| a.mul_ref(b));
binop!(Div, div, |a, b| a.div_ref(b));

impl Neg for ErrComplex {
    type Output = ErrComplex;
    fn neg(self) -> ErrComplex {
        ErrComplex::new(-self.re, -self.im)
    }
}

impl Neg for &ErrComplex {
    type Output = ErrComplex;
    fn neg(self) -> ErrComplex {
        ErrComplex::new(-&self.re, -&self.im)
    }
}
