use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::{Constant, Round};
use rug::ops::AssignRound;
use rug::{Float, Integer};

/// Precision of the radius. Radii are always rounded towards +inf.
pub(crate) const RAD_PREC: u32 = 64;

fn up<T>(v: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(RAD_PREC, v, Round::Up).0
}

fn down<T>(v: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(RAD_PREC, v, Round::Down).0
}

fn mag(x: &Float) -> Float {
    up(x.abs_ref())
}

/// Bound on the rounding error of a correctly rounded result `r`: `|r| 2^(1-p)`.
fn rounding(r: &Float) -> Float {
    let shift = r.prec().saturating_sub(1);
    mag(r) >> shift
}

fn radd(a: &Float, b: &Float) -> Float {
    up(a + b)
}

fn rmul(a: &Float, b: &Float) -> Float {
    up(a * b)
}

/// Three-valued sign: a sign is only claimed when the enclosure excludes zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Sign {
    Positive,
    Negative,
    Unknown,
}

/// A real number `mid ± rad`: the true value is guaranteed to lie within
/// `rad` of the arbitrary-precision midpoint.
///
/// Every operation rounds the midpoint to nearest at the working precision
/// and adds a bound for that rounding, the propagated input radii, and any
/// truncation to the output radius. An operation whose result cannot be
/// enclosed (division by an interval containing zero, logarithm of a
/// non-positive interval) returns an *indeterminate* value with infinite
/// radius instead of failing.
#[derive(Clone)]
pub struct ErrReal {
    mid: Float,
    rad: Float,
}

impl ErrReal {
    pub fn zero(prec: u32) -> Self {
        Self::exact(Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    /// Wraps an exactly known value.
    pub fn exact(mid: Float) -> Self {
        ErrReal { mid, rad: Float::new(RAD_PREC) }
    }

    pub fn from_parts(mid: Float, rad: Float) -> Self {
        let rad = if rad.is_nan() || rad.is_sign_negative() && !rad.is_zero() {
            up(f64::INFINITY)
        } else {
            up(&rad)
        };
        let mut x = ErrReal { mid, rad };
        x.normalize();
        x
    }

    pub fn indeterminate(prec: u32) -> Self {
        ErrReal { mid: Float::new(prec), rad: up(f64::INFINITY) }
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_integer(&Integer::from(v), prec)
    }

    pub fn from_integer(v: &Integer, prec: u32) -> Self {
        let (mid, ord) = Float::with_val_round(prec, v, Round::Nearest);
        let mut x = ErrReal::exact(mid);
        if ord != Ordering::Equal {
            x.rad = rounding(&x.mid);
        }
        x
    }

    /// Exact conversion; `f64` values are representable once `prec >= 53`.
    pub fn from_f64(v: f64, prec: u32) -> Self {
        let mid = Float::with_val(prec.max(53), v);
        ErrReal::exact(mid).with_prec(prec)
    }

    /// `num / den` rounded to the working precision.
    pub fn from_ratio(num: i64, den: i64, prec: u32) -> Self {
        ErrReal::from_i64(num, prec) / &ErrReal::from_i64(den, prec)
    }

    pub fn pi(prec: u32) -> Self {
        let mid = Float::with_val(prec, Constant::Pi);
        let rad = rounding(&mid);
        ErrReal { mid, rad }
    }

    pub fn mid(&self) -> &Float {
        &self.mid
    }

    pub fn rad(&self) -> &Float {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.mid.prec()
    }

    /// Re-rounds the midpoint to `prec` bits, widening the radius if needed.
    pub fn with_prec(&self, prec: u32) -> Self {
        let (mid, ord) = Float::with_val_round(prec, &self.mid, Round::Nearest);
        let rad = if ord == Ordering::Equal {
            self.rad.clone()
        } else {
            radd(&self.rad, &rounding(&mid))
        };
        ErrReal { mid, rad }
    }

    /// Widens the radius by `extra >= 0` (e.g. a truncation bound).
    pub fn add_error(&self, extra: f64) -> Self {
        let extra = if extra.is_nan() { f64::INFINITY } else { extra.max(0.0) };
        ErrReal { mid: self.mid.clone(), rad: radd(&self.rad, &up(extra)) }
    }

    pub fn is_finite(&self) -> bool {
        self.rad.is_finite() && self.mid.is_finite()
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn rad_f64(&self) -> f64 {
        self.rad.to_f64_round(Round::Up)
    }

    /// Lower end of the enclosure, rounded down.
    pub fn lower(&self) -> Float {
        down(&self.mid - &self.rad)
    }

    /// Upper end of the enclosure, rounded up.
    pub fn upper(&self) -> Float {
        up(&self.mid + &self.rad)
    }

    /// Upper bound of `|x|`.
    pub fn abs_upper(&self) -> Float {
        radd(&mag(&self.mid), &self.rad)
    }

    pub fn sign(&self) -> Sign {
        if !self.is_finite() {
            return Sign::Unknown;
        }
        if self.lower() > 0 {
            Sign::Positive
        } else if self.upper() < 0 {
            Sign::Negative
        } else {
            Sign::Unknown
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.sign() == Sign::Unknown
    }

    /// True when `|self - other|` is within the combined radii.
    pub fn overlaps(&self, other: &ErrReal) -> bool {
        (self - other).contains_zero()
    }

    /// True when every point of `self` is strictly below every point of `other`.
    pub fn certainly_lt(&self, other: &ErrReal) -> bool {
        (other - self).sign() == Sign::Positive
    }

    /// True unless `self` is certainly above `bound`: the verdict for
    /// "`self <= bound` within error bars".
    pub fn le_within(&self, bound: &ErrReal) -> bool {
        self.is_finite() && bound.is_finite() && (bound - self).sign() != Sign::Negative
    }

    /// Nearest integer to the midpoint.
    pub fn round_mid(&self) -> Option<Integer> {
        self.mid.to_integer()
    }

    pub fn to_string_digits(&self, digits: usize) -> String {
        self.mid.to_string_radix(10, Some(digits))
    }

    fn normalize(&mut self) {
        if self.mid.is_nan() || self.rad.is_nan() || self.mid.is_infinite() {
            let prec = self.mid.prec();
            *self = ErrReal::indeterminate(prec);
        }
    }

    fn finish(mid: Float, prop: Float) -> Self {
        let rad = radd(&prop, &rounding(&mid));
        let mut x = ErrReal { mid, rad };
        x.normalize();
        x
    }

    fn out_prec(&self, other: &ErrReal) -> u32 {
        self.prec().max(other.prec())
    }

    pub fn add_ref(&self, other: &ErrReal) -> ErrReal {
        let mid = Float::with_val(self.out_prec(other), &self.mid + &other.mid);
        Self::finish(mid, radd(&self.rad, &other.rad))
    }

    pub fn sub_ref(&self, other: &ErrReal) -> ErrReal {
        let mid = Float::with_val(self.out_prec(other), &self.mid - &other.mid);
        Self::finish(mid, radd(&self.rad, &other.rad))
    }

    pub fn mul_ref(&self, other: &ErrReal) -> ErrReal {
        let mid = Float::with_val(self.out_prec(other), &self.mid * &other.mid);
        let a = rmul(&mag(&self.mid), &other.rad);
        let b = rmul(&mag(&other.mid), &self.rad);
        let c = rmul(&self.rad, &other.rad);
        Self::finish(mid, radd(&radd(&a, &b), &c))
    }

    pub fn div_ref(&self, other: &ErrReal) -> ErrReal {
        let prec = self.out_prec(other);
        let b_abs = down(other.mid.abs_ref());
        let b_low = down(&b_abs - &other.rad);
        if !(b_low > 0) || !self.is_finite() || !other.is_finite() {
            return ErrReal::indeterminate(prec);
        }
        let mid = Float::with_val(prec, &self.mid / &other.mid);
        let num = radd(&rmul(&mag(&self.mid), &other.rad), &rmul(&self.rad, &mag(&other.mid)));
        let den = down(&b_abs * &b_low);
        Self::finish(mid, up(&num / &den))
    }

    pub fn mul_i64(&self, k: i64) -> ErrReal {
        let mid = Float::with_val(self.prec(), &self.mid * k);
        let prop = up(&self.rad * k.unsigned_abs());
        Self::finish(mid, prop)
    }

    pub fn div_i64(&self, k: i64) -> ErrReal {
        self / &ErrReal::from_i64(k, self.prec())
    }

    pub fn sqr(&self) -> ErrReal {
        self.mul_ref(self)
    }

    pub fn powi(&self, n: u32) -> ErrReal {
        let mut acc = ErrReal::one(self.prec());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    pub fn abs(&self) -> ErrReal {
        ErrReal { mid: self.mid.clone().abs(), rad: self.rad.clone() }
    }

    pub fn sqrt(&self) -> ErrReal {
        let prec = self.prec();
        if !self.is_finite() {
            return ErrReal::indeterminate(prec);
        }
        let lo = self.lower();
        if lo > 0 {
            let mid = Float::with_val(prec, self.mid.sqrt_ref());
            let den = down(lo.sqrt_ref());
            Self::finish(mid, up(&self.rad / &den))
        } else {
            let hi = self.upper();
            if hi < 0 {
                return ErrReal::indeterminate(prec);
            }
            // The enclosure touches zero: sqrt lies in [0, sqrt(hi)].
            let s = up(hi.sqrt_ref());
            let half = Float::with_val(prec, &s / 2u32);
            let rad = radd(&up(&s / 2u32), &rounding(&half));
            ErrReal { mid: half, rad }
        }
    }

    pub fn exp(&self) -> ErrReal {
        let prec = self.prec();
        if !self.is_finite() {
            return ErrReal::indeterminate(prec);
        }
        let mid = Float::with_val(prec, self.mid.exp_ref());
        let bound = up(self.upper().exp_ref());
        Self::finish(mid, rmul(&self.rad, &bound))
    }

    pub fn ln(&self) -> ErrReal {
        let prec = self.prec();
        let lo = self.lower();
        if !(lo > 0) || !self.is_finite() {
            return ErrReal::indeterminate(prec);
        }
        let mid = Float::with_val(prec, self.mid.ln_ref());
        Self::finish(mid, up(&self.rad / &lo))
    }

    /// `self^(num/den)` for a positive base.
    pub fn pow_ratio(&self, num: i64, den: i64) -> ErrReal {
        (self.ln().mul_i64(num).div_i64(den)).exp()
    }

    pub fn sin_cos(&self) -> (ErrReal, ErrReal) {
        let prec = self.prec();
        if !self.is_finite() {
            return (ErrReal::indeterminate(prec), ErrReal::indeterminate(prec));
        }
        let mut s = Float::new(prec);
        let mut c = Float::new(prec);
        (&mut s, &mut c).assign_round(self.mid.sin_cos_ref(), Round::Nearest);
        (Self::finish(s, self.rad.clone()), Self::finish(c, self.rad.clone()))
    }

    pub fn sin(&self) -> ErrReal {
        self.sin_cos().0
    }

    pub fn cos(&self) -> ErrReal {
        self.sin_cos().1
    }
}

impl fmt::Debug for ErrReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:.3e}", self.mid.to_string_radix(10, Some(25)), self.rad_f64())
    }
}

impl fmt::Display for ErrReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        write!(f, "{} ± {:.3e}", self.mid.to_string_radix(10, Some(digits)), self.rad_f64())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $impl_fn:ident) => {
        impl $trait<&ErrReal> for &ErrReal {
            type Output = ErrReal;
            fn $method(self, rhs: &ErrReal) -> ErrReal {
                self.$impl_fn(rhs)
            }
        }
        impl $trait<ErrReal> for ErrReal {
            type Output = ErrReal;
            fn $method(self, rhs: ErrReal) -> ErrReal {
                self.$impl_fn(&rhs)
            }
        }
        impl $trait<&ErrReal> for ErrReal {
            type Output = ErrReal;
            fn $method(self, rhs: &ErrReal) -> ErrReal {
                self.$impl_fn(rhs)
            }
        }
        impl $trait<ErrReal> for &ErrReal {
            type Output = ErrReal;
            fn $method(self, rhs: ErrReal) -> ErrReal {
                self.$impl_fn(&rhs)
            }
        }
    };
}

binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);
binop!(Div, div, div_ref);

impl Neg for ErrReal {
    type Output = ErrReal;
    fn neg(self) -> ErrReal {
        ErrReal { mid: -self.mid, rad: self.rad }
    }
}

impl Neg for &ErrReal {
    type Output = ErrReal;
    fn neg(self) -> ErrReal {
        ErrReal { mid: Float::with_val(self.prec(), -&self.mid), rad: self.rad.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    #[test]
    fn exact_integers_have_zero_radius() {
        let x = ErrReal::from_i64(12345, P);
        assert!(x.rad().is_zero());
        assert_eq!(x.sign(), Sign::Positive);
    }

    #[test]
    fn third_times_three_contains_one() {
        let third = ErrReal::from_ratio(1, 3, P);
        assert!(!third.rad().is_zero());
        let one = third.mul_i64(3);
        assert!(one.overlaps(&ErrReal::one(P)));
        assert!(one.rad_f64() < 1e-37);
    }

    #[test]
    fn division_by_interval_with_zero_is_indeterminate() {
        let z = ErrReal::from_parts(Float::with_val(P, 1e-30), Float::with_val(RAD_PREC, 1e-20));
        let q = ErrReal::one(P) / &z;
        assert!(!q.is_finite());
        assert_eq!(q.sign(), Sign::Unknown);
    }

    #[test]
    fn sign_is_unknown_inside_radius() {
        let x = ErrReal::from_parts(Float::with_val(P, 1e-10), Float::with_val(RAD_PREC, 1e-9));
        assert_eq!(x.sign(), Sign::Unknown);
        assert_eq!((-x.clone()).sign(), Sign::Unknown);
        let y = ErrReal::from_parts(Float::with_val(P, -1e-8), Float::with_val(RAD_PREC, 1e-9));
        assert_eq!(y.sign(), Sign::Negative);
    }

    #[test]
    fn exp_ln_roundtrip() {
        let x = ErrReal::from_ratio(7, 3, P);
        let y = x.ln().exp();
        assert!(y.overlaps(&x));
        assert!(y.rad_f64() < 1e-35);
    }

    #[test]
    fn sqrt_of_interval_touching_zero() {
        let x = ErrReal::from_parts(Float::with_val(P, 1e-40), Float::with_val(RAD_PREC, 1e-30));
        let s = x.sqrt();
        assert!(s.is_finite());
        assert!(s.lower() <= 0.0);
        assert!(s.upper() >= 1e-20);
        let neg = ErrReal::from_i64(-4, P).sqrt();
        assert!(!neg.is_finite());
    }

    #[test]
    fn sin_cos_pythagoras() {
        let x = ErrReal::from_ratio(22, 7, P);
        let (s, c) = x.sin_cos();
        let one = s.sqr() + c.sqr();
        assert!(one.overlaps(&ErrReal::one(P)));
    }

    #[test]
    fn le_within_accepts_equality() {
        let a = ErrReal::from_i64(1, P);
        assert!(a.le_within(&a));
        assert!(!ErrReal::from_i64(2, P).le_within(&a));
    }
}
