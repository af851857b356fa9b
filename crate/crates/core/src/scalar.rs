//! Coefficient fields: exact rationals, real doubles, complex doubles.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldTag {
    ExactRational,
    RealFloat,
    ComplexFloat,
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const TAG: FieldTag;
    fn from_rational(q: &BigRational) -> Self;
    fn from_i64(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }
    fn to_complex(&self) -> Complex64;
    fn modulus(&self) -> f64 {
        self.to_complex().norm()
    }
    /// `self^alpha`, or `None` when the result leaves the field.
    fn pow_scalar(&self, alpha: &Self) -> Option<Self>;
    fn powi(&self, n: i64) -> Self {
        let mut base = if n < 0 { Self::one() / self.clone() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

pub trait RealScalar: Scalar + PartialOrd {
    fn to_f64(&self) -> f64;
    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl Scalar for BigRational {
    const TAG: FieldTag = FieldTag::ExactRational;
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(rat_to_f64(self), 0.0)
    }
    fn pow_scalar(&self, alpha: &Self) -> Option<Self> {
        if alpha.is_integer() {
            let n = alpha.to_integer().to_i64()?;
            if self.is_zero() && n < 0 {
                return None;
            }
            return Some(Scalar::powi(self, n));
        }
        if self.is_one() {
            return Some(Self::one());
        }
        None
    }
}

impl RealScalar for BigRational {
    fn to_f64(&self) -> f64 {
        rat_to_f64(self)
    }
}

impl Scalar for f64 {
    const TAG: FieldTag = FieldTag::RealFloat;
    fn from_rational(q: &BigRational) -> Self {
        rat_to_f64(q)
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
    fn pow_scalar(&self, alpha: &Self) -> Option<Self> {
        if alpha.fract() == 0.0 {
            return Some(f64::powi(*self, *alpha as i32));
        }
        if *self < 0.0 {
            return None;
        }
        Some(self.powf(*alpha))
    }
}

impl RealScalar for f64 {
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Complex64 {
    const TAG: FieldTag = FieldTag::ComplexFloat;
    fn from_rational(q: &BigRational) -> Self {
        Complex64::new(rat_to_f64(q), 0.0)
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn pow_scalar(&self, alpha: &Self) -> Option<Self> {
        if alpha.im == 0.0 && alpha.re.fract() == 0.0 {
            return Some(Complex64::powi(self, alpha.re as i32));
        }
        Some(self.powc(*alpha))
    }
}

/// Correctly scaled conversion that survives huge numerators and denominators.
pub fn rat_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = nb - db - 60;
    let (num, den) = if shift > 0 {
        (q.numer().clone(), q.denom().clone() << (shift as usize))
    } else {
        (q.numer().clone() << ((-shift) as usize), q.denom().clone())
    };
    let ratio = (num / den).to_f64().unwrap_or(f64::NAN);
    ratio * 2f64.powi(shift as i32)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact f64 to rational (every finite double is dyadic).
pub fn f64_to_rat(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// Formats `num/den`, or just `num` for integers.
pub fn rat_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().ok()?;
        let d: BigInt = b.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else if let Ok(n) = s.parse::<BigInt>() {
        Some(BigRational::from_integer(n))
    } else {
        let x: f64 = s.parse().ok()?;
        f64_to_rat(x)
    }
}

/// Best rational approximation with denominator at most `max_den`, if within `tol`.
pub fn snap_rational(x: f64, max_den: i64, tol: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    for d in 1..=max_den {
        let n = (x * d as f64).round();
        if (n / d as f64 - x).abs() <= tol {
            return Some(rat(n as i64, d));
        }
    }
    None
}

/// Real power exponent kept exact when it was given as a rational.
#[derive(Debug, Clone, PartialEq)]
pub struct Power {
    pub exact: Option<BigRational>,
    pub value: f64,
}

impl Power {
    pub fn rational(q: BigRational) -> Self {
        let value = rat_to_f64(&q);
        Power { exact: Some(q), value }
    }
    pub fn int(n: i64) -> Self {
        Self::rational(int(n))
    }
    pub fn float(x: f64) -> Self {
        Power { exact: None, value: x }
    }
    pub fn as_integer(&self) -> Option<i64> {
        match &self.exact {
            Some(q) if q.is_integer() => q.to_integer().to_i64(),
            Some(_) => None,
            None if self.value.fract() == 0.0 && self.value.abs() < 1e15 => Some(self.value as i64),
            None => None,
        }
    }
    pub fn is_zero(&self) -> bool {
        self.value == 0.0 && self.exact.as_ref().is_none_or(|q| q.is_zero())
    }
    pub fn to_field<S: Scalar>(&self) -> S {
        match &self.exact {
            Some(q) => S::from_rational(q),
            None => S::from_rational(&f64_to_rat(self.value).unwrap_or_else(BigRational::zero)),
        }
    }
    pub fn label(&self) -> String {
        match &self.exact {
            Some(q) => rat_string(q),
            None => format!("{}", self.value),
        }
    }
    pub fn is_negative(&self) -> bool {
        match &self.exact {
            Some(q) => q.is_negative(),
            None => self.value < 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn huge_rationals_convert() {
        let big = BigInt::from(10u32).pow(400);
        let q = BigRational::new(big.clone() * BigInt::from(3), big * BigInt::from(7));
        assert!((rat_to_f64(&q) - 3.0 / 7.0).abs() < 1e-15);
        let tiny = BigRational::new(BigInt::from(10u32).pow(400), BigInt::from(10u32).pow(700));
        assert!((rat_to_f64(&tiny) / 1e-300 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/4"), Some(rat(3, 4)));
        assert_eq!(parse_rational("-2"), Some(int(-2)));
        assert_eq!(parse_rational("0.5"), Some(rat(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn snapping() {
        assert_eq!(snap_rational(0.3333333333333, 16, 1e-9), Some(rat(1, 3)));
        assert_eq!(snap_rational(std::f64::consts::PI, 16, 1e-9), None);
    }

    #[test]
    fn exact_powers() {
        assert_eq!(rat(2, 3).pow_scalar(&int(-2)), Some(rat(9, 4)));
        assert_eq!(rat(2, 3).pow_scalar(&rat(1, 2)), None);
        assert_eq!(int(1).pow_scalar(&rat(1, 2)), Some(int(1)));
    }
}
