//! Sparse multivariate Laurent polynomials.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Zero;


use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Exponent vector ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Exponent(pub Vec<i32>);

impl Exponent {
    pub fn zero(arity: usize) -> Self {
        Exponent(vec![0; arity])
    }
    pub fn unit(arity: usize, i: usize) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        Exponent(e)
    }
    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }
    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }
    pub fn add(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
    pub fn sub(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
    pub fn dot(&self, v: &[f64]) -> f64 {
        self.0.iter().zip(v).map(|(&e, x)| e as f64 * x).sum()
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly<S> {
    arity: usize,
    terms: BTreeMap<Exponent, S>,
}

impl<S: Scalar> MultiPoly<S> {
    pub fn zero(arity: usize) -> Self {
        assert!(arity > 0, "arity must be positive");
        MultiPoly { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: S) -> Self {
        Self::monomial(arity, vec![0; arity], c)
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, S::one())
    }

    pub fn var(arity: usize, i: usize) -> Self {
        Self::monomial(arity, Exponent::unit(arity, i).0, S::one())
    }

    pub fn monomial(arity: usize, exps: Vec<i32>, c: S) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(Exponent(exps), c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<i32>, S)>>(arity: usize, terms: I) -> Self {
        let mut p = Self::zero(arity);
        for (e, c) in terms {
            assert_eq!(e.len(), arity, "exponent length must equal arity");
            p.add_term(Exponent(e), c);
        }
        p
    }

    pub fn add_term(&mut self, e: Exponent, c: S) {
        debug_assert_eq!(e.0.len(), self.arity);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[i32]) -> S {
        self.terms.get(&Exponent(e.to_vec())).cloned().unwrap_or_else(S::zero)
    }

    pub fn constant_term(&self) -> S {
        self.coeff(&vec![0; self.arity])
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut p = Self::zero(self.arity);
        for (e, v) in &self.terms {
            p.add_term(e.clone(), v.clone() * c.clone());
        }
        p
    }

    pub fn mul_monomial(&self, shift: &[i32]) -> Self {
        let s = Exponent(shift.to_vec());
        MultiPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.add(&s), c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.arity);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> MultiPoly<T> {
        let mut p = MultiPoly::zero(self.arity);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), f(c));
        }
        p
    }

    pub fn to_complex(&self) -> MultiPoly<Complex64> {
        self.map_coeffs(|c| c.to_complex())
    }

    /// Applies an exponent map to every term (used by log-affine changes of variables).
    pub fn map_exponents(&self, f: impl Fn(&[i32]) -> Vec<i32>) -> Self {
        let mut p = Self::zero(self.arity);
        for (e, c) in &self.terms {
            p.add_term(Exponent(f(&e.0)), c.clone());
        }
        p
    }

    pub fn diff(&self, i: usize) -> Self {
        assert!(i < self.arity, "variable index out of range");
        let mut p = Self::zero(self.arity);
        for (e, c) in &self.terms {
            let k = e.0[i];
            if k == 0 {
                continue;
            }
            let mut f = e.0.clone();
            f[i] -= 1;
            p.add_term(Exponent(f), c.clone() * S::from_i64(k as i64));
        }
        p
    }

    /// Euler operator `Z_i d/dZ_i`.
    pub fn euler(&self, i: usize) -> Self {
        assert!(i < self.arity, "variable index out of range");
        let mut p = Self::zero(self.arity);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), c.clone() * S::from_i64(e.0[i] as i64));
        }
        p
    }

    pub fn min_exponents(&self) -> Option<Vec<i32>> {
        let mut it = self.terms.keys();
        let first = it.next()?.0.clone();
        Some(it.fold(first, |acc, e| acc.iter().zip(&e.0).map(|(a, b)| *a.min(b)).collect()))
    }

    pub fn max_exponents(&self) -> Option<Vec<i32>> {
        let mut it = self.terms.keys();
        let first = it.next()?.0.clone();
        Some(it.fold(first, |acc, e| acc.iter().zip(&e.0).map(|(a, b)| *a.max(b)).collect()))
    }

    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|e| e.degree()).max()
    }

    pub fn is_homogeneous(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(|e| e.degree());
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    pub fn has_negative_exponents(&self) -> bool {
        self.terms.keys().any(|e| !e.is_nonnegative())
    }

    /// Evaluation in the coefficient field.
    pub fn eval(&self, point: &[S]) -> Result<S> {
        self.check_point(point.len())?;
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if k < 0 && point[i].is_zero() {
                    return Err(Error::Domain(format!("variable {i} is zero with exponent {k}")));
                }
                t = t * point[i].powi(k as i64);
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Result<Complex64> {
        self.check_point(point.len())?;
        let mut acc = Complex64::zero();
        for (e, c) in &self.terms {
            let mut t = c.to_complex();
            for (i, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if k < 0 && point[i].is_zero() {
                    return Err(Error::Domain(format!("variable {i} is zero with exponent {k}")));
                }
                t *= point[i].powi(k);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Compensated complex evaluation (Neumaier summation per component).
    pub fn eval_complex_compensated(&self, point: &[Complex64]) -> Result<Complex64> {
        self.check_point(point.len())?;
        let (mut sr, mut cr, mut si, mut ci) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for (e, c) in &self.terms {
            let mut t = c.to_complex();
            for (i, &k) in e.0.iter().enumerate() {
                if k != 0 {
                    if k < 0 && point[i].is_zero() {
                        return Err(Error::Domain(format!("variable {i} is zero with exponent {k}")));
                    }
                    t *= point[i].powi(k);
                }
            }
            neumaier(&mut sr, &mut cr, t.re);
            neumaier(&mut si, &mut ci, t.im);
        }
        Ok(Complex64::new(sr + cr, si + ci))
    }

    fn check_point(&self, n: usize) -> Result<()> {
        if n != self.arity {
            return Err(Error::Domain(format!("point has length {n}, arity is {}", self.arity)));
        }
        Ok(())
    }
}

fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl<S: Scalar> Add for &MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn add(self, rhs: &MultiPoly<S>) -> MultiPoly<S> {
        assert_eq!(self.arity, rhs.arity);
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }
}

impl<S: Scalar> Sub for &MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn sub(self, rhs: &MultiPoly<S>) -> MultiPoly<S> {
        assert_eq!(self.arity, rhs.arity);
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(e.clone(), -c.clone());
        }
        p
    }
}

impl<S: Scalar> Mul for &MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn mul(self, rhs: &MultiPoly<S>) -> MultiPoly<S> {
        assert_eq!(self.arity, rhs.arity);
        let mut p = MultiPoly::zero(self.arity);
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                p.add_term(a.add(b), x.clone() * y.clone());
            }
        }
        p
    }
}

impl<S: Scalar> Neg for &MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn neg(self) -> MultiPoly<S> {
        self.scale(&-S::one())
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl<S: Scalar> $tr for MultiPoly<S> {
            type Output = MultiPoly<S>;
            fn $m(self, rhs: MultiPoly<S>) -> MultiPoly<S> {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl<S: Scalar + fmt::Display> fmt::Display for MultiPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &k) in e.0.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*x{i}")?,
                    _ => write!(f, "*x{i}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

impl<S: Scalar> MultiPoly<S> {
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }
}
