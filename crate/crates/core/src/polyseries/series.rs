//! Total-degree truncated power series.

use std::collections::BTreeMap;



use super::multipoly::{Exponent, MultiPoly};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<S> {
    arity: usize,
    order: u32,
    terms: BTreeMap<Exponent, S>,
}

impl<S: Scalar> TruncatedSeries<S> {
    pub fn zero(arity: usize, order: u32) -> Self {
        TruncatedSeries { arity, order, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, order: u32, c: S) -> Self {
        let mut s = Self::zero(arity, order);
        s.add_term(Exponent::zero(arity), c);
        s
    }

    pub fn one(arity: usize, order: u32) -> Self {
        Self::constant(arity, order, S::one())
    }

    /// Truncates a polynomial with nonnegative exponents.
    pub fn from_poly(p: &MultiPoly<S>, order: u32) -> Result<Self> {
        let mut s = Self::zero(p.arity(), order);
        for (e, c) in p.terms() {
            if !e.is_nonnegative() {
                return Err(Error::Domain("series need nonnegative exponents".into()));
            }
            s.add_term(e.clone(), c.clone());
        }
        Ok(s)
    }

    pub fn add_term(&mut self, e: Exponent, c: S) {
        if c.is_zero() || e.degree() > self.order as i64 {
            return;
        }
        debug_assert!(e.is_nonnegative());
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

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[i32]) -> S {
        self.terms.get(&Exponent(e.to_vec())).cloned().unwrap_or_else(S::zero)
    }

    pub fn constant_term(&self) -> S {
        self.coeff(&vec![0; self.arity])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        TruncatedSeries {
            arity: self.arity,
            order,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.degree() <= order as i64)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn to_poly(&self) -> MultiPoly<S> {
        MultiPoly::from_terms(self.arity, self.terms.iter().map(|(e, c)| (e.0.clone(), c.clone())))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity);
        let mut s = self.truncate(other.order);
        for (e, c) in &other.terms {
            s.add_term(e.clone(), c.clone());
        }
        s
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut s = Self::zero(self.arity, self.order);
        for (e, v) in &self.terms {
            s.add_term(e.clone(), v.clone() * c.clone());
        }
        s
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity);
        let order = self.order.min(other.order);
        let mut s = Self::zero(self.arity, order);
        for (a, x) in &self.terms {
            let da = a.degree();
            for (b, y) in &other.terms {
                if da + b.degree() <= order as i64 {
                    s.add_term(a.add(b), x.clone() * y.clone());
                }
            }
        }
        s
    }

    /// Lowest total degree carrying a nonzero coefficient.
    pub fn vanishing_degree(&self) -> Result<u32> {
        self.terms
            .keys()
            .map(|e| e.degree() as u32)
            .min()
            .ok_or_else(|| Error::Degenerate("series vanishes to its truncation order".into()))
    }

    pub fn homogeneous_part(&self) -> Result<MultiPoly<S>> {
        let d = self.vanishing_degree()? as i64;
        Ok(MultiPoly::from_terms(
            self.arity,
            self.terms.iter().filter(|(e, _)| e.degree() == d).map(|(e, c)| (e.0.clone(), c.clone())),
        ))
    }

    /// `(c(1+u))^alpha = c^alpha * sum binom(alpha, n) u^n`.
    pub fn pow_real(&self, alpha: &S) -> Result<Self> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::NonUnit);
        }
        if alpha.is_zero() {
            return Ok(Self::one(self.arity, self.order));
        }
        let lead = c
            .pow_scalar(alpha)
            .ok_or_else(|| Error::Unsupported("constant term power leaves the field".into()))?;
        let mut u = self.scale(&(S::one() / c));
        u.add_term(Exponent::zero(self.arity), -S::one());
        let mut acc = Self::one(self.arity, self.order);
        let mut upow = Self::one(self.arity, self.order);
        let mut binom = S::one();
        for n in 1..=self.order {
            upow = upow.mul(&u);
            if upow.is_zero() {
                break;
            }
            binom = binom * (alpha.clone() - S::from_i64(n as i64 - 1)) / S::from_i64(n as i64);
            acc = acc.add(&upow.scale(&binom));
        }
        Ok(acc.scale(&lead))
    }

    pub fn pow_int(&self, n: i64) -> Result<Self> {
        if n >= 0 {
            let mut acc = Self::one(self.arity, self.order);
            for _ in 0..n {
                acc = acc.mul(self);
            }
            Ok(acc)
        } else {
            self.pow_real(&S::from_i64(n))
        }
    }

    pub fn eval(&self, y: &[S]) -> Result<S> {
        self.to_poly().eval(y)
    }
}

/// Taylor series of `y -> p(Z_1 e^{y_1}, ..., Z_d e^{y_d})` at `y = 0`.
pub fn log_compose_taylor<S: Scalar>(p: &MultiPoly<S>, center: &[S], order: u32) -> Result<TruncatedSeries<S>> {
    let d = p.arity();
    if center.len() != d {
        return Err(Error::Domain("center length differs from arity".into()));
    }
    if center.iter().any(|z| z.is_zero()) {
        return Err(Error::Domain("log-composition needs nonzero center coordinates".into()));
    }
    let mut inv_fact = vec![S::one()];
    for k in 1..=order {
        let prev = inv_fact[k as usize - 1].clone();
        inv_fact.push(prev / S::from_i64(k as i64));
    }
    let mut out = TruncatedSeries::zero(d, order);
    for (m, c) in p.terms() {
        let mut zm = c.clone();
        for (i, &k) in m.0.iter().enumerate() {
            if k != 0 {
                zm = zm * center[i].powi(k as i64);
            }
        }
        let mut lin = TruncatedSeries::zero(d, order);
        for (i, &k) in m.0.iter().enumerate() {
            lin.add_term(Exponent::unit(d, i), S::from_i64(k as i64));
        }
        let mut power = TruncatedSeries::one(d, order);
        out = out.add(&power.scale(&zm));
        for k in 1..=order {
            power = power.mul(&lin);
            if power.is_zero() {
                break;
            }
            out = out.add(&power.scale(&(zm.clone() * inv_fact[k as usize].clone())));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use num_rational::BigRational;

    type S = TruncatedSeries<BigRational>;

    fn one_var(coeffs: &[BigRational], order: u32) -> S {
        let mut s = S::zero(1, order);
        for (i, c) in coeffs.iter().enumerate() {
            s.add_term(Exponent(vec![i as i32]), c.clone());
        }
        s
    }

    #[test]
    fn product_truncates() {
        let mut a = S::zero(1, 2);
        a.add_term(Exponent(vec![0]), int(1));
        a.add_term(Exponent(vec![1]), int(1));
        let mut b = S::zero(1, 2);
        b.add_term(Exponent(vec![0]), int(1));
        b.add_term(Exponent(vec![1]), int(-1));
        let p = a.mul(&b);
        assert_eq!(p, one_var(&[int(1), int(0), int(-1)], 2));
    }

    #[test]
    fn inverse_square_root() {
        let a = one_var(&[int(1), int(-4)], 2);
        let r = a.pow_real(&rat(-1, 2)).unwrap();
        assert_eq!(r, one_var(&[int(1), int(2), int(6)], 2));
        let sq = r.mul(&r);
        let inv = a.pow_int(-1).unwrap();
        assert_eq!(sq, inv);
    }

    #[test]
    fn zeroth_power_and_nonunit() {
        let a = one_var(&[int(3), int(5)], 3);
        assert_eq!(a.pow_real(&int(0)).unwrap(), S::one(1, 3));
        let b = one_var(&[int(0), int(5)], 3);
        assert_eq!(b.pow_real(&rat(1, 2)), Err(Error::NonUnit));
    }

    #[test]
    fn aztec_log_series() {
        let q = MultiPoly::from_terms(
            3,
            [
                (vec![0, 0, 0], int(1)),
                (vec![1, 0, 1], rat(-1, 2)),
                (vec![-1, 0, 1], rat(-1, 2)),
                (vec![0, 1, 1], rat(-1, 2)),
                (vec![0, -1, 1], rat(-1, 2)),
                (vec![0, 0, 2], int(1)),
            ],
        );
        let s = log_compose_taylor(&q, &[int(1), int(1), int(1)], 2).unwrap();
        let expect = MultiPoly::from_terms(
            3,
            [(vec![0, 0, 2], int(1)), (vec![2, 0, 0], rat(-1, 2)), (vec![0, 2, 0], rat(-1, 2))],
        );
        assert_eq!(s.to_poly(), expect);
        assert_eq!(s.vanishing_degree().unwrap(), 2);
    }

    #[test]
    fn constant_log_series() {
        let p = MultiPoly::constant(2, rat(5, 3));
        let s = log_compose_taylor(&p, &[int(2), rat(1, 7)], 4).unwrap();
        assert_eq!(s, TruncatedSeries::constant(2, 4, rat(5, 3)));
        assert!(log_compose_taylor(&p, &[int(0), int(1)], 2).is_err());
    }
}
