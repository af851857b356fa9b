//! Coefficient recurrences over a down-closed index region.
//!
//! With `Q_j = c_j (1 + u_j)` and `G = prod (1 + u_j)^{-s_j}`:
//! integer powers solve `D G = 1` with `D = prod (1 + u_j)^{s_j}`;
//! real powers solve `D * X_i dG/dX_i = -G * W_i` with
//! `D = prod (1 + u_j)` and `W_i = sum_j s_j (X_i du_j/dX_i) prod_{k != j} (1 + u_k)`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::normalize::NormalizedSpec;
use crate::error::{Error, Result};
use crate::polyseries::MultiPoly;
use crate::scalar::{rat_string, Power, Scalar};

const MAX_REGION: usize = 60_000_000;

/// Index region in series coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Region {
    /// `0 <= k_i <= upper_i`.
    Box(Vec<u32>),
    /// `|k| <= order`.
    Simplex(u32),
}

#[derive(Debug, Clone)]
pub(crate) struct Layout {
    pub upper: Vec<u32>,
    strides: Vec<usize>,
    pub len: usize,
    simplex: Option<u32>,
}

impl Layout {
    pub fn new(region: &Region, d: usize) -> Result<Self> {
        let (upper, simplex) = match region {
            Region::Box(u) => {
                if u.len() != d {
                    return Err(Error::Domain("box bound length differs from arity".into()));
                }
                (u.clone(), None)
            }
            Region::Simplex(n) => (vec![*n; d], Some(*n)),
        };
        let mut strides = vec![0; d];
        let mut len = 1usize;
        for i in (0..d).rev() {
            strides[i] = len;
            len = len
                .checked_mul(upper[i] as usize + 1)
                .filter(|&l| l <= MAX_REGION)
                .ok_or_else(|| Error::Unsupported(format!("coefficient region larger than {MAX_REGION} entries")))?;
        }
        Ok(Layout { upper, strides, len, simplex })
    }

    pub fn decode(&self, mut idx: usize, k: &mut [u32]) {
        for (i, s) in self.strides.iter().enumerate() {
            k[i] = (idx / s) as u32;
            idx %= s;
        }
    }

    pub fn encode(&self, k: &[u32]) -> usize {
        k.iter().zip(&self.strides).map(|(&a, &s)| a as usize * s).sum()
    }

    pub fn contains(&self, k: &[u32]) -> bool {
        k.iter().zip(&self.upper).all(|(a, b)| a <= b)
            && self.simplex.is_none_or(|n| k.iter().map(|&x| x as u64).sum::<u64>() <= n as u64)
    }

    fn offset(&self, e: &[u32]) -> usize {
        self.encode(e)
    }
}

#[derive(Debug, Clone)]
struct Shift<T> {
    e: Vec<u32>,
    offset: usize,
    coeff: T,
}

fn shifts<T>(layout: &Layout, items: Vec<(Vec<u32>, T)>) -> Vec<Shift<T>> {
    items
        .into_iter()
        .map(|(e, coeff)| Shift { offset: layout.offset(&e), e, coeff })
        .collect()
}

#[inline]
fn fits(k: &[u32], e: &[u32]) -> bool {
    k.iter().zip(e).all(|(a, b)| a >= b)
}

/// Constant factors `base^{exponent}` that stay outside the field.
#[derive(Debug, Clone, PartialEq)]
pub struct Prefactor<S> {
    pub parts: Vec<(S, Power)>,
}

impl<S: Scalar> Prefactor<S> {
    pub fn unit() -> Self {
        Prefactor { parts: vec![] }
    }

    pub fn is_unit(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn value(&self) -> Complex64 {
        self.parts.iter().fold(Complex64::one(), |acc, (b, p)| acc * b.to_complex().powf(p.value))
    }
}

impl Prefactor<BigRational> {
    pub fn label(&self) -> String {
        self.parts
            .iter()
            .map(|(b, p)| format!("({})^({})", rat_string(b), p.label()))
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Coefficients of the normalized series at the requested indices.
#[derive(Debug, Clone)]
pub struct EngineOutput<S> {
    pub values: Vec<(Vec<u32>, S)>,
    pub prefactor: Prefactor<S>,
}

pub enum Wanted<'a> {
    All,
    Only(&'a [Vec<u32>]),
}

fn units<S: Scalar>(ns: &NormalizedSpec<S>) -> (Vec<S>, Vec<MultiPoly<S>>) {
    let d = ns.arity();
    ns.factors
        .iter()
        .map(|f| {
            let c = f.poly.constant_term();
            let mut u = f.poly.scale(&(S::one() / c.clone()));
            u.add_term(crate::polyseries::Exponent::zero(d), -S::one());
            (c, u)
        })
        .unzip()
}

fn one_plus<S: Scalar>(u: &MultiPoly<S>) -> MultiPoly<S> {
    u + &MultiPoly::one(u.arity())
}

struct Recurrence<S> {
    integer_mode: bool,
    numerator: MultiPoly<S>,
    d_poly: MultiPoly<S>,
    w_polys: Vec<MultiPoly<S>>,
}

fn recurrence<S: Scalar>(ns: &NormalizedSpec<S>, us: &[MultiPoly<S>]) -> Recurrence<S> {
    let d = ns.arity();
    let integer_mode = ns.factors.iter().all(|f| f.power.as_integer().is_some());
    if integer_mode {
        let mut num = ns.numerator.clone();
        let mut den = MultiPoly::one(d);
        for (f, u) in ns.factors.iter().zip(us) {
            let n = f.power.as_integer().unwrap();
            let base = one_plus(u).pow(n.unsigned_abs() as u32);
            if n > 0 {
                den = &den * &base;
            } else {
                num = &num * &base;
            }
        }
        return Recurrence { integer_mode, numerator: num, d_poly: den, w_polys: vec![] };
    }
    let shifted: Vec<MultiPoly<S>> = us.iter().map(one_plus).collect();
    let d_poly = shifted.iter().fold(MultiPoly::one(d), |acc, p| &acc * p);
    let w_polys = (0..d)
        .map(|i| {
            let mut w = MultiPoly::zero(d);
            for (j, (f, u)) in ns.factors.iter().zip(us).enumerate() {
                let mut t = u.euler(i).scale(&f.power.to_field::<S>());
                for (k, p) in shifted.iter().enumerate() {
                    if k != j {
                        t = &t * p;
                    }
                }
                w = &w + &t;
            }
            w
        })
        .collect();
    Recurrence { integer_mode, numerator: ns.numerator.clone(), d_poly, w_polys }
}

fn nonneg(e: &crate::polyseries::Exponent) -> Vec<u32> {
    e.0.iter().map(|&x| x as u32).collect()
}

fn wanted_indices(layout: &Layout, wanted: &Wanted) -> Result<Vec<Vec<u32>>> {
    let d = layout.upper.len();
    match wanted {
        Wanted::All => {
            let mut out = Vec::new();
            let mut k = vec![0u32; d];
            for idx in 0..layout.len {
                layout.decode(idx, &mut k);
                if layout.contains(&k) {
                    out.push(k.clone());
                }
            }
            Ok(out)
        }
        Wanted::Only(ks) => {
            for k in ks.iter() {
                if !layout.contains(k) {
                    return Err(Error::Domain("requested index outside the computed region".into()));
                }
            }
            Ok(ks.to_vec())
        }
    }
}

fn all_exps<S: Scalar>(polys: &[&MultiPoly<S>]) -> Vec<Vec<u32>> {
    let mut set: Vec<Vec<u32>> = polys
        .iter()
        .flat_map(|p| p.terms().map(|(e, _)| nonneg(e)))
        .filter(|e| e.iter().any(|&x| x > 0))
        .collect();
    set.sort();
    set.dedup();
    set
}

/// Direct recurrence in the coefficient field.
pub fn run_field<S: Scalar>(ns: &NormalizedSpec<S>, region: &Region, wanted: Wanted) -> Result<EngineOutput<S>> {
    let d = ns.arity();
    let layout = Layout::new(region, d)?;
    let (cs, us) = units(ns);
    let rec = recurrence(ns, &us);
    let exps = all_exps(&[&rec.d_poly]);
    let exps_w = all_exps(&rec.w_polys.iter().collect::<Vec<_>>());
    let mut union = exps.clone();
    union.extend(exps_w);
    union.sort();
    union.dedup();
    let ts = shifts(
        &layout,
        union
            .into_iter()
            .map(|e| {
                let ee: Vec<i32> = e.iter().map(|&x| x as i32).collect();
                let w: Vec<S> = rec.w_polys.iter().map(|w| w.coeff(&ee)).collect();
                (e, (rec.d_poly.coeff(&ee), w))
            })
            .collect(),
    );

    let mut g: Vec<S> = vec![S::zero(); layout.len];
    let mut k = vec![0u32; d];
    for idx in 0..layout.len {
        layout.decode(idx, &mut k);
        if !layout.contains(&k) {
            continue;
        }
        if idx == 0 {
            g[0] = S::one();
            continue;
        }
        let mut acc = S::zero();
        if rec.integer_mode {
            for t in &ts {
                if !t.coeff.0.is_zero() && fits(&k, &t.e) {
                    acc = acc + t.coeff.0.clone() * g[idx - t.offset].clone();
                }
            }
            g[idx] = -acc;
        } else {
            let i = argmax(&k);
            for t in &ts {
                if fits(&k, &t.e) {
                    let m = t.coeff.0.clone() * S::from_i64(k[i] as i64 - t.e[i] as i64) + t.coeff.1[i].clone();
                    if !m.is_zero() {
                        acc = acc + m * g[idx - t.offset].clone();
                    }
                }
            }
            g[idx] = -acc / S::from_i64(k[i] as i64);
        }
    }

    let mut prefactor = Prefactor::unit();
    let mut folded = S::one();
    for (c, f) in cs.iter().zip(&ns.factors) {
        let neg = -f.power.to_field::<S>();
        if f.power.as_integer().is_some() {
            folded = folded * c.pow_scalar(&neg).expect("integer power");
        } else if S::TAG == crate::scalar::FieldTag::ExactRational {
            if !c.is_one() {
                prefactor.parts.push((c.clone(), Power { exact: f.power.exact.clone().map(|q| -q), value: -f.power.value }));
            }
        } else {
            folded = folded
                * c.pow_scalar(&neg)
                    .ok_or_else(|| Error::Unsupported("negative constant term under a fractional power".into()))?;
        }
    }
    let num: Vec<(Vec<u32>, S)> = rec.numerator.terms().map(|(e, c)| (nonneg(e), c.clone() * folded.clone())).collect();
    let mut values = Vec::new();
    for k in wanted_indices(&layout, &wanted)? {
        let mut v = S::zero();
        for (a, c) in &num {
            if fits(&k, a) {
                let kk: Vec<u32> = k.iter().zip(a).map(|(x, y)| x - y).collect();
                v = v + c.clone() * g[layout.encode(&kk)].clone();
            }
        }
        values.push((k, v));
    }
    Ok(EngineOutput { values, prefactor })
}

fn argmax(k: &[u32]) -> usize {
    let mut best = 0;
    for i in 1..k.len() {
        if k[i] > k[best] {
            best = i;
        }
    }
    best
}

fn lcm_denoms<'a>(it: impl Iterator<Item = &'a BigRational>) -> BigInt {
    it.fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

fn to_int(q: &BigRational) -> Result<BigInt> {
    if q.is_integer() {
        Ok(q.to_integer())
    } else {
        Err(Error::Numeric("scaled coefficient is not integral".into()))
    }
}

#[inline]
fn falling(k: &[u32], e: &[u32]) -> Option<i128> {
    let mut acc: i128 = 1;
    for (&a, &b) in k.iter().zip(e) {
        for j in 0..b {
            acc = acc.checked_mul((a - j) as i128)?;
        }
    }
    Some(acc)
}

fn falling_big(k: &[u32], e: &[u32]) -> BigInt {
    let mut acc = BigInt::one();
    for (&a, &b) in k.iter().zip(e) {
        for j in 0..b {
            acc *= BigInt::from(a - j);
        }
    }
    acc
}

fn factorial_prod(k: &[u32]) -> BigInt {
    let mut acc = BigInt::one();
    for &a in k {
        for j in 2..=a {
            acc *= BigInt::from(j);
        }
    }
    acc
}

/// Exact recurrence on integer-scaled coefficients.
///
/// Integer powers store `N_k = G_k L^{|k|}`; real powers store `N_k = G_k L^{|k|} k!`.
pub fn run_exact(ns: &NormalizedSpec<BigRational>, region: &Region, wanted: Wanted) -> Result<EngineOutput<BigRational>> {
    let d = ns.arity();
    let layout = Layout::new(region, d)?;
    let exact_powers: Vec<Power> = ns
        .factors
        .iter()
        .map(|f| match &f.power.exact {
            Some(_) => f.power.clone(),
            None => Power::rational(f.power.to_field::<BigRational>()),
        })
        .collect();
    let mut ns = ns.clone();
    for (f, p) in ns.factors.iter_mut().zip(&exact_powers) {
        f.power = p.clone();
    }
    let (cs, us) = units(&ns);
    let rec = recurrence(&ns, &us);
    let l = {
        let mut all: Vec<&BigRational> = rec.d_poly.terms().map(|(_, c)| c).collect();
        for w in &rec.w_polys {
            all.extend(w.terms().map(|(_, c)| c));
        }
        lcm_denoms(all.into_iter())
    };
    let lr = BigRational::from_integer(l.clone());
    let mut union = all_exps(&[&rec.d_poly]);
    union.extend(all_exps(&rec.w_polys.iter().collect::<Vec<_>>()));
    union.sort();
    union.dedup();

    struct Term {
        a: BigInt,
        b: Vec<BigInt>,
        small: Option<(i64, Vec<i64>)>,
    }
    let ts = shifts(
        &layout,
        union
            .into_iter()
            .map(|e| {
                let ee: Vec<i32> = e.iter().map(|&x| x as i32).collect();
                let scale = Scalar::powi(&lr, e.iter().sum::<u32>() as i64);
                let a = to_int(&(rec.d_poly.coeff(&ee) * scale.clone()))?;
                let b = rec
                    .w_polys
                    .iter()
                    .map(|w| to_int(&(w.coeff(&ee) * scale.clone())))
                    .collect::<Result<Vec<_>>>()?;
                let small = a.to_i64().and_then(|a| b.iter().map(|x| x.to_i64()).collect::<Option<Vec<_>>>().map(|b| (a, b)));
                Ok((e, Term { a, b, small }))
            })
            .collect::<Result<Vec<_>>>()?,
    );

    let mut n: Vec<BigInt> = vec![BigInt::zero(); layout.len];
    let mut k = vec![0u32; d];
    for idx in 0..layout.len {
        layout.decode(idx, &mut k);
        if !layout.contains(&k) {
            continue;
        }
        if idx == 0 {
            n[0] = BigInt::one();
            continue;
        }
        let mut acc = BigInt::zero();
        if rec.integer_mode {
            for t in &ts {
                if fits(&k, &t.e) {
                    let prev = &n[idx - t.offset];
                    if prev.is_zero() || t.coeff.a.is_zero() {
                        continue;
                    }
                    match t.coeff.small {
                        Some((a, _)) => acc += prev * a,
                        None => acc += prev * &t.coeff.a,
                    }
                }
            }
            n[idx] = -acc;
        } else {
            let i = argmax(&k);
            for t in &ts {
                if !fits(&k, &t.e) {
                    continue;
                }
                let prev = &n[idx - t.offset];
                if prev.is_zero() {
                    continue;
                }
                let ki = k[i] as i64 - t.e[i] as i64;
                let small = t.coeff.small.as_ref().and_then(|(a, b)| {
                    let m = (*a as i128).checked_mul(ki as i128)?.checked_add(b[i] as i128)?;
                    m.checked_mul(falling(&k, &t.e)?)
                });
                match small {
                    Some(0) => {}
                    Some(m) => acc += prev * m,
                    None => {
                        let m = (&t.coeff.a * BigInt::from(ki) + &t.coeff.b[i]) * falling_big(&k, &t.e);
                        acc += prev * m;
                    }
                }
            }
            let (q, r) = acc.div_rem(&BigInt::from(k[i]));
            if !r.is_zero() {
                return Err(Error::Numeric("inexact division in scaled recurrence".into()));
            }
            n[idx] = -q;
        }
    }

    let mut prefactor = Prefactor::unit();
    let mut folded = BigRational::one();
    for (c, f) in cs.iter().zip(&ns.factors) {
        match f.power.as_integer() {
            Some(s) => folded = folded * Scalar::powi(c, -s),
            None => {
                if c.is_negative() {
                    return Err(Error::Unsupported("negative constant term under a fractional power".into()));
                }
                if !c.is_one() {
                    prefactor.parts.push((c.clone(), Power { exact: f.power.exact.clone().map(|q| -q), value: -f.power.value }));
                }
            }
        }
    }
    let num_den = lcm_denoms(rec.numerator.terms().map(|(_, c)| c));
    let num: Vec<(Vec<u32>, BigInt)> = rec
        .numerator
        .terms()
        .map(|(e, c)| {
            let ne = nonneg(e);
            let scale = Scalar::powi(&lr, ne.iter().sum::<u32>() as i64);
            to_int(&(c.clone() * BigRational::from_integer(num_den.clone()) * scale)).map(|v| (ne, v))
        })
        .collect::<Result<_>>()?;
    let mut lpow = vec![BigInt::one()];
    let mut values = Vec::new();
    for k in wanted_indices(&layout, &wanted)? {
        let mut acc = BigInt::zero();
        for (a, c) in &num {
            if fits(&k, a) {
                let kk: Vec<u32> = k.iter().zip(a).map(|(x, y)| x - y).collect();
                let prev = &n[layout.encode(&kk)];
                if prev.is_zero() {
                    continue;
                }
                if rec.integer_mode {
                    acc += prev * c;
                } else {
                    acc += prev * c * falling_big(&k, a);
                }
            }
        }
        let deg = k.iter().sum::<u32>() as usize;
        while lpow.len() <= deg {
            let next = lpow.last().unwrap() * &l;
            lpow.push(next);
        }
        let mut den = &lpow[deg] * &num_den;
        if !rec.integer_mode {
            den *= factorial_prod(&k);
        }
        values.push((k, BigRational::new(acc, den) * folded.clone()));
    }
    Ok(EngineOutput { values, prefactor })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::normalize::normalize_laurent;
    use crate::oracle::spec::{Factor, QuasiRationalSpec};
    use crate::scalar::{int, rat};

    fn geo(power: Power) -> NormalizedSpec<BigRational> {
        let q = MultiPoly::from_terms(1, [(vec![0], int(1)), (vec![1], int(-1))]);
        let spec = QuasiRationalSpec::new(MultiPoly::one(1), vec![Factor { poly: q, power }], vec![-1.0]).unwrap();
        normalize_laurent(&spec).unwrap()
    }

    #[test]
    fn geometric_ones() {
        let out = run_exact(&geo(Power::int(1)), &Region::Simplex(6), Wanted::All).unwrap();
        assert_eq!(out.values.len(), 7);
        assert!(out.values.iter().all(|(_, v)| *v == int(1)));
    }

    #[test]
    fn real_mode_matches_integer_mode() {
        let a = run_exact(&geo(Power::int(2)), &Region::Simplex(8), Wanted::All).unwrap();
        let b = run_exact(&geo(Power::float(2.0)), &Region::Simplex(8), Wanted::All).unwrap();
        assert_eq!(a.values, b.values);
        let c = run_field(&geo(Power::int(2)), &Region::Simplex(8), Wanted::All).unwrap();
        assert_eq!(a.values, c.values);
        assert_eq!(a.values[3].1, int(4));
    }

    #[test]
    fn half_power_binomials() {
        let q = MultiPoly::from_terms(1, [(vec![0], int(1)), (vec![1], int(-4))]);
        let spec =
            QuasiRationalSpec::new(MultiPoly::one(1), vec![Factor { poly: q, power: Power::rational(rat(1, 2)) }], vec![-1.0]).unwrap();
        let ns = normalize_laurent(&spec).unwrap();
        let out = run_exact(&ns, &Region::Simplex(5), Wanted::All).unwrap();
        let central = [1, 2, 6, 20, 70, 252];
        for ((_, v), c) in out.values.iter().zip(central) {
            assert_eq!(*v, int(c));
        }
    }

    #[test]
    fn fractional_prefactor_kept_symbolic() {
        let q = MultiPoly::from_terms(1, [(vec![0], int(3)), (vec![1], int(-1))]);
        let spec =
            QuasiRationalSpec::new(MultiPoly::one(1), vec![Factor { poly: q, power: Power::rational(rat(3, 4)) }], vec![-1.0]).unwrap();
        let ns = normalize_laurent(&spec).unwrap();
        let out = run_exact(&ns, &Region::Simplex(2), Wanted::All).unwrap();
        assert_eq!(out.prefactor.parts.len(), 1);
        assert_eq!(out.prefactor.label(), "(3)^(-3/4)");
        assert_eq!(out.values[1].1, rat(1, 4));
        let fl = run_field(&ns.clone(), &Region::Simplex(2), Wanted::All).unwrap();
        assert_eq!(fl.values, out.values);
    }
}
