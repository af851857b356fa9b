//! Local data at one quadratic point.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::matrix::{map, to_f64, Mat};
use super::quadratic::{
    classify_quadratic, dual_quadratic, normalizer_absdet, normalizer_absdet_exact, numeric_homogeneous_part,
    numeric_vanishing_degree, remove_phase,
};
use crate::error::{Error, Result};
use crate::oracle::QuasiRationalSpec;
use crate::polyseries::{log_compose_taylor, MultiPoly};
use crate::scalar::{rat_string, snap_rational, Power, Scalar};

pub const VANISH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorRole {
    Nonvanishing,
    Quadratic,
    Linear,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearFactor {
    pub factor_index: usize,
    /// `l = -g` where `g` is the sign-normalized linear part (`g(u) > 0`).
    pub covector: Vec<f64>,
    pub exponent: u32,
    /// Local factor equals `phase * g` to first order.
    pub phase: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactPointData {
    pub point: Vec<BigRational>,
    pub q_matrix: Mat<BigRational>,
    pub dual_matrix: Mat<BigRational>,
    pub normalizer_absdet: Option<BigRational>,
    pub numerator_value: Option<BigRational>,
    pub covectors: Vec<Vec<BigRational>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticPointData {
    pub point_z: Vec<Complex64>,
    pub log_point: Vec<Complex64>,
    pub quadratic_factor: usize,
    pub s: Power,
    pub q_matrix: Mat<f64>,
    pub dual_matrix: Mat<f64>,
    pub normalizer_absdet: f64,
    /// `P(Z)` times the remaining factors, with phases of the local forms absorbed.
    pub numerator_value: Complex64,
    pub linear_factors: Vec<LinearFactor>,
    pub cone_direction_u: Vec<f64>,
    /// Local quadratic factor equals `q_phase * q_tilde` to second order.
    pub q_phase: Complex64,
    pub roles: Vec<FactorRole>,
    pub exact: Option<ExactPointData>,
}

fn log_point(z: &[Complex64]) -> Vec<Complex64> {
    z.iter().map(|w| w.ln()).collect()
}

fn vanishes(p: &MultiPoly<Complex64>, z: &[Complex64]) -> Result<bool> {
    let v = p.eval_complex(z)?;
    let scale: f64 = p
        .terms()
        .map(|(e, c)| {
            let mut t = c.norm();
            for (i, &k) in e.0.iter().enumerate() {
                t *= z[i].norm().powi(k);
            }
            t
        })
        .sum();
    Ok(v.norm() <= VANISH_TOL * scale.max(1e-300))
}

fn outer_value(
    spec: &QuasiRationalSpec<Complex64>,
    z: &[Complex64],
    roles: &[FactorRole],
) -> Result<Complex64> {
    let mut v = spec.numerator.eval_complex(z)?;
    for (f, role) in spec.factors.iter().zip(roles) {
        if *role == FactorRole::Nonvanishing {
            v *= crate::oracle::spec::pow_complex(f.poly.eval_complex(z)?, -f.power.value);
        }
    }
    Ok(v)
}

fn positive_exponent(p: &Power, j: usize) -> Result<u32> {
    match p.as_integer() {
        Some(n) if n > 0 => Ok(n as u32),
        _ => Err(Error::Unsupported(format!("linear factor {j} needs a positive integer power"))),
    }
}

impl QuadraticPointData {
    /// Floating-point analysis at an arbitrary point of the torus.
    pub fn from_numeric(spec: &QuasiRationalSpec<Complex64>, z: &[Complex64]) -> Result<Self> {
        let d = spec.arity();
        let u = spec.cone_direction_u.clone();
        let mut roles = Vec::with_capacity(spec.factors.len());
        let mut quad: Option<(usize, MultiPoly<Complex64>)> = None;
        let mut lins = Vec::new();
        for (j, f) in spec.factors.iter().enumerate() {
            if !vanishes(&f.poly, z)? {
                roles.push(FactorRole::Nonvanishing);
                continue;
            }
            if f.power.is_negative() {
                roles.push(FactorRole::Nonvanishing);
                continue;
            }
            let series = log_compose_taylor(&f.poly, z, 3)?;
            let mut trimmed = series.clone();
            trimmed.add_term(crate::polyseries::Exponent::zero(d), -series.constant_term());
            match numeric_vanishing_degree(&trimmed, VANISH_TOL)? {
                1 => {
                    roles.push(FactorRole::Linear);
                    lins.push((j, numeric_homogeneous_part(&trimmed, VANISH_TOL)?));
                }
                2 => {
                    if quad.is_some() {
                        return Err(Error::Unsupported("two quadratic factors at one point".into()));
                    }
                    roles.push(FactorRole::Quadratic);
                    quad = Some((j, numeric_homogeneous_part(&trimmed, VANISH_TOL)?));
                }
                k => return Err(Error::Unsupported(format!("factor {j} vanishes to order {k}"))),
            }
        }
        let (qj, qtilde) = quad.ok_or_else(|| Error::Geometry("no factor has a quadratic point here".into()))?;
        let (qreal, mut w) = remove_phase(&qtilde, 1e-8)?;
        let (m, flipped) = classify_quadratic(&qreal, &u)?;
        if flipped {
            w = -w;
        }
        let s = spec.factors[qj].power.clone();
        let mut num = outer_value(spec, z, &roles)? * w.powf(-s.value);
        let mut linear_factors = Vec::new();
        for (j, h) in lins {
            let n = positive_exponent(&spec.factors[j].power, j)?;
            let (g, mut wj) = remove_phase(&h, 1e-8)?;
            let mut cov: Vec<f64> = (0..d).map(|i| g.coeff(&crate::polyseries::Exponent::unit(d, i).0)).collect();
            let gu: f64 = cov.iter().zip(&u).map(|(a, b)| a * b).sum();
            if gu.abs() <= 1e-12 {
                return Err(Error::Geometry(format!("reference direction is tangent to factor {j}")));
            }
            if gu < 0.0 {
                wj = -wj;
                cov.iter_mut().for_each(|x| *x = -*x);
            }
            num *= wj.powi(-(n as i32));
            linear_factors.push(LinearFactor { factor_index: j, covector: cov.iter().map(|x| -x).collect(), exponent: n, phase: wj });
        }
        let dual = dual_quadratic(&m)?;
        Ok(QuadraticPointData {
            point_z: z.to_vec(),
            log_point: log_point(z),
            quadratic_factor: qj,
            s,
            normalizer_absdet: normalizer_absdet(&m)?,
            q_matrix: m,
            dual_matrix: dual,
            numerator_value: num,
            linear_factors,
            cone_direction_u: u,
            q_phase: w,
            roles,
            exact: None,
        })
    }

    /// Exact analysis at a rational point of an exact spec.
    pub fn from_exact(spec: &QuasiRationalSpec<BigRational>, z: &[BigRational]) -> Result<Self> {
        let d = spec.arity();
        let u = spec.cone_direction_u.clone();
        let zc: Vec<Complex64> = z.iter().map(|x| x.to_complex()).collect();
        let mut roles = Vec::with_capacity(spec.factors.len());
        let mut quad = None;
        let mut lins = Vec::new();
        for (j, f) in spec.factors.iter().enumerate() {
            if !f.poly.eval(z)?.is_zero() || f.power.is_negative() {
                roles.push(FactorRole::Nonvanishing);
                continue;
            }
            let series = log_compose_taylor(&f.poly, z, 3)?;
            match series.vanishing_degree()? {
                1 => {
                    roles.push(FactorRole::Linear);
                    lins.push((j, series.homogeneous_part()?));
                }
                2 => {
                    if quad.is_some() {
                        return Err(Error::Unsupported("two quadratic factors at one point".into()));
                    }
                    roles.push(FactorRole::Quadratic);
                    quad = Some((j, series.homogeneous_part()?));
                }
                k => return Err(Error::Unsupported(format!("factor {j} vanishes to order {k}"))),
            }
        }
        let (qj, qtilde) = quad.ok_or_else(|| Error::Geometry("no factor has a quadratic point here".into()))?;
        let (m, flipped) = classify_quadratic(&qtilde, &u)?;
        let s = spec.factors[qj].power.clone();
        let sign_q = if flipped { -1.0 } else { 1.0 };
        let cspec = spec.to_complex();
        let mut num = outer_value(&cspec, &zc, &roles)? * Complex64::new(sign_q, 0.0).powf(-s.value);
        let mut exact_num = {
            let mut v = Some(spec.numerator.eval(z)?);
            for (f, role) in spec.factors.iter().zip(&roles) {
                if *role == FactorRole::Nonvanishing {
                    v = match (v, f.power.as_integer()) {
                        (Some(acc), Some(n)) => Some(acc * Scalar::powi(&f.poly.eval(z)?, -n)),
                        _ => None,
                    };
                }
            }
            match v {
                Some(acc) if !flipped => Some(acc),
                Some(acc) => s.as_integer().map(|n| if n % 2 != 0 { -acc } else { acc }),
                None => None,
            }
        };
        let mut linear_factors = Vec::new();
        let mut covectors = Vec::new();
        for (j, g) in lins {
            let n = positive_exponent(&spec.factors[j].power, j)?;
            let mut cov: Vec<BigRational> = (0..d).map(|i| g.coeff(&crate::polyseries::Exponent::unit(d, i).0)).collect();
            let gu: f64 = cov.iter().zip(&u).map(|(a, b)| a.to_complex().re * b).sum();
            if gu.abs() <= 1e-12 {
                return Err(Error::Geometry(format!("reference direction is tangent to factor {j}")));
            }
            let mut wj = Complex64::one();
            if gu < 0.0 {
                wj = -wj;
                cov.iter_mut().for_each(|x| *x = -x.clone());
                if n % 2 == 1 {
                    num = -num;
                    exact_num = exact_num.map(|v| -v);
                }
            }
            let ell: Vec<BigRational> = cov.iter().map(|x| -x.clone()).collect();
            linear_factors.push(LinearFactor {
                factor_index: j,
                covector: ell.iter().map(|x| x.to_complex().re).collect(),
                exponent: n,
                phase: wj,
            });
            covectors.push(ell);
        }
        let dual = dual_quadratic(&m)?;
        let absdet_exact = normalizer_absdet_exact(&m);
        Ok(QuadraticPointData {
            point_z: zc.clone(),
            log_point: log_point(&zc),
            quadratic_factor: qj,
            s,
            normalizer_absdet: match &absdet_exact {
                Some(v) => v.to_complex().re,
                None => normalizer_absdet(&m)?,
            },
            q_matrix: to_f64(&m),
            dual_matrix: to_f64(&dual),
            numerator_value: num,
            linear_factors,
            cone_direction_u: u,
            q_phase: Complex64::new(sign_q, 0.0),
            roles,
            exact: Some(ExactPointData {
                point: z.to_vec(),
                q_matrix: m,
                dual_matrix: dual,
                normalizer_absdet: absdet_exact,
                numerator_value: exact_num,
                covectors,
            }),
        })
    }

    /// Exact analysis when every coordinate is a small-denominator rational, numeric otherwise.
    pub fn at_point(spec: &QuasiRationalSpec<BigRational>, z: &[Complex64]) -> Result<Self> {
        let snapped: Option<Vec<BigRational>> = z
            .iter()
            .map(|w| if w.im.abs() <= 1e-12 { snap_rational(w.re, 16, 1e-9) } else { None })
            .collect();
        if let Some(zr) = snapped {
            if spec.factors.iter().any(|f| f.poly.eval(&zr).map(|v| v.is_zero()).unwrap_or(false)) {
                return Self::from_exact(spec, &zr);
            }
        }
        Self::from_numeric(&spec.to_complex(), z)
    }

    pub fn arity(&self) -> usize {
        self.point_z.len()
    }

    pub fn dual_eval(&self, a: &[f64], b: &[f64]) -> f64 {
        super::matrix::bilinear(&self.dual_matrix, a, b)
    }

    /// The local quadratic form as a polynomial.
    pub fn q_poly(&self) -> MultiPoly<f64> {
        let d = self.arity();
        let mut p = MultiPoly::zero(d);
        for i in 0..d {
            for j in 0..d {
                let mut e = vec![0; d];
                e[i] += 1;
                e[j] += 1;
                p.add_term(crate::polyseries::Exponent(e), self.q_matrix[i][j]);
            }
        }
        p
    }

    pub fn to_json(&self) -> Value {
        let cplx = |v: &[Complex64]| v.iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>();
        let mut v = json!({
            "point_z": cplx(&self.point_z),
            "log_point": cplx(&self.log_point),
            "s": self.s.label(),
            "quadratic_factor": self.quadratic_factor,
            "q_matrix": self.q_matrix,
            "dual_matrix": self.dual_matrix,
            "normalizer_absdet": self.normalizer_absdet,
            "numerator_value": [self.numerator_value.re, self.numerator_value.im],
            "linear_factors": self.linear_factors.iter().map(|l| json!({
                "factor": l.factor_index, "covector": l.covector, "exponent": l.exponent
            })).collect::<Vec<_>>(),
            "cone_direction_u": self.cone_direction_u,
        });
        if let Some(ex) = &self.exact {
            let m = |a: &Mat<BigRational>| map(a, |x: &BigRational| x.clone()).iter().map(|r| r.iter().map(rat_string).collect::<Vec<_>>()).collect::<Vec<_>>();
            v["exact"] = json!({
                "point": ex.point.iter().map(rat_string).collect::<Vec<_>>(),
                "q_matrix": m(&ex.q_matrix),
                "dual_matrix": m(&ex.dual_matrix),
                "normalizer_absdet": ex.normalizer_absdet.as_ref().map(rat_string),
                "numerator_value": ex.numerator_value.as_ref().map(rat_string),
                "covectors": ex.covectors.iter().map(|c| c.iter().map(rat_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
        }
        v
    }
}
