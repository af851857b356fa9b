//! Homogeneous quadratic parts: matrices, signature, duals and normalizers.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::matrix::{determinant, inertia, inverse, Mat};
use crate::error::{Error, Result};
use crate::polyseries::{MultiPoly, TruncatedSeries};
use crate::scalar::{RealScalar, Scalar};

pub fn vanishing_degree<S: Scalar>(s: &TruncatedSeries<S>) -> Result<u32> {
    s.vanishing_degree()
}

pub fn homogeneous_part<S: Scalar>(s: &TruncatedSeries<S>) -> Result<MultiPoly<S>> {
    s.homogeneous_part()
}

/// Vanishing degree ignoring coefficients below `tol` times the largest one.
pub fn numeric_vanishing_degree(s: &TruncatedSeries<Complex64>, tol: f64) -> Result<u32> {
    let scale = s.terms().map(|(_, c)| c.norm()).fold(0.0, f64::max);
    s.terms()
        .filter(|(_, c)| c.norm() > tol * scale.max(1.0))
        .map(|(e, _)| e.degree() as u32)
        .min()
        .ok_or_else(|| Error::Degenerate("series vanishes to its truncation order".into()))
}

pub fn numeric_homogeneous_part(s: &TruncatedSeries<Complex64>, tol: f64) -> Result<MultiPoly<Complex64>> {
    let d = numeric_vanishing_degree(s, tol)? as i64;
    Ok(MultiPoly::from_terms(
        s.arity(),
        s.terms().filter(|(e, _)| e.degree() == d).map(|(e, c)| (e.0.clone(), *c)),
    ))
}

/// Symmetric matrix of a degree-2 form, `M_ii = [x_i^2]`, `M_ij = [x_i x_j] / 2`.
pub fn quadratic_matrix<S: Scalar>(h: &MultiPoly<S>) -> Result<Mat<S>> {
    let d = h.arity();
    if h.is_homogeneous() != Some(2) {
        return Err(Error::Degenerate("form is not homogeneous of degree 2".into()));
    }
    let half = S::one() / S::from_i64(2);
    let mut m = vec![vec![S::zero(); d]; d];
    for (e, c) in h.terms() {
        let idx: Vec<usize> = e.0.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize)).collect();
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            m[i][i] = c.clone();
        } else {
            m[i][j] = c.clone() * half.clone();
            m[j][i] = c.clone() * half.clone();
        }
    }
    Ok(m)
}

pub fn form_value<S: RealScalar>(m: &Mat<S>, v: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            acc += v[i] * x.to_f64() * v[j];
        }
    }
    acc
}

/// Matrix of `h`, sign-normalized so that `h(u) > 0`, with Lorentzian signature checked.
pub fn classify_quadratic<S: RealScalar>(h: &MultiPoly<S>, u: &[f64]) -> Result<(Mat<S>, bool)> {
    let mut m = quadratic_matrix(h)?;
    let d = m.len();
    let (pos, neg, zero) = inertia(&m);
    if zero > 0 {
        return Err(Error::Rank { rank: d - zero, dim: d });
    }
    let val = form_value(&m, u);
    let scale = m.iter().flatten().map(|x| x.to_f64().abs()).fold(0.0, f64::max) * u.iter().map(|x| x * x).sum::<f64>();
    if val.abs() <= 1e-12 * scale {
        return Err(Error::Geometry("reference direction lies on the null cone".into()));
    }
    let flipped = val < 0.0;
    let (pos, neg) = if flipped {
        for x in m.iter_mut().flatten() {
            *x = -x.clone();
        }
        (neg, pos)
    } else {
        (pos, neg)
    };
    if pos != 1 || neg != d - 1 {
        return Err(Error::Signature { pos, neg });
    }
    Ok((m, flipped))
}

/// Real multiple of a complex form: returns `(real form, w)` with `h = w * real form`.
pub fn remove_phase(h: &MultiPoly<Complex64>, tol: f64) -> Result<(MultiPoly<f64>, Complex64)> {
    let big = h
        .terms()
        .map(|(_, c)| *c)
        .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
        .ok_or_else(|| Error::Degenerate("zero form".into()))?;
    let w = big / big.norm();
    let mut out = MultiPoly::zero(h.arity());
    for (e, c) in h.terms() {
        let v = c / w;
        if v.im.abs() > tol * big.norm() {
            return Err(Error::Reality(format!("imaginary residual {:.3e}", v.im)));
        }
        out.add_term(e.clone(), v.re);
    }
    Ok((out, w))
}

pub fn dual_quadratic<S: Scalar>(m: &Mat<S>) -> Result<Mat<S>> {
    inverse(m)
}

pub fn normalizer_absdet<S: RealScalar>(m: &Mat<S>) -> Result<f64> {
    let det = determinant(m).to_f64();
    if det == 0.0 {
        return Err(Error::Rank { rank: m.len().saturating_sub(1), dim: m.len() });
    }
    Ok(det.abs().powf(-0.5))
}

/// `|det|^{-1/2}` as an exact rational when `|det|` is a rational square.
pub fn normalizer_absdet_exact(m: &Mat<BigRational>) -> Option<BigRational> {
    let det = determinant(m).abs();
    if det.is_zero() {
        return None;
    }
    let n = det.numer().sqrt();
    let d = det.denom().sqrt();
    (&n * &n == *det.numer() && &d * &d == *det.denom()).then(|| BigRational::new(d, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn p(terms: &[(i64, i64, [i32; 3])]) -> MultiPoly<BigRational> {
        MultiPoly::from_terms(3, terms.iter().map(|(n, d, e)| (e.to_vec(), rat(*n, *d))))
    }

    #[test]
    fn aztec_matrix() {
        let h = p(&[(1, 1, [0, 0, 2]), (-1, 2, [2, 0, 0]), (-1, 2, [0, 2, 0])]);
        let (m, flipped) = classify_quadratic(&h, &[0.0, 0.0, -1.0]).unwrap();
        assert!(!flipped);
        assert_eq!(m[0][0], rat(-1, 2));
        assert_eq!(m[2][2], int(1));
        let dual = dual_quadratic(&m).unwrap();
        assert_eq!(dual[0][0], int(-2));
        assert_eq!(dual[2][2], int(1));
    }

    #[test]
    fn fls_matrix_and_normalizer() {
        let h = p(&[(1, 1, [1, 1, 0]), (1, 1, [1, 0, 1]), (1, 1, [0, 1, 1])]);
        let (m, _) = classify_quadratic(&h, &[-1.0, -1.0, -1.0]).unwrap();
        assert_eq!(m[0][1], rat(1, 2));
        assert_eq!(normalizer_absdet_exact(&m), Some(int(2)));
        let dual = dual_quadratic(&m).unwrap();
        assert_eq!(dual[0][0], int(-1));
        assert_eq!(dual[0][1], int(1));
    }

    #[test]
    fn definite_is_rejected() {
        let h = p(&[(1, 1, [2, 0, 0]), (1, 1, [0, 2, 0]), (1, 1, [0, 0, 2])]);
        assert!(matches!(classify_quadratic(&h, &[1.0, 0.0, 0.0]), Err(Error::Signature { .. })));
        let flat = p(&[(1, 1, [2, 0, 0]), (-1, 1, [0, 2, 0])]);
        assert!(matches!(classify_quadratic(&flat, &[1.0, 0.0, 0.0]), Err(Error::Rank { .. })));
    }

    #[test]
    fn unit_normalizer() {
        let m = vec![vec![int(1), int(0), int(0)], vec![int(0), int(-1), int(0)], vec![int(0), int(0), int(-1)]];
        assert_eq!(normalizer_absdet_exact(&m), Some(int(1)));
        assert_eq!(normalizer_absdet(&m).unwrap(), 1.0);
    }

    #[test]
    fn phase_removal() {
        let w = Complex64::from_polar(1.0, 0.7);
        let h = MultiPoly::from_terms(2, [(vec![2, 0], w * 3.0), (vec![0, 2], -w)]);
        let (r, ph) = remove_phase(&h, 1e-12).unwrap();
        assert!((r.coeff(&[2, 0]) - 3.0).abs() < 1e-14);
        assert!((ph - w).norm() < 1e-14);
    }
}
