//! Contributions of single points to the coefficient asymptotics.

use nalgebra::DMatrix;
use num_complex::Complex64;
use statrs::function::gamma::gamma;

use super::dualpow::dual_power_derivative;
use super::expansion::ExpansionTable;
use crate::error::{Error, Result};
use crate::localgeo::{bilinear, classify_direction, DirectionTag, Mat, QuadraticPointData};
use crate::oracle::QuasiRationalSpec;
use crate::polyseries::MultiPoly;

const POLE_TOL: f64 = 1e-9;

fn near_nonpositive_integer(x: f64) -> bool {
    x <= POLE_TOL && (x - x.round()).abs() < POLE_TOL
}

/// `1 / (2^{2s-1} pi^{d/2-1} Gamma(s) Gamma(s+1-d/2))`.
pub fn riesz_constant(s: f64, d: usize) -> Result<f64> {
    let half = d as f64 / 2.0;
    for x in [s, s + 1.0 - half] {
        if near_nonpositive_integer(x) {
            return Err(Error::GammaPole(x));
        }
    }
    Ok(1.0 / (2f64.powf(2.0 * s - 1.0) * std::f64::consts::PI.powf(half - 1.0) * gamma(s) * gamma(s + 1.0 - half)))
}

/// Same constant, but zero where `1/Gamma` vanishes.
fn riesz_constant_or_zero(s: f64, d: usize) -> f64 {
    riesz_constant(s, d).unwrap_or(0.0)
}

/// The `d = 3`, `s = 1` constant must reduce to `1/(2 pi)`.
pub fn constant_consistency() -> bool {
    riesz_constant(1.0, 3).map(|k| (k * 2.0 * std::f64::consts::PI - 1.0).abs() < 1e-14).unwrap_or(false)
}

/// `Z^{-r}`, exact for integer `r` at real points.
pub fn z_power(z: &[Complex64], r: &[f64]) -> Complex64 {
    if r.iter().all(|x| x.fract() == 0.0 && x.abs() < 2e9) {
        z.iter().zip(r).fold(Complex64::new(1.0, 0.0), |acc, (w, &k)| acc * w.powi(-(k as i32)))
    } else {
        let e: Complex64 = z.iter().zip(r).map(|(w, &k)| -k * w.ln()).sum();
        e.exp()
    }
}

fn ensure_class(data: &QuadraticPointData, r: &[f64], tau: f64) -> Result<DirectionTag> {
    let class = classify_direction(data, r, tau)?;
    match class.tag {
        DirectionTag::InteriorEllipticCone | DirectionTag::InteriorE => Ok(class.tag),
        tag => Err(Error::Refusal { class: tag.name().into(), detail: format!("margin {:.3e}", class.margin) }),
    }
}

/// Quadratic point with no linear factors.
pub fn quadratic_asymptotics(data: &QuadraticPointData, table: &ExpansionTable, r: &[f64], n_order: u32) -> Result<Complex64> {
    if !data.linear_factors.is_empty() {
        return Err(Error::Domain("linear factors present; use the cone-plane formula".into()));
    }
    match classify_direction(data, r, 1e-9)?.tag {
        DirectionTag::InteriorEllipticCone => {}
        tag => return Err(Error::Domain(format!("direction class {} has no quadratic-point series", tag.name()))),
    }
    let d = data.arity();
    let s = data.s.value;
    riesz_constant(s, d)?;
    let half = d as f64 / 2.0;
    let mut sum = Complex64::new(0.0, 0.0);
    for ((m, l, _), c) in &table.entries {
        let size: u32 = m.iter().sum();
        if size >= n_order + 2 * l {
            continue;
        }
        let k = riesz_constant_or_zero(s + *l as f64, d);
        if k == 0.0 {
            continue;
        }
        let sign = if size % 2 == 0 { 1.0 } else { -1.0 };
        let der = dual_power_derivative(&data.dual_matrix, s + *l as f64 - half, m, r)?;
        sum += c * (sign * k * der);
    }
    Ok(z_power(&data.point_z, r) * data.normalizer_absdet * sum)
}

/// A real point on the line `q~ = 0`, `l . y = 0`.
pub fn common_zero_line(q: &Mat<f64>, ell: &[f64]) -> Result<Vec<f64>> {
    if ell.len() != 3 || q.len() != 3 {
        return Err(Error::Unsupported("common zero line needs three variables".into()));
    }
    let n = ell.iter().map(|x| x * x).sum::<f64>().sqrt();
    let l: Vec<f64> = ell.iter().map(|x| x / n).collect();
    let pick = (0..3).min_by(|&a, &b| l[a].abs().partial_cmp(&l[b].abs()).unwrap()).unwrap();
    let mut e1 = vec![0.0; 3];
    e1[pick] = 1.0;
    let dl = e1[pick] * l[pick];
    let e1: Vec<f64> = (0..3).map(|i| e1[i] - dl * l[i]).collect();
    let n1 = e1.iter().map(|x| x * x).sum::<f64>().sqrt();
    let e1: Vec<f64> = e1.iter().map(|x| x / n1).collect();
    let e2 = vec![l[1] * e1[2] - l[2] * e1[1], l[2] * e1[0] - l[0] * e1[2], l[0] * e1[1] - l[1] * e1[0]];
    let a = bilinear(q, &e1, &e1);
    let b = bilinear(q, &e1, &e2);
    let c = bilinear(q, &e2, &e2);
    let disc = b * b - a * c;
    if disc <= 1e-12 * (a.abs() + b.abs() + c.abs()).max(1e-300) {
        return Err(Error::Geometry("plane meets the quadratic cone in no real distinct lines".into()));
    }
    let eps = 1e-14 * b.abs();
    let (t, s) = if a.abs() <= eps && c.abs() <= eps {
        (1.0, 0.0)
    } else if a.abs() >= c.abs() {
        ((-b + disc.sqrt()) / a, 1.0)
    } else {
        (1.0, (-b + disc.sqrt()) / c)
    };
    Ok((0..3).map(|i| t * e1[i] + s * e2[i]).collect())
}

/// The three coordinate-pair formulas as `(numerator, denominator)`.
pub fn residue_formulas(q: &Mat<f64>, ell: &[f64], alpha: &[f64]) -> [(f64, f64); 3] {
    let grad: Vec<f64> = (0..3).map(|i| 2.0 * (0..3).map(|j| q[i][j] * alpha[j]).sum::<f64>()).collect();
    [
        (alpha[2], grad[0] * ell[1] - grad[1] * ell[0]),
        (alpha[0], grad[1] * ell[2] - grad[2] * ell[1]),
        (alpha[1], grad[2] * ell[0] - grad[0] * ell[2]),
    ]
}

/// Iterated residue of `1/(q~ l)` along the common zero line through `alpha`.
pub fn double_residue(q: &Mat<f64>, ell: &[f64], alpha: &[f64], tau: f64) -> Result<f64> {
    let cands = residue_formulas(q, ell, alpha);
    let qa = q.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    let scale = alpha.iter().fold(0.0f64, |m, x| m.max(x.abs())) * qa * ell.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let (num, den) = cands.iter().copied().max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap()).unwrap();
    if den.abs() <= tau * scale.max(1e-300) {
        return Err(Error::Degenerate("all residue denominators vanish".into()));
    }
    Ok(num / den)
}

/// `Res^2` for the point's own quadratic and plane.
pub fn point_residue(data: &QuadraticPointData) -> Result<f64> {
    let ell = &data.linear_factors.first().ok_or_else(|| Error::Geometry("no linear factor".into()))?.covector;
    let alpha = common_zero_line(&data.q_matrix, ell)?;
    Ok(double_residue(&data.q_matrix, ell, &alpha, 1e-12)?.abs())
}

/// Quadratic point met by one simple plane in three variables with `s = 1`.
pub fn cone_plane_asymptotics(data: &QuadraticPointData, r: &[f64]) -> Result<Complex64> {
    if data.arity() != 3 || data.s.as_integer() != Some(1) {
        return Err(Error::Geometry("cone-plane formula needs d = 3 and s = 1".into()));
    }
    if data.linear_factors.len() != 1 || data.linear_factors[0].exponent != 1 {
        return Err(Error::Geometry("cone-plane formula needs exactly one simple plane".into()));
    }
    if data.numerator_value.norm() <= 1e-14 {
        return Err(Error::Geometry("numerator vanishes at the point".into()));
    }
    let tag = ensure_class(data, r, 1e-9)?;
    let ell = &data.linear_factors[0].covector;
    let res = point_residue(data)?;
    let lead = z_power(&data.point_z, r) * data.numerator_value * res;
    match tag {
        DirectionTag::InteriorE => Ok(lead),
        _ => {
            let rr = data.dual_eval(r, r);
            let ll = data.dual_eval(ell, ell);
            let rl = data.dual_eval(r, ell);
            let theta = (rr.max(0.0).sqrt() * (-ll).sqrt()).atan2(rl);
            Ok(lead * (theta / std::f64::consts::PI))
        }
    }
}

fn orthonormal_complement(rh: &[f64]) -> Vec<Vec<f64>> {
    let d = rh.len();
    let mut basis: Vec<Vec<f64>> = vec![rh.to_vec()];
    for i in 0..d {
        let mut v = vec![0.0; d];
        v[i] = 1.0;
        for b in &basis {
            let c: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-8 {
            basis.push(v.iter().map(|x| x / n).collect());
        }
        if basis.len() == d {
            break;
        }
    }
    basis.remove(0);
    basis
}

fn eigenvalues(a: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    match n {
        0 => Ok(vec![]),
        1 => Ok(vec![a[(0, 0)]]),
        2 => {
            let tr = a[(0, 0)] + a[(1, 1)];
            let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
            let root = (tr * tr - det * 4.0).sqrt();
            Ok(vec![(tr + root) / 2.0, (tr - root) / 2.0])
        }
        _ => a
            .clone()
            .schur()
            .eigenvalues()
            .map(|v| v.iter().copied().collect())
            .ok_or_else(|| Error::Numeric("eigenvalue iteration failed".into())),
    }
}

/// Leading contribution of a smooth critical point on a simple pole `factor`.
pub fn smooth_asymptotics(spec: &QuasiRationalSpec<Complex64>, factor: usize, z: &[Complex64], r: &[f64]) -> Result<Complex64> {
    let d = spec.arity();
    let f = spec.factors.get(factor).ok_or_else(|| Error::Domain("factor index out of range".into()))?;
    if f.power.as_integer() != Some(1) {
        return Err(Error::Unsupported("smooth formula needs a simple pole".into()));
    }
    let h: &MultiPoly<Complex64> = &f.poly;
    let mut num = spec.numerator.eval_complex(z)?;
    for (j, g) in spec.factors.iter().enumerate() {
        if j != factor {
            num *= crate::oracle::spec::pow_complex(g.poly.eval_complex(z)?, -g.power.value);
        }
    }
    let nr = r.iter().map(|x| x * x).sum::<f64>().sqrt();
    let rh: Vec<f64> = r.iter().map(|x| x / nr).collect();
    let grad: Vec<Complex64> = (0..d).map(|i| h.euler(i).eval_complex(z)).collect::<Result<_>>()?;
    let lambda: Complex64 = grad.iter().zip(&rh).map(|(g, x)| g * x).sum();
    let gnorm = grad.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt();
    let off = grad.iter().zip(&rh).map(|(g, x)| (g - lambda * x).norm_sqr()).sum::<f64>().sqrt();
    if gnorm == 0.0 || off > 1e-7 * gnorm {
        return Err(Error::Domain("log-gradient is not parallel to r at this point".into()));
    }
    let tangent = orthonormal_complement(&rh);
    let hess: Vec<Vec<Complex64>> = (0..d)
        .map(|i| (0..d).map(|j| h.euler(i).euler(j).eval_complex(z)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let k = tangent.len();
    let a = DMatrix::from_fn(k, k, |p, q| {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                acc += hess[i][j] * (tangent[p][i] * tangent[q][j]);
            }
        }
        acc / lambda
    });
    let eig = eigenvalues(&a)?;
    let kappa: Complex64 = eig.iter().product();
    if kappa.norm() <= 1e-12 {
        return Err(Error::Degenerate("curvature vanishes".into()));
    }
    let inv_root: Complex64 = eig.iter().map(|e| Complex64::new(1.0, 0.0) / e.sqrt()).product();
    let radial = (2.0 * std::f64::consts::PI * nr).powf((1.0 - d as f64) / 2.0);
    Ok(z_power(z, r) * radial * inv_root * num / (-lambda))
}

/// `alpha = d + max deg`, the exponent of the polynomial bound `|r|^{-alpha}`.
pub fn decay_exponent(d: usize, degrees: &[f64]) -> f64 {
    d as f64 + degrees.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Local degree of `F` at `z`: numerator order minus weighted factor orders.
pub fn local_degree(spec: &QuasiRationalSpec<Complex64>, z: &[Complex64]) -> Result<f64> {
    let order_of = |p: &MultiPoly<Complex64>| -> Result<u32> {
        let series = crate::polyseries::log_compose_taylor(p, z, 6)?;
        let scale = p.terms().map(|(_, c)| c.norm()).fold(0.0, f64::max).max(1e-300);
        for k in 0..=6 {
            let part = series.terms().filter(|(e, _)| e.degree() == k).map(|(_, c)| c.norm()).fold(0.0, f64::max);
            if part > 1e-9 * scale {
                return Ok(k as u32);
            }
        }
        Err(Error::Numeric("polynomial vanishes to order above 6".into()))
    };
    let mut deg = order_of(&spec.numerator)? as f64;
    for f in &spec.factors {
        deg -= f.power.value * order_of(&f.poly)? as f64;
    }
    Ok(deg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_reduces_in_three_dimensions() {
        assert!(constant_consistency());
        assert!(matches!(riesz_constant(0.0, 3), Err(Error::GammaPole(_))));
        assert!(matches!(riesz_constant(0.5, 3), Err(Error::GammaPole(_))));
    }

    #[test]
    fn aztec_residue_is_one() {
        let q = vec![vec![-0.5, 0.0, 0.0], vec![0.0, -0.5, 0.0], vec![0.0, 0.0, 1.0]];
        let ell = [0.0, 1.0, 1.0];
        let a = common_zero_line(&q, &ell).unwrap();
        let v = double_residue(&q, &ell, &a, 1e-12).unwrap();
        assert!((v.abs() - 1.0).abs() < 1e-12);
        let a2: Vec<f64> = a.iter().map(|x| 2.0 * x).collect();
        assert!((double_residue(&q, &ell, &a2, 1e-12).unwrap() - v).abs() < 1e-12);
    }

    #[test]
    fn grove_residue_is_half() {
        let q = vec![vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]];
        let ell = [0.0, 0.0, 1.0];
        let a = common_zero_line(&q, &ell).unwrap();
        assert!((double_residue(&q, &ell, &a, 1e-12).unwrap().abs() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn decay_arithmetic() {
        assert_eq!(decay_exponent(3, &[-2.0]), 1.0);
        assert_eq!(decay_exponent(3, &[2.0 - 2.0 - 1.0]), 2.0);
    }
}
