//! Derivatives of powers of the dual form, `d^m (q*(r,r))^alpha` at `r`.

use crate::error::{Error, Result};
use crate::localgeo::Mat;
use crate::polyseries::{Exponent, MultiPoly};

fn dual_poly(dual: &Mat<f64>) -> MultiPoly<f64> {
    let d = dual.len();
    let mut p = MultiPoly::zero(d);
    for i in 0..d {
        for j in 0..d {
            let mut e = vec![0; d];
            e[i] += 1;
            e[j] += 1;
            p.add_term(Exponent(e), dual[i][j]);
        }
    }
    p
}

/// Value of `d^m (q*(r,r))^alpha` at `r`.
pub fn dual_power_derivative(dual: &Mat<f64>, alpha: f64, m: &[u32], r: &[f64]) -> Result<f64> {
    let d = dual.len();
    if m.len() != d || r.len() != d {
        return Err(Error::Domain("multi-index or point has the wrong length".into()));
    }
    let q = dual_poly(dual);
    let grad: Vec<MultiPoly<f64>> = (0..d).map(|i| q.diff(i)).collect();
    // terms[j] multiplies Q^(alpha - j)
    let mut terms: Vec<MultiPoly<f64>> = vec![MultiPoly::one(d)];
    for (i, &mi) in m.iter().enumerate() {
        for _ in 0..mi {
            let mut next = vec![MultiPoly::zero(d); terms.len() + 1];
            for (j, t) in terms.iter().enumerate() {
                next[j] = &next[j] + &t.diff(i);
                let beta = alpha - j as f64;
                next[j + 1] = &next[j + 1] + &(t * &grad[i]).scale(&beta);
            }
            terms = next;
        }
    }
    let qv = q.eval(r)?;
    let scale = r.iter().map(|x| x * x).sum::<f64>().max(1e-300);
    let mut total = 0.0;
    for (j, t) in terms.iter().enumerate() {
        if t.is_zero() {
            continue;
        }
        let beta = alpha - j as f64;
        let pv = t.eval(r)?;
        if qv.abs() <= 1e-14 * scale {
            if beta < 0.0 && pv != 0.0 {
                return Err(Error::Singularity(format!("q*(r,r) = 0 with exponent {beta}")));
            }
            if beta > 0.0 {
                continue;
            }
        }
        if qv < 0.0 && beta.fract() != 0.0 {
            return Err(Error::Domain("q*(r,r) < 0 outside the dual cone".into()));
        }
        total += pv * qv.powf(beta);
    }
    Ok(total)
}
