//! Sampling test of hyperbolicity along a direction.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::polyseries::MultiPoly;

/// Coefficients (ascending) of `t -> h(x + t v)`.
fn restrict(h: &MultiPoly<f64>, x: &[f64], v: &[f64]) -> Vec<f64> {
    let deg = h.total_degree().unwrap_or(0).max(0) as usize;
    let mut out = vec![0.0; deg + 1];
    for (e, c) in h.terms() {
        let mut poly = vec![*c];
        for (i, &k) in e.0.iter().enumerate() {
            for _ in 0..k {
                let mut next = vec![0.0; poly.len() + 1];
                for (j, p) in poly.iter().enumerate() {
                    next[j] += p * x[i];
                    next[j + 1] += p * v[i];
                }
                poly = next;
            }
        }
        for (j, p) in poly.into_iter().enumerate() {
            out[j] += p;
        }
    }
    out
}

fn all_roots_real(coeffs: &[f64], tol: f64) -> bool {
    let mut n = coeffs.len() - 1;
    while n > 0 && coeffs[n] == 0.0 {
        n -= 1;
    }
    if n == 0 {
        return true;
    }
    let lead = coeffs[n];
    let mut comp = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        comp[(i, n - 1)] = -coeffs[i] / lead;
    }
    let scale = comp.iter().map(|x| x.abs()).fold(1.0, f64::max);
    comp.complex_eigenvalues().iter().all(|z| z.im.abs() <= tol * scale)
}

/// True when every sampled line `x + t v` meets the zero set of `h` only in real points.
pub fn hyperbolicity_check(h: &MultiPoly<f64>, v: &[f64], samples: usize, seed: u64) -> Result<bool> {
    let hv = h.eval(v)?;
    if hv.abs() <= 1e-14 {
        return Err(Error::Domain("direction is a zero of the form".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = h.arity();
    for _ in 0..samples {
        let x: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        if !all_roots_real(&restrict(h, &x, v), 1e-8) {
            return Ok(false);
        }
    }
    Ok(true)
}
