//! Small dense matrices over a coefficient field.

use crate::error::{Error, Result};
use crate::scalar::{RealScalar, Scalar};

pub type Mat<S> = Vec<Vec<S>>;

pub fn identity<S: Scalar>(n: usize) -> Mat<S> {
    (0..n).map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect()).collect()
}

pub fn matmul<S: Scalar>(a: &Mat<S>, b: &Mat<S>) -> Mat<S> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(S::zero(), |acc, t| acc + a[i][t].clone() * b[t][j].clone()))
                .collect()
        })
        .collect()
}

pub fn transpose<S: Scalar>(a: &Mat<S>) -> Mat<S> {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn map<S: Scalar, T: Scalar>(a: &Mat<S>, f: impl Fn(&S) -> T) -> Mat<T> {
    a.iter().map(|r| r.iter().map(&f).collect()).collect()
}

pub fn to_f64<S: RealScalar>(a: &Mat<S>) -> Mat<f64> {
    map(a, |x| x.to_f64())
}

/// `a^T M b`.
pub fn bilinear(m: &Mat<f64>, a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            acc += a[i] * v * b[j];
        }
    }
    acc
}

fn pivot_row<S: Scalar>(m: &Mat<S>, col: usize, from: usize) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (r, row) in m.iter().enumerate().skip(from) {
        if row[col].is_zero() {
            continue;
        }
        let size = row[col].modulus();
        if S::TAG == crate::scalar::FieldTag::ExactRational {
            return Some(r);
        }
        if best.is_none_or(|(_, b)| size > b) {
            best = Some((r, size));
        }
    }
    best.map(|(r, _)| r)
}

pub fn determinant<S: Scalar>(a: &Mat<S>) -> S {
    let n = a.len();
    let mut m = a.clone();
    let mut det = S::one();
    for c in 0..n {
        let Some(p) = pivot_row(&m, c, c) else {
            return S::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let piv = m[c][c].clone();
        det = det * piv.clone();
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c].clone() / piv.clone();
            for j in c..n {
                let v = m[c][j].clone();
                m[r][j] = m[r][j].clone() - f.clone() * v;
            }
        }
    }
    det
}

pub fn inverse<S: Scalar>(a: &Mat<S>) -> Result<Mat<S>> {
    let n = a.len();
    let mut m = a.clone();
    let mut inv = identity::<S>(n);
    for c in 0..n {
        let p = pivot_row(&m, c, c).ok_or(Error::Rank { rank: c, dim: n })?;
        m.swap(p, c);
        inv.swap(p, c);
        let piv = m[c][c].clone();
        for j in 0..n {
            m[c][j] = m[c][j].clone() / piv.clone();
            inv[c][j] = inv[c][j].clone() / piv.clone();
        }
        for r in 0..n {
            if r == c || m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c].clone();
            for j in 0..n {
                let (mv, iv) = (m[c][j].clone(), inv[c][j].clone());
                m[r][j] = m[r][j].clone() - f.clone() * mv;
                inv[r][j] = inv[r][j].clone() - f.clone() * iv;
            }
        }
    }
    Ok(inv)
}

/// Sylvester inertia `(positive, negative, zero)` by symmetric congruence.
pub fn inertia<S: RealScalar>(a: &Mat<S>) -> (usize, usize, usize) {
    let n = a.len();
    let scale = a.iter().flatten().map(|x| x.to_f64().abs()).fold(0.0, f64::max);
    let tol = if S::TAG == crate::scalar::FieldTag::ExactRational { 0.0 } else { 1e-12 * scale.max(f64::MIN_POSITIVE) };
    let nonzero = |x: &S| if tol == 0.0 { !x.is_zero() } else { x.to_f64().abs() > tol };
    let mut m = a.clone();
    let (mut pos, mut neg) = (0, 0);
    for k in 0..n {
        let diag = (k..n).find(|&i| nonzero(&m[i][i]));
        let p = match diag {
            Some(p) => p,
            None => {
                let off = (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| nonzero(&m[i][j]));
                let Some((i, j)) = off else {
                    return (pos, neg, n - k);
                };
                for t in 0..n {
                    let v = m[j][t].clone();
                    m[i][t] = m[i][t].clone() + v;
                }
                for t in 0..n {
                    let v = m[t][j].clone();
                    m[t][i] = m[t][i].clone() + v;
                }
                i
            }
        };
        m.swap(p, k);
        for row in m.iter_mut() {
            row.swap(p, k);
        }
        let piv = m[k][k].clone();
        if piv > S::zero() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = m[i][k].clone() / piv.clone();
            for j in k..n {
                let v = m[k][j].clone();
                m[i][j] = m[i][j].clone() - f.clone() * v;
            }
            m[i][k] = S::zero();
        }
        for j in k + 1..n {
            m[k][j] = S::zero();
        }
    }
    (pos, neg, 0)
}
