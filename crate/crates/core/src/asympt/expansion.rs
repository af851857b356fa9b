//! Local expansion `p q^{-s} = sum c(m,l,n) y^m q~^{-s-l}` at a quadratic point.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::localgeo::{FactorRole, QuadraticPointData};
use crate::oracle::QuasiRationalSpec;
use crate::polyseries::{log_compose_taylor, Exponent, TruncatedSeries};

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionTable {
    /// Keyed by `(m, l, n)`.
    pub entries: BTreeMap<(Vec<u32>, u32, u32), Complex64>,
    pub max_order: u32,
    pub linear_count: usize,
}

impl ExpansionTable {
    pub fn get(&self, m: &[u32], l: u32, n: u32) -> Complex64 {
        self.entries.get(&(m.to_vec(), l, n)).copied().unwrap_or_default()
    }

    pub fn leading(&self) -> Complex64 {
        self.entries.iter().find(|(k, _)| k.1 == 0 && k.2 == 0 && k.0.iter().all(|&x| x == 0)).map(|(_, v)| *v).unwrap_or_default()
    }
}

fn binom(a: Complex64, k: u32) -> Complex64 {
    let mut b = Complex64::one();
    for i in 0..k {
        b = b * (a - i as f64) / (i as f64 + 1.0);
    }
    b
}

/// Expansion coefficients of the local integrand up to effective order `n_order`.
///
/// With a linear factor present only the leading coefficient is produced.
pub fn expansion_coefficients(
    spec: &QuasiRationalSpec<Complex64>,
    data: &QuadraticPointData,
    n_order: u32,
) -> Result<ExpansionTable> {
    let d = data.arity();
    let zero_m = vec![0u32; d];
    let mut entries = BTreeMap::new();
    if !data.linear_factors.is_empty() || n_order <= 1 {
        entries.insert((zero_m, 0, 0), data.numerator_value);
        return Ok(ExpansionTable { entries, max_order: 1, linear_count: data.linear_factors.len() });
    }
    let order = 3 * n_order;
    let z = &data.point_z;
    let s = Complex64::new(data.s.value, 0.0);
    let mut p = log_compose_taylor(&spec.numerator, z, order)?;
    for (f, role) in spec.factors.iter().zip(&data.roles) {
        if *role == FactorRole::Nonvanishing {
            let series = log_compose_taylor(&f.poly, z, order)?;
            p = p.mul(&series.pow_real(&Complex64::new(-f.power.value, 0.0))?);
        }
    }
    p = p.scale(&data.q_phase.powc(-s));
    let lead = p.constant_term();
    let tol = 1e-8 * data.numerator_value.norm().max(1e-300);
    if (lead - data.numerator_value).norm() > tol {
        return Err(Error::Numeric("local numerator disagrees with point data".into()));
    }
    let qf = &spec.factors[data.quadratic_factor].poly;
    let mut rem = log_compose_taylor(qf, z, order)?.scale(&(Complex64::one() / data.q_phase));
    rem.add_term(Exponent::zero(d), -rem.constant_term());
    for i in 0..d {
        for j in 0..d {
            let mut e = vec![0; d];
            e[i] += 1;
            e[j] += 1;
            rem.add_term(Exponent(e), Complex64::new(-data.q_matrix[i][j], 0.0));
        }
    }
    let scale = data.q_matrix.iter().flatten().fold(0.0f64, |a, b| a.max(b.abs())).max(1.0);
    for (e, c) in rem.terms() {
        if e.degree() < 3 && c.norm() > 1e-9 * scale {
            return Err(Error::Numeric("remainder has a low-order term".into()));
        }
    }
    let mut rpow = TruncatedSeries::one(d, order);
    for l in 0..n_order {
        let term = p.mul(&rpow).scale(&binom(-s, l));
        for (e, c) in term.terms() {
            let deg = e.degree() as u32;
            if deg < n_order + 2 * l && !c.is_zero() {
                let m: Vec<u32> = e.0.iter().map(|&k| k as u32).collect();
                entries.insert((m, l, 0), *c);
            }
        }
        rpow = rpow.mul(&rem);
    }
    Ok(ExpansionTable { entries, max_order: n_order, linear_count: 0 })
}
