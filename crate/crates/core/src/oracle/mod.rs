//! Brute-force coefficient extraction, the ground truth for every estimate.

pub mod engine;
pub mod normalize;
pub mod spec;
pub mod table;

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;

pub use engine::{EngineOutput, Prefactor, Region, Wanted};
pub use normalize::{normalize_laurent, MonomialMap, NormalizedSpec};
pub use spec::{AnySpec, Factor, QuasiRationalSpec};
pub use table::{CoeffTable, CoeffText, Coefficient};

use crate::error::{Error, Result};

/// Fields with an expansion engine.
pub trait OracleField: CoeffText {
    fn run(ns: &NormalizedSpec<Self>, region: &Region, wanted: Wanted) -> Result<EngineOutput<Self>>;
}

impl OracleField for BigRational {
    fn run(ns: &NormalizedSpec<Self>, region: &Region, wanted: Wanted) -> Result<EngineOutput<Self>> {
        engine::run_exact(ns, region, wanted)
    }
}

impl OracleField for f64 {
    fn run(ns: &NormalizedSpec<Self>, region: &Region, wanted: Wanted) -> Result<EngineOutput<Self>> {
        engine::run_field(ns, region, wanted)
    }
}

impl OracleField for Complex64 {
    fn run(ns: &NormalizedSpec<Self>, region: &Region, wanted: Wanted) -> Result<EngineOutput<Self>> {
        engine::run_field(ns, region, wanted)
    }
}

/// All coefficients whose series index has total degree at most `order`.
pub fn expand<S: OracleField>(spec: &QuasiRationalSpec<S>, order: u32) -> Result<CoeffTable<S>> {
    let ns = normalize_laurent(spec)?;
    let out = S::run(&ns, &Region::Simplex(order), Wanted::All)?;
    let entries: BTreeMap<Vec<i64>, S> = out
        .values
        .into_iter()
        .map(|(k, v)| {
            let k: Vec<i64> = k.iter().map(|&x| x as i64).collect();
            (ns.original_index(&k), v)
        })
        .collect();
    Ok(CoeffTable { arity: spec.arity(), entries, prefactor: out.prefactor })
}

/// Several coefficients from one shared box.
pub fn coefficients_at<S: OracleField>(spec: &QuasiRationalSpec<S>, rs: &[Vec<i64>]) -> Result<Vec<Coefficient<S>>> {
    let ns = normalize_laurent(spec)?;
    let d = spec.arity();
    let mut upper = vec![0u32; d];
    let mut ks: Vec<Option<Vec<u32>>> = Vec::with_capacity(rs.len());
    for r in rs {
        if r.len() != d {
            return Err(Error::Domain("index length differs from arity".into()));
        }
        let k = ns.series_index(r);
        if k.iter().any(|&x| x < 0) {
            ks.push(None);
            continue;
        }
        let k: Vec<u32> = k
            .iter()
            .map(|&x| u32::try_from(x).map_err(|_| Error::Unsupported("index too large".into())))
            .collect::<Result<_>>()?;
        for i in 0..d {
            upper[i] = upper[i].max(k[i]);
        }
        ks.push(Some(k));
    }
    let wanted: Vec<Vec<u32>> = ks.iter().flatten().cloned().collect();
    let out = if wanted.is_empty() {
        EngineOutput { values: vec![], prefactor: Prefactor::unit() }
    } else {
        S::run(&ns, &Region::Box(upper), Wanted::Only(&wanted))?
    };
    let mut vals = out.values.into_iter();
    Ok(rs
        .iter()
        .zip(ks)
        .map(|(r, k)| match k {
            Some(_) => Coefficient {
                r: r.clone(),
                value: vals.next().expect("one value per wanted index").1,
                prefactor: out.prefactor.clone(),
                in_support: true,
            },
            None => Coefficient { r: r.clone(), value: S::zero(), prefactor: out.prefactor.clone(), in_support: false },
        })
        .collect())
}

pub fn coefficient_at<S: OracleField>(spec: &QuasiRationalSpec<S>, r: &[i64]) -> Result<Coefficient<S>> {
    Ok(coefficients_at(spec, &[r.to_vec()])?.remove(0))
}

/// `(t, log|a_{t * direction}| / t)`; zero coefficients give `-inf`.
pub fn empirical_decay<S: OracleField>(spec: &QuasiRationalSpec<S>, direction: &[i64], ts: &[i64]) -> Result<Vec<(i64, f64)>> {
    let rs: Vec<Vec<i64>> = ts.iter().map(|&t| direction.iter().map(|&x| x * t).collect()).collect();
    let cs = coefficients_at(spec, &rs)?;
    Ok(ts
        .iter()
        .zip(cs)
        .map(|(&t, c)| {
            let m = c.to_complex().norm();
            let v = if m == 0.0 { f64::NEG_INFINITY } else { m.ln() / t as f64 };
            (t, v)
        })
        .collect())
}
