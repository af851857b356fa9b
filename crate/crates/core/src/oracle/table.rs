//! Coefficient tables and their CSV / JSON forms.

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::{json, Value};

use super::engine::Prefactor;
use crate::error::{Error, Result};
use crate::scalar::{rat_string, Scalar};

/// Textual form of table values.
pub trait CoeffText: Scalar {
    fn exact_text(&self) -> String;
    fn float_text(&self, digits: usize) -> String {
        let z = self.to_complex();
        if z.im == 0.0 {
            format!("{:.*e}", digits.saturating_sub(1), z.re)
        } else {
            format!("{:.*e}{:+.*e}i", digits.saturating_sub(1), z.re, digits.saturating_sub(1), z.im)
        }
    }
}

impl CoeffText for BigRational {
    fn exact_text(&self) -> String {
        rat_string(self)
    }
}

impl CoeffText for f64 {
    fn exact_text(&self) -> String {
        format!("{self:e}")
    }
}

impl CoeffText for Complex64 {
    fn exact_text(&self) -> String {
        format!("{:e}{:+e}i", self.re, self.im)
    }
}

/// One coefficient `a_r = value * prefactor`.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficient<S> {
    pub r: Vec<i64>,
    pub value: S,
    pub prefactor: Prefactor<S>,
    /// False when `r` lies outside the series support (value is then zero).
    pub in_support: bool,
}

impl<S: Scalar> Coefficient<S> {
    pub fn to_complex(&self) -> Complex64 {
        self.value.to_complex() * self.prefactor.value()
    }
    pub fn to_f64(&self) -> f64 {
        self.to_complex().re
    }
}

impl Coefficient<BigRational> {
    /// Integer value when the coefficient is an exact integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        (self.prefactor.is_unit() && self.value.is_integer()).then(|| self.value.to_integer())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoeffTable<S> {
    pub arity: usize,
    pub entries: BTreeMap<Vec<i64>, S>,
    pub prefactor: Prefactor<S>,
}

impl<S: CoeffText> CoeffTable<S> {
    pub fn bounds(&self) -> Vec<(i64, i64)> {
        let mut b = vec![(i64::MAX, i64::MIN); self.arity];
        for r in self.entries.keys() {
            for (i, &x) in r.iter().enumerate() {
                b[i].0 = b[i].0.min(x);
                b[i].1 = b[i].1.max(x);
            }
        }
        b
    }

    pub fn get(&self, r: &[i64]) -> Option<&S> {
        self.entries.get(r)
    }

    pub fn value(&self, r: &[i64]) -> Complex64 {
        self.entries.get(r).map(|v| v.to_complex() * self.prefactor.value()).unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn cell(&self, v: &S, float_digits: Option<usize>) -> String {
        match float_digits {
            Some(dg) => {
                let z = v.to_complex() * self.prefactor.value();
                if S::TAG == crate::scalar::FieldTag::ComplexFloat {
                    format!("{:.*e}{:+.*e}i", dg.saturating_sub(1), z.re, dg.saturating_sub(1), z.im)
                } else {
                    format!("{:.*e}", dg.saturating_sub(1), z.re)
                }
            }
            None => {
                let base = v.exact_text();
                let pre = prefactor_text(&self.prefactor);
                if pre.is_empty() {
                    base
                } else {
                    format!("{base}*{pre}")
                }
            }
        }
    }

    pub fn write_csv<W: Write>(&self, out: W, float_digits: Option<usize>) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = (1..=self.arity).map(|i| format!("r{i}")).collect();
        header.push("value".into());
        w.write_record(&header).map_err(io_err)?;
        for (r, v) in &self.entries {
            let mut row: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            row.push(self.cell(v, float_digits));
            w.write_record(&row).map_err(io_err)?;
        }
        w.flush().map_err(|e| Error::Numeric(e.to_string()))
    }

    pub fn to_json(&self, float_digits: Option<usize>) -> Value {
        let rows: Vec<Value> = self
            .entries
            .iter()
            .map(|(r, v)| json!({"r": r, "value": self.cell(v, float_digits)}))
            .collect();
        json!({
            "arity": self.arity,
            "bounds": self.bounds(),
            "prefactor": prefactor_text(&self.prefactor),
            "coefficients": rows,
        })
    }
}

fn prefactor_text<S: CoeffText>(p: &Prefactor<S>) -> String {
    p.parts
        .iter()
        .map(|(b, e)| format!("({})^({})", b.exact_text(), e.label()))
        .collect::<Vec<_>>()
        .join("*")
}

fn io_err(e: csv::Error) -> Error {
    Error::Numeric(format!("csv write failed: {e}"))
}
