//! Quasirational input data `F = P * prod Q_j^{-s_j}` and its JSON form.

use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::polyseries::{poly_to_literal, LiteralScalar, MultiPoly, PolyLiteral};
use crate::scalar::{parse_rational, FieldTag, Power, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct Factor<S> {
    pub poly: MultiPoly<S>,
    pub power: Power,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiRationalSpec<S> {
    pub variables: Vec<String>,
    pub numerator: MultiPoly<S>,
    pub factors: Vec<Factor<S>>,
    pub cone_direction_u: Vec<f64>,
    /// Optional known singular points (hints for the asymptotic engine).
    pub points: Vec<Vec<Complex64>>,
}

impl<S: Scalar> QuasiRationalSpec<S> {
    pub fn new(numerator: MultiPoly<S>, factors: Vec<Factor<S>>, u: Vec<f64>) -> Result<Self> {
        let d = numerator.arity();
        let variables = default_names(d);
        let spec = QuasiRationalSpec { variables, numerator, factors, cone_direction_u: u, points: vec![] };
        spec.validate()?;
        Ok(spec)
    }

    pub fn arity(&self) -> usize {
        self.numerator.arity()
    }

    pub fn field(&self) -> FieldTag {
        S::TAG
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.arity();
        if self.variables.len() != d {
            return Err(Error::Parse(format!("{} variable names for arity {d}", self.variables.len())));
        }
        if self.cone_direction_u.len() != d {
            return Err(Error::Parse("cone_direction_u length differs from arity".into()));
        }
        for (j, f) in self.factors.iter().enumerate() {
            if f.poly.arity() != d {
                return Err(Error::Parse(format!("factors[{j}]: arity mismatch")));
            }
            if f.power.is_zero() {
                return Err(Error::Parse(format!("factors[{j}]: power must be nonzero")));
            }
            if f.poly.is_zero() {
                return Err(Error::Parse(format!("factors[{j}]: zero polynomial")));
            }
        }
        for (i, p) in self.points.iter().enumerate() {
            if p.len() != d {
                return Err(Error::Parse(format!("points[{i}]: length differs from arity")));
            }
        }
        Ok(())
    }

    pub fn map_field<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> QuasiRationalSpec<T> {
        QuasiRationalSpec {
            variables: self.variables.clone(),
            numerator: self.numerator.map_coeffs(f),
            factors: self
                .factors
                .iter()
                .map(|x| Factor { poly: x.poly.map_coeffs(f), power: x.power.clone() })
                .collect(),
            cone_direction_u: self.cone_direction_u.clone(),
            points: self.points.clone(),
        }
    }

    pub fn to_complex(&self) -> QuasiRationalSpec<Complex64> {
        self.map_field(|c| c.to_complex())
    }

    /// Evaluates F itself, using principal branches for fractional powers.
    pub fn eval_complex(&self, z: &[Complex64]) -> Result<Complex64> {
        let mut v = self.numerator.eval_complex(z)?;
        for f in &self.factors {
            let q = f.poly.eval_complex(z)?;
            v *= pow_complex(q, -f.power.value);
        }
        Ok(v)
    }
}

pub fn pow_complex(z: Complex64, a: f64) -> Complex64 {
    if a.fract() == 0.0 && a.abs() < 1e9 {
        z.powi(a as i32)
    } else {
        z.powf(a)
    }
}

pub fn default_names(d: usize) -> Vec<String> {
    const NAMES: [&str; 4] = ["X", "Y", "Z", "W"];
    if d <= NAMES.len() {
        NAMES[..d].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=d).map(|i| format!("X{i}")).collect()
    }
}

impl<S: LiteralScalar> QuasiRationalSpec<S> {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("variables".into(), json!(self.variables));
        m.insert("numerator".into(), poly_to_literal(&self.numerator));
        m.insert(
            "factors".into(),
            Value::Array(
                self.factors
                    .iter()
                    .map(|f| {
                        let power = match &f.power.exact {
                            Some(_) => Value::String(f.power.label()),
                            None => json!(f.power.value),
                        };
                        json!({"poly": poly_to_literal(&f.poly), "power": power})
                    })
                    .collect(),
            ),
        );
        m.insert("cone_direction_u".into(), json!(self.cone_direction_u));
        if !self.points.is_empty() {
            let pts: Vec<Value> = self
                .points
                .iter()
                .map(|p| Value::Array(p.iter().map(|z| json!([z.re, z.im])).collect()))
                .collect();
            m.insert("points".into(), Value::Array(pts));
        }
        Value::Object(m)
    }
}

/// A spec in whichever field its literals require.
#[derive(Debug, Clone, PartialEq)]
pub enum AnySpec {
    Exact(QuasiRationalSpec<BigRational>),
    Real(QuasiRationalSpec<f64>),
    Complex(QuasiRationalSpec<Complex64>),
}

impl AnySpec {
    pub fn parse_str(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
        Self::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("spec must be a JSON object".into()))?;
        let variables: Vec<String> = obj
            .get("variables")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"variables\" list".into()))?
            .iter()
            .map(|x| x.as_str().map(str::to_string))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Parse("variables: names must be strings".into()))?;
        let d = variables.len();
        if d == 0 {
            return Err(Error::Parse("variables: at least one variable needed".into()));
        }
        let numerator = PolyLiteral::parse(
            obj.get("numerator").ok_or_else(|| Error::Parse("missing \"numerator\"".into()))?,
            d,
            "numerator",
        )?;
        let mut lits = vec![numerator];
        let mut powers = vec![];
        let factors = obj
            .get("factors")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"factors\" list".into()))?;
        for (j, f) in factors.iter().enumerate() {
            let here = format!("factors[{j}]");
            let poly = f.get("poly").ok_or_else(|| Error::Parse(format!("{here}: missing \"poly\"")))?;
            lits.push(PolyLiteral::parse(poly, d, &format!("{here}.poly"))?);
            let p = f.get("power").ok_or_else(|| Error::Parse(format!("{here}: missing \"power\"")))?;
            powers.push(parse_power(p).map_err(|e| Error::Parse(format!("{here}.power: {e}")))?);
        }
        let u: Vec<f64> = obj
            .get("cone_direction_u")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"cone_direction_u\"".into()))?
            .iter()
            .map(Value::as_f64)
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Parse("cone_direction_u: entries must be numbers".into()))?;
        let mut points = vec![];
        if let Some(ps) = obj.get("points") {
            let ps = ps.as_array().ok_or_else(|| Error::Parse("points: must be a list".into()))?;
            for (i, p) in ps.iter().enumerate() {
                let coords = p.as_array().ok_or_else(|| Error::Parse(format!("points[{i}]: must be a list")))?;
                let mut z = vec![];
                for c in coords {
                    let lc = crate::polyseries::literal::LiteralCoeff::parse(c)
                        .map_err(|e| Error::Parse(format!("points[{i}]: {e}")))?;
                    z.push(lc.to_complex());
                }
                points.push(z);
            }
        }
        let tag = lits.iter().fold(FieldTag::ExactRational, |t, l| crate::polyseries::literal::widest(t, l.field()));
        fn build<S: Scalar>(
            lits: &[PolyLiteral],
            conv: impl Fn(&PolyLiteral) -> MultiPoly<S>,
            powers: &[Power],
            variables: Vec<String>,
            u: Vec<f64>,
            points: Vec<Vec<Complex64>>,
        ) -> Result<QuasiRationalSpec<S>> {
            let spec = QuasiRationalSpec {
                variables,
                numerator: conv(&lits[0]),
                factors: lits[1..]
                    .iter()
                    .zip(powers)
                    .map(|(l, p)| Factor { poly: conv(l), power: p.clone() })
                    .collect(),
                cone_direction_u: u,
                points,
            };
            spec.validate()?;
            Ok(spec)
        }
        Ok(match tag {
            FieldTag::ExactRational => AnySpec::Exact(build(
                &lits,
                |l| l.to_exact().expect("exact literal"),
                &powers,
                variables,
                u,
                points,
            )?),
            FieldTag::RealFloat => AnySpec::Real(build(
                &lits,
                |l| l.to_real().expect("real literal"),
                &powers,
                variables,
                u,
                points,
            )?),
            FieldTag::ComplexFloat => {
                AnySpec::Complex(build(&lits, |l| l.to_complex(), &powers, variables, u, points)?)
            }
        })
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnySpec::Exact(s) => s.to_json(),
            AnySpec::Real(s) => s.to_json(),
            AnySpec::Complex(s) => s.to_json(),
        }
    }

    pub fn to_complex(&self) -> QuasiRationalSpec<Complex64> {
        match self {
            AnySpec::Exact(s) => s.to_complex(),
            AnySpec::Real(s) => s.to_complex(),
            AnySpec::Complex(s) => s.clone(),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            AnySpec::Exact(s) => s.arity(),
            AnySpec::Real(s) => s.arity(),
            AnySpec::Complex(s) => s.arity(),
        }
    }
}

fn parse_power(v: &Value) -> Result<Power> {
    match v {
        Value::String(s) if s.contains('/') || !s.contains(['.', 'e', 'E']) => parse_rational(s)
            .map(Power::rational)
            .ok_or_else(|| Error::Parse(format!("bad power {s:?}"))),
        Value::String(s) => s.trim().parse::<f64>().map(Power::float).map_err(|_| Error::Parse(format!("bad power {s:?}"))),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Power::int(i)),
            None => n.as_f64().map(Power::float).ok_or_else(|| Error::Parse("bad power".into())),
        },
        _ => Err(Error::Parse("power must be a string or number".into())),
    }
}
