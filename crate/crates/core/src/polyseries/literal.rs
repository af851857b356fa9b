//! JSON polynomial literals: `[{"coeff": "num/den" | float | [re, im], "exponents": [..]}]`.

use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::{json, Value};

use super::multipoly::MultiPoly;
use crate::error::{Error, Result};
use crate::scalar::{parse_rational, rat_string, FieldTag, Scalar};

/// A coefficient as written in a literal.
#[derive(Debug, Clone, PartialEq)]
pub enum LiteralCoeff {
    Rational(BigRational),
    Real(f64),
    Complex(f64, f64),
}

impl LiteralCoeff {
    pub fn parse(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s)
                .map(LiteralCoeff::Rational)
                .ok_or_else(|| Error::Parse(format!("bad rational coefficient {s:?}"))),
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(LiteralCoeff::Rational(BigRational::from_integer(i.into())))
                } else {
                    n.as_f64().map(LiteralCoeff::Real).ok_or_else(|| Error::Parse(format!("bad number {n}")))
                }
            }
            Value::Array(a) if a.len() == 2 => {
                let re = a[0].as_f64().ok_or_else(|| Error::Parse("complex real part must be a number".into()))?;
                let im = a[1].as_f64().ok_or_else(|| Error::Parse("complex imaginary part must be a number".into()))?;
                Ok(LiteralCoeff::Complex(re, im))
            }
            other => Err(Error::Parse(format!("unsupported coefficient literal {other}"))),
        }
    }

    pub fn tag(&self) -> FieldTag {
        match self {
            LiteralCoeff::Rational(_) => FieldTag::ExactRational,
            LiteralCoeff::Real(_) => FieldTag::RealFloat,
            LiteralCoeff::Complex(..) => FieldTag::ComplexFloat,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            LiteralCoeff::Rational(q) => q.to_complex(),
            LiteralCoeff::Real(x) => Complex64::new(*x, 0.0),
            LiteralCoeff::Complex(a, b) => Complex64::new(*a, *b),
        }
    }
}

/// Parsed literal: terms plus the narrowest field that represents them.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyLiteral {
    pub arity: usize,
    pub terms: Vec<(Vec<i32>, LiteralCoeff)>,
}

impl PolyLiteral {
    pub fn parse(v: &Value, arity: usize, path: &str) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::Parse(format!("{path}: polynomial must be a list of terms")))?;
        let mut terms = Vec::with_capacity(arr.len());
        for (i, t) in arr.iter().enumerate() {
            let here = format!("{path}[{i}]");
            let coeff = t.get("coeff").ok_or_else(|| Error::Parse(format!("{here}: missing \"coeff\"")))?;
            let coeff = LiteralCoeff::parse(coeff).map_err(|e| Error::Parse(format!("{here}.coeff: {e}")))?;
            let exps = t
                .get("exponents")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("{here}: missing \"exponents\" list")))?;
            if exps.len() != arity {
                return Err(Error::Parse(format!("{here}: {} exponents but {arity} variables", exps.len())));
            }
            let e = exps
                .iter()
                .map(|x| x.as_i64().and_then(|k| i32::try_from(k).ok()))
                .collect::<Option<Vec<i32>>>()
                .ok_or_else(|| Error::Parse(format!("{here}: exponents must be integers")))?;
            terms.push((e, coeff));
        }
        Ok(PolyLiteral { arity, terms })
    }

    pub fn field(&self) -> FieldTag {
        let mut tag = FieldTag::ExactRational;
        for (_, c) in &self.terms {
            tag = widest(tag, c.tag());
        }
        tag
    }

    pub fn to_exact(&self) -> Option<MultiPoly<BigRational>> {
        let mut p = MultiPoly::zero(self.arity);
        for (e, c) in &self.terms {
            match c {
                LiteralCoeff::Rational(q) => p.add_term(super::Exponent(e.clone()), q.clone()),
                _ => return None,
            }
        }
        Some(p)
    }

    pub fn to_real(&self) -> Option<MultiPoly<f64>> {
        let mut p = MultiPoly::zero(self.arity);
        for (e, c) in &self.terms {
            let x = match c {
                LiteralCoeff::Rational(q) => q.to_complex().re,
                LiteralCoeff::Real(x) => *x,
                LiteralCoeff::Complex(..) => return None,
            };
            p.add_term(super::Exponent(e.clone()), x);
        }
        Some(p)
    }

    pub fn to_complex(&self) -> MultiPoly<Complex64> {
        let mut p = MultiPoly::zero(self.arity);
        for (e, c) in &self.terms {
            p.add_term(super::Exponent(e.clone()), c.to_complex());
        }
        p
    }
}

pub fn widest(a: FieldTag, b: FieldTag) -> FieldTag {
    use FieldTag::*;
    match (a, b) {
        (ComplexFloat, _) | (_, ComplexFloat) => ComplexFloat,
        (RealFloat, _) | (_, RealFloat) => RealFloat,
        _ => ExactRational,
    }
}

/// Serialization of a coefficient into the literal format.
pub trait LiteralScalar: Scalar {
    fn to_literal(&self) -> Value;
}

impl LiteralScalar for BigRational {
    fn to_literal(&self) -> Value {
        Value::String(rat_string(self))
    }
}

impl LiteralScalar for f64 {
    fn to_literal(&self) -> Value {
        json!(self)
    }
}

impl LiteralScalar for Complex64 {
    fn to_literal(&self) -> Value {
        json!([self.re, self.im])
    }
}

pub fn poly_to_literal<S: LiteralScalar>(p: &MultiPoly<S>) -> Value {
    Value::Array(
        p.terms()
            .map(|(e, c)| json!({"coeff": c.to_literal(), "exponents": e.0}))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn exact_round_trip() {
        let v: Value = serde_json::from_str(
            r#"[{"coeff":"-1/2","exponents":[1,0,1]},{"coeff":"1","exponents":[0,0,0]},{"coeff":"123456789012345678901234567890/7","exponents":[-1,0,1]}]"#,
        )
        .unwrap();
        let lit = PolyLiteral::parse(&v, 3, "poly").unwrap();
        assert_eq!(lit.field(), FieldTag::ExactRational);
        let p = lit.to_exact().unwrap();
        assert_eq!(p.coeff(&[1, 0, 1]), rat(-1, 2));
        let back = poly_to_literal(&p);
        let again = PolyLiteral::parse(&back, 3, "poly").unwrap().to_exact().unwrap();
        assert_eq!(p, again);
        assert_eq!(poly_to_literal(&again), back);
    }

    #[test]
    fn field_detection() {
        let v: Value = serde_json::from_str(r#"[{"coeff":0.25,"exponents":[1]},{"coeff":[0,1],"exponents":[0]}]"#).unwrap();
        let lit = PolyLiteral::parse(&v, 1, "p").unwrap();
        assert_eq!(lit.field(), FieldTag::ComplexFloat);
        assert!(lit.to_exact().is_none());
    }

    #[test]
    fn diagnostics_name_the_field() {
        let v: Value = serde_json::from_str(r#"[{"coeff":"1","exponents":[1,2]}]"#).unwrap();
        let err = PolyLiteral::parse(&v, 3, "factors[0].poly").unwrap_err();
        assert!(err.to_string().contains("factors[0].poly[0]"));
    }
}
