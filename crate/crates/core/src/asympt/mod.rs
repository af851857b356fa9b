//! Coefficient asymptotics assembled from point contributions.

pub mod dualpow;
pub mod expansion;
pub mod formulas;

pub use dualpow::dual_power_derivative;
pub use expansion::{expansion_coefficients, ExpansionTable};
pub use formulas::{
    common_zero_line, cone_plane_asymptotics, constant_consistency, decay_exponent, double_residue, local_degree,
    point_residue, quadratic_asymptotics, residue_formulas, riesz_constant, smooth_asymptotics, z_power,
};

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::critpoints::{find_singular_points, find_singular_points_exact, find_smooth_critical, SearchOptions};
use crate::error::{Error, Result};
use crate::localgeo::{classify_direction, DirectionTag, QuadraticPointData};
use crate::oracle::{AnySpec, QuasiRationalSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FormulaTag {
    QuadraticSeries,
    ConePlane,
    Smooth,
    ExponentiallySmall,
    VanishingNumerator,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymOptions {
    /// Log-modulus of the torus; zero when absent.
    pub x: Option<Vec<f64>>,
    /// Effective order of the quadratic-point series.
    pub order: u32,
    pub smooth: bool,
    pub tau: f64,
    pub search: SearchOptions,
}

impl Default for AsymOptions {
    fn default() -> Self {
        AsymOptions { x: None, order: 1, smooth: false, tau: 1e-9, search: SearchOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointTerm {
    pub z: Vec<Complex64>,
    pub contribution: Complex64,
    pub class: Option<DirectionTag>,
    pub formula: FormulaTag,
    pub decay: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticEstimate {
    pub r: Vec<f64>,
    pub value: Complex64,
    pub decay_exponent: f64,
    pub terms: Vec<PointTerm>,
    pub formula_tag: String,
}

impl AsymptoticEstimate {
    pub fn to_json(&self) -> Value {
        json!({
            "r": self.r,
            "value": [self.value.re, self.value.im],
            "decay_exponent": self.decay_exponent,
            "formula": self.formula_tag,
            "terms": self.terms.iter().map(|t| json!({
                "z": t.z.iter().map(|w| json!([w.re, w.im])).collect::<Vec<_>>(),
                "contribution": [t.contribution.re, t.contribution.im],
                "class": t.class.map(|c| c.name()),
                "formula": format!("{:?}", t.formula),
                "decay": t.decay,
            })).collect::<Vec<_>>(),
        })
    }
}

struct PreparedPoint {
    data: QuadraticPointData,
    table: ExpansionTable,
    degree: f64,
}

/// Quadratic points and expansion tables, reusable across directions.
pub struct LocalPlan {
    spec: QuasiRationalSpec<Complex64>,
    points: Vec<PreparedPoint>,
    x: Vec<f64>,
    options: AsymOptions,
}

fn startup_check() {
    static ONCE: std::sync::OnceLock<bool> = std::sync::OnceLock::new();
    assert!(*ONCE.get_or_init(constant_consistency), "gamma constant failed its d = 3 reduction");
}

impl LocalPlan {
    pub fn new(spec: &AnySpec, options: &AsymOptions) -> Result<Self> {
        startup_check();
        let cspec = spec.to_complex();
        let d = cspec.arity();
        let x = options.x.clone().unwrap_or_else(|| vec![0.0; d]);
        let mut zs: Vec<Vec<Complex64>> = cspec.points.clone();
        if zs.is_empty() {
            for (idx, f) in cspec.factors.iter().enumerate().filter(|(_, f)| f.power.value > 0.0) {
                let found = match spec {
                    AnySpec::Exact(s) => find_singular_points_exact(&s.factors[idx].poly, &x, &options.search),
                    _ => find_singular_points(&f.poly, &x, &options.search),
                };
                if found.non_isolated {
                    return Err(Error::Unsupported("a factor has a non-isolated singular set on the torus".into()));
                }
                for p in found.points {
                    if !zs.iter().any(|z| z.iter().zip(&p.z).all(|(a, b)| (a - b).norm() < 1e-6)) {
                        zs.push(p.z);
                    }
                }
            }
        }
        let mut points = Vec::new();
        for z in zs {
            let data = match spec {
                AnySpec::Exact(s) => QuadraticPointData::at_point(s, &z)?,
                _ => QuadraticPointData::from_numeric(&cspec, &z)?,
            };
            let table = if data.numerator_value.norm() <= 1e-14 {
                ExpansionTable { entries: Default::default(), max_order: 0, linear_count: data.linear_factors.len() }
            } else {
                expansion_coefficients(&cspec, &data, options.order)?
            };
            let degree = local_degree(&cspec, &data.point_z)?;
            points.push(PreparedPoint { data, table, degree });
        }
        Ok(LocalPlan { spec: cspec, points, x, options: options.clone() })
    }

    pub fn point_data(&self) -> impl Iterator<Item = &QuadraticPointData> {
        self.points.iter().map(|p| &p.data)
    }

    pub fn estimate(&self, r: &[f64]) -> Result<AsymptoticEstimate> {
        let d = self.spec.arity();
        if r.len() != d {
            return Err(Error::Domain("direction length differs from arity".into()));
        }
        let mut terms = Vec::new();
        for p in &self.points {
            let data = &p.data;
            let point_decay = decay_exponent(d, &[p.degree]);
            if data.numerator_value.norm() <= 1e-14 {
                terms.push(PointTerm {
                    z: data.point_z.clone(),
                    contribution: Complex64::new(0.0, 0.0),
                    class: None,
                    formula: FormulaTag::VanishingNumerator,
                    decay: point_decay,
                });
                continue;
            }
            let class = classify_direction(data, r, self.options.tau)?;
            let (value, formula) = match class.tag {
                DirectionTag::OutsideNormalCone => (Complex64::new(0.0, 0.0), FormulaTag::ExponentiallySmall),
                DirectionTag::ObstructedBoundary | DirectionTag::Indeterminate => {
                    return Err(Error::Refusal {
                        class: class.tag.name().into(),
                        detail: format!("direction {r:?} is not resolved at point {:?}", data.point_z),
                    })
                }
                _ if data.linear_factors.is_empty() => {
                    (quadratic_asymptotics(data, &p.table, r, self.options.order)?, FormulaTag::QuadraticSeries)
                }
                _ => (cone_plane_asymptotics(data, r)?, FormulaTag::ConePlane),
            };
            terms.push(PointTerm { z: data.point_z.clone(), contribution: value, class: Some(class.tag), formula, decay: point_decay });
        }
        if self.options.smooth {
            terms.extend(self.smooth_terms(r)?);
        }
        let live: Vec<&PointTerm> =
            terms.iter().filter(|t| matches!(t.formula, FormulaTag::QuadraticSeries | FormulaTag::ConePlane | FormulaTag::Smooth)).collect();
        if live.is_empty() {
            let outside = terms.iter().any(|t| t.formula == FormulaTag::ExponentiallySmall);
            return Err(Error::Refusal {
                class: if outside { "OutsideNormalCone" } else { "NoContribution" }.into(),
                detail: "no point contributes at polynomial scale; coefficients decay exponentially relative to Z^-r".into(),
            });
        }
        let mut value: Complex64 = live.iter().map(|t| t.contribution).sum();
        let mass: f64 = live.iter().map(|t| t.contribution.norm()).sum();
        if value.norm() <= 1e-12 * mass {
            value = Complex64::new(0.0, 0.0);
        }
        let decay = live.iter().map(|t| t.decay).fold(f64::INFINITY, f64::min);
        let mut tags: Vec<String> = live.iter().map(|t| format!("{:?}", t.formula)).collect();
        tags.dedup();
        Ok(AsymptoticEstimate { r: r.to_vec(), value, decay_exponent: decay, terms, formula_tag: tags.join("+") })
    }

    fn smooth_terms(&self, r: &[f64]) -> Result<Vec<PointTerm>> {
        let d = self.spec.arity();
        let mut out = Vec::new();
        for (j, f) in self.spec.factors.iter().enumerate() {
            if f.power.as_integer() != Some(1) {
                continue;
            }
            let found = find_smooth_critical(&f.poly, r, &self.x, &self.options.search);
            if found.non_isolated {
                continue;
            }
            for cp in found.points {
                let on_other = self.spec.factors.iter().enumerate().any(|(i, g)| {
                    i != j && g.poly.eval_complex(&cp.z).map(|v| v.norm() <= 1e-9).unwrap_or(true)
                });
                let singular = (0..d).all(|i| f.poly.euler(i).eval_complex(&cp.z).map(|v| v.norm() <= 1e-9).unwrap_or(true));
                if on_other || singular {
                    continue;
                }
                let value = smooth_asymptotics(&self.spec, j, &cp.z, r)?;
                out.push(PointTerm {
                    z: cp.z,
                    contribution: value,
                    class: None,
                    formula: FormulaTag::Smooth,
                    decay: (d as f64 - 1.0) / 2.0,
                });
            }
        }
        Ok(out)
    }
}

/// Predicted `a_r` summed over the contributing points.
pub fn total_asymptotics(spec: &AnySpec, r: &[f64], options: &AsymOptions) -> Result<AsymptoticEstimate> {
    LocalPlan::new(spec, options)?.estimate(r)
}
