//! The worked applications as ready-made specs with reference answers.

pub mod specs;

pub use specs::*;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use statrs::function::gamma::gamma;

use crate::critpoints::{find_singular_points_exact, SearchOptions};
use crate::error::{Error, Result};
use crate::localgeo::{classify_direction, DirectionClass, QuadraticPointData};
use crate::oracle::coefficients_at;
use crate::scalar::rat;

pub const PRESET_NAMES: [&str; 6] = ["aztec", "cube_grove", "qrw2d", "fls", "superballot", "superballot-core"];

#[derive(Debug, Clone, PartialEq)]
pub enum Reference {
    Aztec,
    Grove,
    Fls(f64),
    /// `N(a,b,c)` for `1/(1-X-Y-Z+4XYZ)`.
    SuperballotCore,
    None,
}

#[derive(Debug, Clone)]
pub struct Preset {
    pub name: String,
    pub spec: ExactSpec,
    /// Further specs attached to the application, such as creation series.
    pub companions: Vec<(String, ExactSpec)>,
    pub known_points: Vec<QuadraticPointData>,
    pub reference: Reference,
    /// Log-modulus at which the known points sit.
    pub x: Vec<f64>,
}

fn ones(d: usize) -> Vec<BigRational> {
    vec![BigRational::one(); d]
}

/// Loads a preset by name; `beta` is used by `fls` only.
pub fn preset(name: &str, beta: Option<&BigRational>) -> Result<Preset> {
    let (name, spec, companions, pts, reference, x) = match name {
        "aztec" => {
            let minus = vec![-BigRational::one(); 3];
            let comp = vec![("creation".to_string(), aztec_creation_spec())];
            ("aztec", aztec_spec(), comp, vec![ones(3), minus], Reference::Aztec, vec![0.0; 3])
        }
        "cube_grove" | "grove" => {
            let comp = vec![("creation".to_string(), grove_creation_spec())];
            ("cube_grove", grove_spec(), comp, vec![ones(3)], Reference::Grove, vec![0.0; 3])
        }
        "qrw2d" | "qrw" => {
            let comp = (0..4).map(|e| (format!("amplitude_{}", CHIRALITIES[e]), qrw_amplitude_spec(e))).collect();
            ("qrw2d", qrw_amplitude_spec(0), comp, vec![], Reference::None, vec![0.0; 3])
        }
        "fls" => {
            let b = beta.cloned().unwrap_or_else(|| rat(3, 4));
            let f = crate::scalar::rat_to_f64(&b);
            ("fls", fls_spec(&b)?, vec![], vec![ones(3)], Reference::Fls(f), vec![0.0; 3])
        }
        "superballot" => {
            let comp = vec![("core".to_string(), superballot_core_scaled_spec())];
            ("superballot", superballot_spec(), comp, vec![], Reference::None, vec![0.0; 3])
        }
        "superballot-core" | "superballot_core" => {
            let mut spec = superballot_core_scaled_spec();
            spec.points = vec![vec![Complex64::new(0.5, 0.0); 3]];
            let x = vec![0.5f64.ln(); 3];
            ("superballot-core", spec, vec![], vec![vec![rat(1, 2); 3]], Reference::SuperballotCore, x)
        }
        other => return Err(Error::Parse(format!("unknown preset '{other}'; known: {}", PRESET_NAMES.join(", ")))),
    };
    let known_points = pts.iter().map(|z| QuadraticPointData::from_exact(&spec, z)).collect::<Result<_>>()?;
    Ok(Preset { name: name.to_string(), spec, companions, known_points, reference, x })
}

fn fls_dual(r: &[f64]) -> f64 {
    let (a, b, c) = (r[0], r[1], r[2]);
    2.0 * (a * b + a * c + b * c) - (a * a + b * b + c * c)
}

impl Preset {
    pub fn companion(&self, key: &str) -> Option<&ExactSpec> {
        self.companions.iter().find(|(k, _)| k == key).map(|(_, s)| s)
    }

    /// Closed-form leading asymptotics inside the elliptic part of the cone.
    pub fn reference_formula(&self, r: &[f64]) -> Option<f64> {
        let pi = std::f64::consts::PI;
        match self.reference {
            Reference::Aztec => {
                let (a, b, t) = (r[0], r[1], r[2]);
                let q = t * t - 2.0 * a * a - 2.0 * b * b;
                if q <= 0.0 || t <= 0.0 {
                    return None;
                }
                let odd = (a + b + t).rem_euclid(2.0) == 1.0;
                Some(if odd { q.sqrt().atan2(t - 2.0 * b) / pi } else { 0.0 })
            }
            Reference::Grove => {
                let (a, b, c) = (r[0], r[1], r[2]);
                let q = 2.0 * (a * b + a * c + b * c) - (a * a + b * b + c * c);
                (q > 0.0 && a + b + c > 0.0).then(|| q.sqrt().atan2(a + b - c) / pi)
            }
            Reference::Fls(beta) => {
                let q = fls_dual(r);
                (q > 0.0 && r.iter().sum::<f64>() > 0.0)
                    .then(|| 4f64.powf(1.0 - beta) / (pi.sqrt() * gamma(beta) * gamma(beta - 0.5)) * q.powf(beta - 1.5))
            }
            Reference::SuperballotCore => {
                let q = fls_dual(r);
                (q > 0.0 && r.iter().sum::<f64>() > 0.0).then(|| 2f64.powf(r.iter().sum::<f64>()) * 4.0 / (2.0 * pi) / q.sqrt())
            }
            Reference::None => None,
        }
    }

    /// Direction class at the first known point.
    pub fn validity(&self, r: &[f64]) -> Option<Result<DirectionClass>> {
        self.known_points.first().map(|p| classify_direction(p, r, 1e-9))
    }

    /// Every known point is rediscovered by the multistart search.
    pub fn verify_points(&self, opts: &SearchOptions) -> bool {
        self.known_points.iter().all(|p| {
            let q = &self.spec.factors[p.quadratic_factor].poly;
            let found = find_singular_points_exact(q, &self.x, opts);
            found
                .points
                .iter()
                .any(|c| c.residual <= 1e-10 && c.z.iter().zip(&p.point_z).all(|(a, b)| (a - b).norm() < 1e-8))
        })
    }
}

/// `E_{n-1}(i,j) = (3/2)(p_n(i,j) - p_{n-1}(i,j))` for all `i, j <= n`.
///
/// `n = 0` has no predecessor layer and is reported as true.
pub fn grove_relation_check(n: u32) -> Result<bool> {
    if n == 0 {
        return Ok(true);
    }
    let n = n as i64;
    let mut idx = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            idx.push(vec![i, j, n]);
            idx.push(vec![i, j, n - 1]);
        }
    }
    let p = coefficients_at(&grove_spec(), &idx)?;
    let e = coefficients_at(&grove_creation_spec(), &idx)?;
    let three_halves = rat(3, 2);
    Ok((0..idx.len()).step_by(2).all(|k| e[k + 1].value == &three_halves * (&p[k].value - &p[k + 1].value)))
}

/// `c(i,j,n) = 2 (p(i,j,n) - p(i,j-1,n-1))` on the whole diamond of size `n`.
pub fn aztec_creation_check(n: u32) -> Result<bool> {
    let n = n as i64;
    let mut idx = Vec::new();
    for i in -n..=n {
        for j in -n..=n {
            idx.push(vec![i, j, n]);
            idx.push(vec![i, j - 1, n - 1]);
        }
    }
    let p = coefficients_at(&aztec_spec(), &idx)?;
    let c = coefficients_at(&aztec_creation_spec(), &idx)?;
    let two = rat(2, 1);
    Ok((0..idx.len()).step_by(2).all(|k| c[k].value == &two * (&p[k].value - &p[k + 1].value)))
}

fn factorial(n: i64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Super ballot number `B(a,b,c)` from its factorial formula, valid for `b > a + c`.
pub fn superballot_closed_form(a: i64, b: i64, c: i64) -> Option<BigRational> {
    if b <= a + c || a < 0 || c < 0 {
        return None;
    }
    let num = factorial(b - a + c) * factorial(a + b - c - 1);
    let den = factorial(b - a - c - 1) * factorial(c) * factorial(a) * factorial(b);
    Some(BigRational::new(num, den))
}
