//! Where a direction sits relative to the normal cone: elliptic cone,
//! teardrop region E, obstructed arc, or outside.

use serde::Serialize;

use super::point::QuadraticPointData;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DirectionTag {
    InteriorEllipticCone,
    InteriorE,
    ObstructedBoundary,
    OutsideNormalCone,
    Indeterminate,
}

impl DirectionTag {
    pub fn name(&self) -> &'static str {
        match self {
            DirectionTag::InteriorEllipticCone => "InteriorEllipticCone",
            DirectionTag::InteriorE => "InteriorE",
            DirectionTag::ObstructedBoundary => "ObstructedBoundary",
            DirectionTag::OutsideNormalCone => "OutsideNormalCone",
            DirectionTag::Indeterminate => "Indeterminate",
        }
    }

    pub fn is_interior(&self) -> bool {
        matches!(self, DirectionTag::InteriorEllipticCone | DirectionTag::InteriorE)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionClass {
    pub tag: DirectionTag,
    /// Signed distance proxy of the deciding quantity.
    pub margin: f64,
    /// `q*(r, r)` for the unnormalized `r`.
    pub dual_rr: f64,
    /// `q*(r, l)` for the unnormalized `r` when a plane is present.
    pub dual_rl: Option<f64>,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn classify_direction(data: &QuadraticPointData, r: &[f64], tau: f64) -> Result<DirectionClass> {
    let d = data.arity();
    if r.len() != d {
        return Err(Error::Domain("direction length differs from arity".into()));
    }
    let nr = norm(r);
    if nr == 0.0 {
        return Err(Error::Domain("zero direction".into()));
    }
    let u = &data.cone_direction_u;
    let nu = norm(u);
    let rh: Vec<f64> = r.iter().map(|x| x / nr).collect();
    let uh: Vec<f64> = u.iter().map(|x| x / nu).collect();
    let a = data.dual_eval(&rh, &rh);
    let dual_rr = data.dual_eval(r, r);
    let nappe = dot(&rh, &uh);
    let mk = |tag, margin, dual_rl| Ok(DirectionClass { tag, margin, dual_rr, dual_rl });
    match data.linear_factors.len() {
        0 => {
            if a.abs() <= tau {
                mk(DirectionTag::Indeterminate, a, None)
            } else if a > 0.0 && nappe < 0.0 {
                mk(DirectionTag::InteriorEllipticCone, a, None)
            } else {
                mk(DirectionTag::OutsideNormalCone, a, None)
            }
        }
        1 => {
            let ell = &data.linear_factors[0].covector;
            let nl = norm(ell);
            let lh: Vec<f64> = ell.iter().map(|x| x / nl).collect();
            let c = data.dual_eval(&lh, &lh);
            if c >= -tau {
                return Err(Error::Geometry("plane conormal lies in the closed elliptic dual cone".into()));
            }
            let b = data.dual_eval(&rh, &lh);
            let dual_rl = Some(data.dual_eval(r, ell));
            if a > tau {
                return if nappe < 0.0 {
                    mk(DirectionTag::InteriorEllipticCone, a, dual_rl)
                } else {
                    mk(DirectionTag::OutsideNormalCone, a, dual_rl)
                };
            }
            if a >= -tau {
                if nappe >= 0.0 {
                    return mk(DirectionTag::OutsideNormalCone, a, dual_rl);
                }
                return if b < -tau {
                    mk(DirectionTag::ObstructedBoundary, a, dual_rl)
                } else {
                    mk(DirectionTag::Indeterminate, a, dual_rl)
                };
            }
            // a < 0: look for r = lambda l + w with lambda > 0 and w inside the cone.
            let disc = b * b - a * c;
            let vertex = b / c;
            if disc.abs() <= tau {
                return if vertex > tau {
                    mk(DirectionTag::Indeterminate, disc, dual_rl)
                } else {
                    mk(DirectionTag::OutsideNormalCone, disc, dual_rl)
                };
            }
            if disc < 0.0 {
                return mk(DirectionTag::OutsideNormalCone, disc, dual_rl);
            }
            let root = disc.sqrt();
            let hi = ((b - root) / c).max((b + root) / c);
            if hi <= tau {
                return mk(DirectionTag::OutsideNormalCone, hi, dual_rl);
            }
            let lo = ((b - root) / c).min((b + root) / c);
            if lo.abs() <= tau {
                return mk(DirectionTag::Indeterminate, lo, dual_rl);
            }
            let w: Vec<f64> = rh.iter().zip(&lh).map(|(x, l)| x - vertex * l).collect();
            let side = dot(&w, &uh);
            if side.abs() <= tau {
                mk(DirectionTag::Indeterminate, side, dual_rl)
            } else if side < 0.0 {
                mk(DirectionTag::InteriorE, disc, dual_rl)
            } else {
                mk(DirectionTag::OutsideNormalCone, disc, dual_rl)
            }
        }
        k => Err(Error::Unsupported(format!("{k} linear factors at one point"))),
    }
}
