//! Singular and smooth critical points on a torus `|Z_j| = e^{x_j}`,
//! found by multistart Gauss-Newton in the angles.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::polyseries::MultiPoly;
use crate::scalar::snap_rational;

pub const ACCEPT_TOL: f64 = 1e-10;
const DEDUP_TOL: f64 = 1e-6;
const FAMILY_DIAMETER: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub enum Stratum {
    QuadraticSingular,
    SmoothOnFactor(usize),
    TransverseIntersection(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPoint {
    pub z: Vec<Complex64>,
    pub stratum: Stratum,
    pub residual: f64,
    pub exact: Option<Vec<BigRational>>,
}

impl CriticalPoint {
    pub fn to_json(&self) -> Value {
        json!({
            "z": self.z.iter().map(|w| json!([w.re, w.im])).collect::<Vec<_>>(),
            "stratum": format!("{:?}", self.stratum),
            "residual": self.residual,
            "exact": self.exact.as_ref().map(|v| v.iter().map(crate::scalar::rat_string).collect::<Vec<_>>()),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOptions {
    pub starts: usize,
    pub seed: u64,
    pub max_iter: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { starts: 200, seed: 0x5eed, max_iter: 100 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalSearch {
    pub points: Vec<CriticalPoint>,
    /// Converged solutions form a positive-dimensional set.
    pub non_isolated: bool,
    /// A few converged samples when a family was detected.
    pub family_samples: Vec<Vec<Complex64>>,
}

/// Square-or-overdetermined polynomial system in `theta` with `Z_j = e^{x_j + i theta_j}`.
struct TorusSystem {
    eqs: Vec<MultiPoly<Complex64>>,
    jac: Vec<Vec<MultiPoly<Complex64>>>,
    x: Vec<f64>,
}

impl TorusSystem {
    fn new(eqs: Vec<MultiPoly<Complex64>>, x: &[f64]) -> Self {
        let d = x.len();
        let eqs: Vec<MultiPoly<Complex64>> = eqs
            .into_iter()
            .map(|p| {
                let s = p.terms().map(|(_, c)| c.norm()).fold(0.0, f64::max);
                if s > 0.0 {
                    p.scale(&Complex64::new(1.0 / s, 0.0))
                } else {
                    p
                }
            })
            .collect();
        let i = Complex64::new(0.0, 1.0);
        let jac = eqs.iter().map(|p| (0..d).map(|j| p.euler(j).scale(&i)).collect()).collect();
        TorusSystem { eqs, jac, x: x.to_vec() }
    }

    fn point(&self, theta: &[f64]) -> Vec<Complex64> {
        self.x.iter().zip(theta).map(|(&a, &t)| Complex64::from_polar(a.exp(), t)).collect()
    }

    fn residual(&self, z: &[Complex64], compensated: bool) -> DVector<f64> {
        let m = self.eqs.len();
        let mut r = DVector::zeros(2 * m);
        for (k, p) in self.eqs.iter().enumerate() {
            let v = if compensated { p.eval_complex_compensated(z) } else { p.eval_complex(z) }.unwrap_or_default();
            r[k] = v.re;
            r[m + k] = v.im;
        }
        r
    }

    fn jacobian(&self, z: &[Complex64]) -> DMatrix<f64> {
        let m = self.eqs.len();
        let d = self.x.len();
        let mut j = DMatrix::zeros(2 * m, d);
        for k in 0..m {
            for c in 0..d {
                let v = self.jac[k][c].eval_complex(z).unwrap_or_default();
                j[(k, c)] = v.re;
                j[(m + k, c)] = v.im;
            }
        }
        j
    }

    fn step(&self, theta: &[f64], compensated: bool) -> Option<DVector<f64>> {
        let z = self.point(theta);
        let r = self.residual(&z, compensated);
        let j = self.jacobian(&z);
        let svd = j.svd(true, true);
        svd.solve(&(-r), 1e-13).ok()
    }

    fn solve(&self, start: Vec<f64>, max_iter: usize) -> Option<(Vec<f64>, f64)> {
        let mut theta = start;
        let mut f = self.residual(&self.point(&theta), false).norm_squared();
        for _ in 0..max_iter {
            if f.sqrt() <= 1e-14 {
                break;
            }
            let delta = self.step(&theta, false)?;
            let mut alpha = 1.0;
            let mut improved = false;
            for _ in 0..40 {
                let trial: Vec<f64> = theta.iter().zip(delta.iter()).map(|(t, d)| t + alpha * d).collect();
                let ft = self.residual(&self.point(&trial), false).norm_squared();
                if ft <= (1.0 - 1e-4 * alpha) * f {
                    theta = trial;
                    f = ft;
                    improved = true;
                    break;
                }
                alpha *= 0.5;
            }
            if !improved || delta.norm() * alpha < 1e-15 {
                break;
            }
        }
        for _ in 0..2 {
            if let Some(delta) = self.step(&theta, true) {
                let trial: Vec<f64> = theta.iter().zip(delta.iter()).map(|(t, d)| t + d).collect();
                let ft = self.residual(&self.point(&trial), true).norm_squared();
                if ft <= f {
                    theta = trial;
                    f = ft;
                }
            }
        }
        let res = self.residual(&self.point(&theta), true).amax();
        (res <= ACCEPT_TOL).then_some((theta, res))
    }

    fn rank_deficient(&self, theta: &[f64]) -> bool {
        let j = self.jacobian(&self.point(theta));
        let sv = j.singular_values();
        let hi = sv.max();
        let lo = sv.min();
        hi == 0.0 || lo / hi < 1e-7
    }
}

fn wrap(t: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut v = t.rem_euclid(tau);
    if v > std::f64::consts::PI {
        v -= tau;
    }
    v
}

fn zdist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn run(system: &TorusSystem, opts: &SearchOptions, stratum: Stratum) -> CriticalSearch {
    let d = system.x.len();
    let mut found: Vec<(Vec<f64>, f64, bool)> = (0..opts.starts)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(i as u64 + 1)));
            let start: Vec<f64> = (0..d).map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect();
            system.solve(start, opts.max_iter).map(|(t, r)| {
                let deficient = system.rank_deficient(&t);
                (t.into_iter().map(wrap).collect::<Vec<_>>(), r, deficient)
            })
        })
        .collect();
    found.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut clusters: Vec<(Vec<Complex64>, f64, usize)> = Vec::new();
    let mut any_deficient = false;
    for (theta, res, deficient) in &found {
        any_deficient |= *deficient;
        let z = system.point(theta);
        match clusters.iter_mut().find(|(c, _, _)| zdist(c, &z) <= DEDUP_TOL) {
            Some(c) => {
                c.2 += 1;
                if *res < c.1 {
                    c.1 = *res;
                }
            }
            None => clusters.push((z, *res, 1)),
        }
    }
    let spread = clusters
        .iter()
        .flat_map(|a| clusters.iter().map(move |b| zdist(&a.0, &b.0)))
        .fold(0.0, f64::max);
    let crowded = clusters.len() > (1usize << d).max(8) && spread > FAMILY_DIAMETER;
    if any_deficient || crowded {
        return CriticalSearch {
            points: vec![],
            non_isolated: true,
            family_samples: clusters.into_iter().take(8).map(|c| c.0).collect(),
        };
    }
    CriticalSearch {
        points: clusters
            .into_iter()
            .map(|(z, residual, _)| CriticalPoint { z, stratum: stratum.clone(), residual, exact: None })
            .collect(),
        non_isolated: false,
        family_samples: vec![],
    }
}

/// Points of the torus where `Q` and its gradient vanish.
pub fn find_singular_points(q: &MultiPoly<Complex64>, x: &[f64], opts: &SearchOptions) -> CriticalSearch {
    let d = q.arity();
    let mut eqs = vec![q.clone()];
    eqs.extend((0..d).map(|i| q.euler(i)));
    run(&TorusSystem::new(eqs, x), opts, Stratum::QuadraticSingular)
}

/// Same search for an exact polynomial; rational-looking points are confirmed exactly.
pub fn find_singular_points_exact(q: &MultiPoly<BigRational>, x: &[f64], opts: &SearchOptions) -> CriticalSearch {
    let mut out = find_singular_points(&q.to_complex(), x, opts);
    for p in out.points.iter_mut() {
        if let Some(zr) = confirm_rational(q, &p.z) {
            p.z = zr.iter().map(|v| Complex64::new(crate::scalar::rat_to_f64(v), 0.0)).collect();
            p.residual = 0.0;
            p.exact = Some(zr);
        }
    }
    out
}

/// Exact check that `z` rounds to a rational singular point of `q`.
pub fn confirm_rational(q: &MultiPoly<BigRational>, z: &[Complex64]) -> Option<Vec<BigRational>> {
    let zr: Vec<BigRational> =
        z.iter().map(|w| if w.im.abs() <= 1e-8 { snap_rational(w.re, 16, 1e-8) } else { None }).collect::<Option<_>>()?;
    if !q.eval(&zr).ok()?.is_zero() {
        return None;
    }
    for i in 0..q.arity() {
        if !q.diff(i).eval(&zr).ok()?.is_zero() {
            return None;
        }
    }
    Some(zr)
}

/// Points of `H = 0` on the torus whose log-gradient is parallel to `r`.
pub fn find_smooth_critical(h: &MultiPoly<Complex64>, r: &[f64], x: &[f64], opts: &SearchOptions) -> CriticalSearch {
    let d = h.arity();
    let n = r.iter().map(|v| v * v).sum::<f64>().sqrt();
    let rh: Vec<f64> = r.iter().map(|v| v / n).collect();
    let p = (0..d).max_by(|&a, &b| rh[a].abs().partial_cmp(&rh[b].abs()).unwrap()).unwrap_or(0);
    let grads: Vec<MultiPoly<Complex64>> = (0..d).map(|i| h.euler(i)).collect();
    let mut eqs = vec![h.clone()];
    for i in (0..d).filter(|&i| i != p) {
        let a = grads[i].scale(&Complex64::new(rh[p], 0.0));
        let b = grads[p].scale(&Complex64::new(rh[i], 0.0));
        eqs.push(&a - &b);
    }
    run(&TorusSystem::new(eqs, x), opts, Stratum::SmoothOnFactor(0))
}

/// True when `r` lies in the span of the given log-gradients.
pub fn verify_transverse(r: &[f64], log_gradients: &[Vec<f64>]) -> bool {
    let d = r.len();
    let k = log_gradients.len();
    let g = DMatrix::from_fn(k, d, |i, j| log_gradients[i][j]);
    let mut gr = g.clone().insert_row(k, 0.0);
    for j in 0..d {
        gr[(k, j)] = r[j];
    }
    let rank = |m: &DMatrix<f64>| {
        let sv = m.singular_values();
        let hi = sv.max();
        sv.iter().filter(|&&s| s > 1e-9 * hi.max(1.0)).count()
    };
    rank(&g) == rank(&gr)
}
