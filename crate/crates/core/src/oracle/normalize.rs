//! Log-affine normalization of Laurent data into ordinary power series.


use super::spec::QuasiRationalSpec;
use crate::error::{Error, Result};
use crate::polyseries::{Exponent, MultiPoly};
use crate::scalar::{Power, Scalar};

/// Unimodular exponent map `e -> M e` with `M = I + c e_g^T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMap {
    pub time_axis: usize,
    pub shear: Vec<i32>,
}

impl MonomialMap {
    pub fn identity(d: usize) -> Self {
        MonomialMap { time_axis: 0, shear: vec![0; d] }
    }

    pub fn is_identity(&self) -> bool {
        self.shear.iter().all(|&c| c == 0)
    }

    pub fn apply(&self, e: &[i32]) -> Vec<i32> {
        let t = e[self.time_axis];
        e.iter().zip(&self.shear).map(|(&x, &c)| x + c * t).collect()
    }

    pub fn apply_i64(&self, e: &[i64]) -> Vec<i64> {
        let t = e[self.time_axis];
        e.iter().zip(&self.shear).map(|(&x, &c)| x + c as i64 * t).collect()
    }

    pub fn invert_i64(&self, k: &[i64]) -> Vec<i64> {
        let t = k[self.time_axis];
        k.iter().zip(&self.shear).map(|(&x, &c)| x - c as i64 * t).collect()
    }

    /// Rows of the integer matrix.
    pub fn matrix(&self) -> Vec<Vec<i32>> {
        let d = self.shear.len();
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| i32::from(i == j) + if j == self.time_axis { self.shear[i] } else { 0 })
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedFactor<S> {
    /// Power series in the new variables with nonzero constant term.
    pub poly: MultiPoly<S>,
    pub power: Power,
    /// Original monomial divided out of the factor.
    pub dominant: Vec<i32>,
}

/// `F(Z) = W^shift * G(W)` with `Z^e = W^{M e}` and `G` an ordinary power series.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedSpec<S> {
    pub map: MonomialMap,
    pub laurent_shift: Vec<i64>,
    pub numerator: MultiPoly<S>,
    pub factors: Vec<NormalizedFactor<S>>,
}

impl<S: Scalar> NormalizedSpec<S> {
    pub fn arity(&self) -> usize {
        self.map.shear.len()
    }

    /// Index of `a_r` in the series `G`.
    pub fn series_index(&self, r: &[i64]) -> Vec<i64> {
        self.map.apply_i64(r).iter().zip(&self.laurent_shift).map(|(a, s)| a - s).collect()
    }

    pub fn original_index(&self, k: &[i64]) -> Vec<i64> {
        let shifted: Vec<i64> = k.iter().zip(&self.laurent_shift).map(|(a, s)| a + s).collect();
        self.map.invert_i64(&shifted)
    }
}

pub fn normalize_laurent<S: Scalar>(spec: &QuasiRationalSpec<S>) -> Result<NormalizedSpec<S>> {
    spec.validate()?;
    let d = spec.arity();
    let u = &spec.cone_direction_u;
    let g = (0..d)
        .min_by(|&a, &b| u[a].partial_cmp(&u[b]).unwrap_or(std::cmp::Ordering::Equal))
        .unwrap_or(0);
    let scale = u.iter().map(|x| x.abs()).fold(0.0, f64::max).max(1.0);

    let mut dominants = Vec::with_capacity(spec.factors.len());
    let mut shear = vec![0i32; d];
    for (j, f) in spec.factors.iter().enumerate() {
        let mut best: Option<(&Exponent, f64)> = None;
        let mut second = f64::NEG_INFINITY;
        for (e, _) in f.poly.terms() {
            let w = e.dot(u);
            match best {
                Some((_, b)) if w <= b => second = second.max(w),
                Some((_, b)) => {
                    second = second.max(b);
                    best = Some((e, w));
                }
                None => best = Some((e, w)),
            }
        }
        let (m, w) = best.ok_or_else(|| Error::NotNormalized(format!("factor {j} is zero")))?;
        if w - second <= 1e-12 * scale {
            return Err(Error::NotNormalized(format!(
                "cone direction does not isolate a dominant monomial of factor {j}"
            )));
        }
        for (e, _) in f.poly.terms() {
            let delta = e.sub(m);
            let dt = delta.0[g];
            if dt < 0 {
                return Err(Error::Unsupported(format!(
                    "factor {j} has a term below its dominant monomial along axis {g}"
                )));
            }
            for i in (0..d).filter(|&i| i != g) {
                let di = delta.0[i];
                if dt == 0 {
                    if di < 0 {
                        return Err(Error::Unsupported(format!(
                            "factor {j} cannot be sheared into a power series"
                        )));
                    }
                } else if di < 0 {
                    shear[i] = shear[i].max((-di + dt - 1) / dt);
                }
            }
        }
        dominants.push(m.0.clone());
    }
    let map = MonomialMap { time_axis: g, shear };

    let mut prefactor = vec![0i64; d];
    for (f, m) in spec.factors.iter().zip(&dominants) {
        if m.iter().all(|&x| x == 0) {
            continue;
        }
        let s = f.power.as_integer().ok_or_else(|| {
            Error::Unsupported("a factor needing a monomial shift carries a non-integer power".into())
        })?;
        for i in 0..d {
            prefactor[i] -= s * m[i] as i64;
        }
    }
    let pre32: Vec<i32> = prefactor
        .iter()
        .map(|&x| i32::try_from(x).map_err(|_| Error::Unsupported("monomial shift overflows".into())))
        .collect::<Result<_>>()?;

    let factors = spec
        .factors
        .iter()
        .zip(&dominants)
        .map(|(f, m)| {
            let neg: Vec<i32> = m.iter().map(|x| -x).collect();
            NormalizedFactor {
                poly: f.poly.mul_monomial(&neg).map_exponents(|e| map.apply(e)),
                power: f.power.clone(),
                dominant: m.clone(),
            }
        })
        .collect::<Vec<_>>();
    for (j, f) in factors.iter().enumerate() {
        debug_assert!(!f.poly.has_negative_exponents());
        if f.poly.constant_term().is_zero() {
            return Err(Error::NotNormalized(format!("factor {j} has zero constant term")));
        }
    }

    let num = spec.numerator.mul_monomial(&pre32).map_exponents(|e| map.apply(e));
    let shift: Vec<i64> = num
        .min_exponents()
        .map(|m| m.iter().map(|&x| x as i64).collect())
        .unwrap_or_else(|| vec![0; d]);
    let neg_shift: Vec<i32> = shift.iter().map(|&x| -(x as i32)).collect();
    Ok(NormalizedSpec { map, laurent_shift: shift, numerator: num.mul_monomial(&neg_shift), factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::spec::Factor;
    use crate::scalar::{int, rat};
    use num_rational::BigRational;

    fn aztec_q() -> MultiPoly<BigRational> {
        MultiPoly::from_terms(
            3,
            [
                (vec![0, 0, 0], int(1)),
                (vec![1, 0, 1], rat(-1, 2)),
                (vec![-1, 0, 1], rat(-1, 2)),
                (vec![0, 1, 1], rat(-1, 2)),
                (vec![0, -1, 1], rat(-1, 2)),
                (vec![0, 0, 2], int(1)),
            ],
        )
    }

    #[test]
    fn aztec_shear() {
        let spec = QuasiRationalSpec::new(
            MultiPoly::monomial(3, vec![0, 0, 1], rat(1, 2)),
            vec![Factor { poly: aztec_q(), power: Power::int(1) }],
            vec![0.0, 0.0, -1.0],
        )
        .unwrap();
        let n = normalize_laurent(&spec).unwrap();
        assert_eq!(n.map.matrix(), vec![vec![1, 0, 1], vec![0, 1, 1], vec![0, 0, 1]]);
        assert_eq!(n.laurent_shift, vec![1, 1, 1]);
        assert_eq!(n.numerator, MultiPoly::constant(3, rat(1, 2)));
        assert_eq!(n.factors[0].poly.coeff(&[0, 1, 1]), rat(-1, 2));
        assert_eq!(n.series_index(&[0, 0, 1]), vec![0, 0, 0]);
        assert_eq!(n.original_index(&[0, 0, 0]), vec![0, 0, 1]);
    }

    #[test]
    fn plain_polynomial_untouched() {
        let q = MultiPoly::from_terms(2, [(vec![0, 0], int(1)), (vec![1, 0], int(-1)), (vec![0, 1], int(-1))]);
        let spec =
            QuasiRationalSpec::new(MultiPoly::one(2), vec![Factor { poly: q.clone(), power: Power::int(1) }], vec![-1.0, -1.0])
                .unwrap();
        let n = normalize_laurent(&spec).unwrap();
        assert!(n.map.is_identity());
        assert_eq!(n.laurent_shift, vec![0, 0]);
        assert_eq!(n.factors[0].poly, q);
    }

    #[test]
    fn fractional_power_with_shift_is_unsupported() {
        let q = MultiPoly::from_terms(1, [(vec![1], int(1)), (vec![2], int(-1))]);
        let spec = QuasiRationalSpec::new(MultiPoly::one(1), vec![Factor { poly: q, power: Power::rational(rat(1, 2)) }], vec![-1.0])
            .unwrap();
        assert!(matches!(normalize_laurent(&spec), Err(Error::Unsupported(_))));
    }
}
