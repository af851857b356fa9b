//! Generating functions of the worked applications.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::oracle::{Factor, QuasiRationalSpec};
use crate::polyseries::MultiPoly;
use crate::scalar::{int, rat, Power};

pub type ExactPoly = MultiPoly<BigRational>;
pub type ExactSpec = QuasiRationalSpec<BigRational>;

/// Builds a polynomial from `(numerator, denominator, exponents)` triples.
pub fn poly(arity: usize, terms: &[(i64, i64, &[i32])]) -> ExactPoly {
    MultiPoly::from_terms(arity, terms.iter().map(|(n, d, e)| (e.to_vec(), rat(*n, *d))))
}

fn factor(p: ExactPoly, s: Power) -> Factor<BigRational> {
    Factor { poly: p, power: s }
}

pub fn aztec_denominator() -> ExactPoly {
    poly(
        3,
        &[
            (1, 1, &[0, 0, 0]),
            (-1, 2, &[1, 0, 1]),
            (-1, 2, &[-1, 0, 1]),
            (-1, 2, &[0, 1, 1]),
            (-1, 2, &[0, -1, 1]),
            (1, 1, &[0, 0, 2]),
        ],
    )
}

/// Northgoing-domino placement probabilities of the Aztec diamond.
pub fn aztec_spec() -> ExactSpec {
    let num = poly(3, &[(1, 2, &[0, 0, 1])]);
    let h = poly(3, &[(1, 1, &[0, 0, 0]), (-1, 1, &[0, 1, 1])]);
    QuasiRationalSpec::new(num, vec![factor(h, Power::int(1)), factor(aztec_denominator(), Power::int(1))], vec![0.0, 0.0, -1.0])
        .expect("aztec spec")
}

/// Creation rates `Z / Q` (the smooth factor dropped).
pub fn aztec_creation_spec() -> ExactSpec {
    let num = poly(3, &[(1, 1, &[0, 0, 1])]);
    QuasiRationalSpec::new(num, vec![factor(aztec_denominator(), Power::int(1))], vec![0.0, 0.0, -1.0]).expect("aztec creation spec")
}

pub fn grove_denominator() -> ExactPoly {
    poly(
        3,
        &[
            (3, 1, &[0, 0, 0]),
            (3, 1, &[1, 1, 1]),
            (-1, 1, &[1, 0, 0]),
            (-1, 1, &[0, 1, 0]),
            (-1, 1, &[0, 0, 1]),
            (-1, 1, &[1, 1, 0]),
            (-1, 1, &[1, 0, 1]),
            (-1, 1, &[0, 1, 1]),
        ],
    )
}

/// Cube-grove edge probabilities `2Z^2 / ((1 - Z) Q)`.
pub fn grove_spec() -> ExactSpec {
    let num = poly(3, &[(2, 1, &[0, 0, 2])]);
    let h = poly(3, &[(1, 1, &[0, 0, 0]), (-1, 1, &[0, 0, 1])]);
    QuasiRationalSpec::new(num, vec![factor(h, Power::int(1)), factor(grove_denominator(), Power::int(1))], vec![-1.0, -1.0, -1.0])
        .expect("grove spec")
}

/// Creation series `Z / Q_1` with `Q_1 = Q / 3`.
pub fn grove_creation_spec() -> ExactSpec {
    let num = poly(3, &[(1, 1, &[0, 0, 1])]);
    let q1 = grove_denominator().scale(&rat(1, 3));
    QuasiRationalSpec::new(num, vec![factor(q1, Power::int(1))], vec![-1.0, -1.0, -1.0]).expect("grove creation spec")
}

pub fn fls_polynomial() -> ExactPoly {
    poly(
        3,
        &[
            (3, 1, &[0, 0, 0]),
            (-2, 1, &[1, 0, 0]),
            (-2, 1, &[0, 1, 0]),
            (-2, 1, &[0, 0, 1]),
            (1, 1, &[1, 1, 0]),
            (1, 1, &[1, 0, 1]),
            (1, 1, &[0, 1, 1]),
        ],
    )
}

/// `Q^{-beta}` for the graph polynomial `Q = (1-X)(1-Y) + (1-X)(1-Z) + (1-Y)(1-Z)`.
pub fn fls_spec(beta: &BigRational) -> Result<ExactSpec> {
    if *beta <= rat(1, 2) {
        return Err(Error::Parameter("beta must exceed 1/2".into()));
    }
    QuasiRationalSpec::new(
        MultiPoly::one(3),
        vec![factor(fls_polynomial(), Power::rational(beta.clone()))],
        vec![-1.0, -1.0, -1.0],
    )
}

pub fn superballot_denominator() -> ExactPoly {
    poly(3, &[(1, 1, &[0, 0, 0]), (-1, 1, &[1, 0, 0]), (-1, 1, &[0, 1, 0]), (-1, 1, &[0, 0, 1]), (4, 1, &[1, 1, 1])])
}

/// `(1 - 2X) (1 - 4XZ)^{-1/2} / (1 - X - Y - Z + 4XYZ)`.
pub fn superballot_spec() -> ExactSpec {
    let num = poly(3, &[(1, 1, &[0, 0, 0]), (-2, 1, &[1, 0, 0])]);
    let root = poly(3, &[(1, 1, &[0, 0, 0]), (-4, 1, &[1, 0, 1])]);
    QuasiRationalSpec::new(
        num,
        vec![factor(root, Power::rational(rat(1, 2))), factor(superballot_denominator(), Power::int(1))],
        vec![-1.0, -1.0, -1.0],
    )
    .expect("superballot spec")
}

/// `2 / (2 - X - Y - Z + XYZ)`; its coefficients times `2^{a+b+c}` are `N(a,b,c)`.
pub fn superballot_core_spec() -> ExactSpec {
    let q = poly(3, &[(2, 1, &[0, 0, 0]), (-1, 1, &[1, 0, 0]), (-1, 1, &[0, 1, 0]), (-1, 1, &[0, 0, 1]), (1, 1, &[1, 1, 1])]);
    QuasiRationalSpec::new(MultiPoly::constant(3, int(2)), vec![factor(q, Power::int(1))], vec![-1.0, -1.0, -1.0])
        .expect("superballot core spec")
}

/// `1 / (1 - X - Y - Z + 4XYZ)`, whose integer coefficients are `N(a,b,c)` directly.
pub fn superballot_core_scaled_spec() -> ExactSpec {
    QuasiRationalSpec::new(MultiPoly::one(3), vec![factor(superballot_denominator(), Power::int(1))], vec![-1.0, -1.0, -1.0])
        .expect("scaled core spec")
}

/// `1 / (1 - x)`.
pub fn geometric_spec() -> ExactSpec {
    let q = poly(1, &[(1, 1, &[0]), (-1, 1, &[1])]);
    QuasiRationalSpec::new(MultiPoly::one(1), vec![factor(q, Power::int(1))], vec![-1.0]).expect("geometric spec")
}

/// `1 / (1 - X - Y)`.
pub fn binomial_spec() -> ExactSpec {
    let q = poly(2, &[(1, 1, &[0, 0]), (-1, 1, &[1, 0]), (-1, 1, &[0, 1])]);
    QuasiRationalSpec::new(MultiPoly::one(2), vec![factor(q, Power::int(1))], vec![-1.0, -1.0]).expect("binomial spec")
}

/// Chirality order used by the quantum walk: east, north, west, south.
pub const CHIRALITIES: [&str; 4] = ["E", "N", "W", "S"];
pub const QRW_START: usize = 1;
const STEPS: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

pub fn qrw_coin() -> [[BigRational; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { rat(1, 2) } else { rat(-1, 2) }))
}

/// `I - M` with `M = diag(XZ, YZ, Z/X, Z/Y) U`.
fn qrw_system() -> Vec<Vec<ExactPoly>> {
    let u = qrw_coin();
    (0..4)
        .map(|i| {
            let (a, b) = STEPS[i];
            (0..4)
                .map(|j| {
                    let m = MultiPoly::monomial(3, vec![a as i32, b as i32, 1], u[i][j].clone());
                    let id = if i == j { MultiPoly::one(3) } else { MultiPoly::zero(3) };
                    &id - &m
                })
                .collect()
        })
        .collect()
}

fn det(m: &[Vec<ExactPoly>]) -> ExactPoly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = MultiPoly::zero(3);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<ExactPoly>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| p.clone()).collect()).collect();
        let t = &m[0][j] * &det(&minor);
        acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
    }
    acc
}

pub fn qrw_denominator() -> ExactPoly {
    poly(
        3,
        &[
            (1, 1, &[0, 0, 0]),
            (-1, 2, &[1, 0, 1]),
            (-1, 2, &[-1, 0, 1]),
            (-1, 2, &[0, 1, 1]),
            (-1, 2, &[0, -1, 1]),
            (1, 1, &[0, 0, 2]),
        ],
    )
}

pub fn qrw_time_factor() -> ExactPoly {
    poly(3, &[(1, 1, &[0, 0, 0]), (-1, 1, &[0, 0, 2])])
}

/// Determinant of `I - M`; equals `(1 - Z^2) Q`.
pub fn qrw_determinant() -> ExactPoly {
    det(&qrw_system())
}

/// Numerator of the `(end, start)` entry of `(I - M)^{-1}` over `(1 - Z^2) Q`.
pub fn qrw_adjugate_entry(end: usize, start: usize) -> ExactPoly {
    let sys = qrw_system();
    let minor: Vec<Vec<ExactPoly>> = sys
        .iter()
        .enumerate()
        .filter(|(r, _)| *r != start)
        .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != end).map(|(_, p)| p.clone()).collect())
        .collect();
    let d = det(&minor);
    if (end + start) % 2 == 0 {
        d
    } else {
        -&d
    }
}

/// Amplitude generating function for ending in chirality `end` from `((0,0), N)`.
pub fn qrw_amplitude_spec(end: usize) -> ExactSpec {
    QuasiRationalSpec::new(
        qrw_adjugate_entry(end, QRW_START),
        vec![factor(qrw_time_factor(), Power::int(1)), factor(qrw_denominator(), Power::int(1))],
        vec![0.0, 0.0, -1.0],
    )
    .expect("qrw spec")
}

/// Amplitude field: `(x, y, chirality) -> amplitude` after `t` steps.
pub type AmplitudeField = std::collections::BTreeMap<(i64, i64, usize), BigRational>;

/// One coin-then-shift step.
pub fn qrw_step(state: &AmplitudeField) -> AmplitudeField {
    let u = qrw_coin();
    let mut next = AmplitudeField::new();
    for ((x, y, c), amp) in state {
        for (i, (dx, dy)) in STEPS.iter().enumerate() {
            let v = &u[i][*c] * amp;
            if v.is_zero() {
                continue;
            }
            let e = next.entry((x + dx, y + dy, i)).or_insert_with(BigRational::zero);
            *e += v;
        }
    }
    next.retain(|_, v| !v.is_zero());
    next
}

/// Evolution for `t` steps from unit mass at `((0,0), N)`.
pub fn qrw_simulate(t: usize) -> AmplitudeField {
    let mut state = AmplitudeField::new();
    state.insert((0, 0, QRW_START), BigRational::one());
    for _ in 0..t {
        state = qrw_step(&state);
    }
    state
}
