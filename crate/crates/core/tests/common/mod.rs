#![allow(dead_code)]

use acsv_cone::asympt::dual_power_derivative;
use acsv_cone::localgeo::{bilinear, determinant, dual_quadratic, inverse, Mat};
use acsv_cone::oracle::{coefficients_at, Factor, QuasiRationalSpec};
use acsv_cone::polyseries::{Exponent, MultiPoly};
use acsv_cone::scalar::{int, rat, rat_to_f64, Power};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn truncate(p: &MultiPoly<BigRational>, n: i64) -> MultiPoly<BigRational> {
    MultiPoly::from_terms(p.arity(), p.terms().filter(|(e, _)| e.degree() <= n).map(|(e, c)| (e.0.clone(), c.clone())))
}

/// Series of `P Q^{-s}` by summing `(1 - Q/c)^k`, independent of the recurrence engine.
pub fn naive(p: &MultiPoly<BigRational>, q: &MultiPoly<BigRational>, s: u32, n: i64) -> MultiPoly<BigRational> {
    let d = q.arity();
    let c = q.constant_term();
    let w = &MultiPoly::one(d) - &q.scale(&(BigRational::one() / &c));
    let mut inv = MultiPoly::zero(d);
    let mut pw = MultiPoly::one(d);
    for _ in 0..=n {
        inv = &inv + &pw;
        pw = truncate(&(&pw * &w), n);
    }
    let mut out = truncate(p, n);
    for _ in 0..s {
        out = truncate(&(&out * &inv), n);
    }
    out.scale(&num_traits::Pow::pow(&(BigRational::one() / c), s))
}

fn indices(d: usize, n: i64) -> Vec<Vec<i64>> {
    let mut idx = Vec::new();
    let mut stack = vec![vec![]];
    while let Some(v) = stack.pop() {
        if v.len() == d {
            idx.push(v);
            continue;
        }
        let used: i64 = v.iter().sum();
        for k in 0..=(n - used) {
            let mut w = v.clone();
            w.push(k);
            stack.push(w);
        }
    }
    idx
}

/// Random small specs compared against naive inversion; returns the number of mismatching cases.
pub fn naive_inversion_mismatches(cases: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 5i64;
    let mut bad = 0;
    for case in 0..cases {
        let d = 2 + case % 2;
        let mut q = MultiPoly::constant(d, rat(rng.random_range(1..4), 1));
        for _ in 0..3 {
            let e: Vec<i32> = (0..d).map(|_| rng.random_range(0..3)).collect();
            if e.iter().any(|&x| x != 0) {
                q.add_term(Exponent(e), rat(rng.random_range(-3..4), rng.random_range(1..3)));
            }
        }
        let lin: Vec<i32> = (0..d).map(|i| (i == 0) as i32).collect();
        let p = MultiPoly::from_terms(d, [(vec![0; d], int(1)), (lin, rat(rng.random_range(-2..3), 1))]);
        let s = rng.random_range(1..3u32);
        let spec = QuasiRationalSpec::new(p.clone(), vec![Factor { poly: q.clone(), power: Power::int(s as i64) }], vec![-1.0; d])
            .expect("random spec");
        let want = naive(&p, &q, s, n);
        let ok = coefficients_at(&spec, &indices(d, n)).expect("oracle").iter().all(|c| {
            let e: Vec<i32> = c.r.iter().map(|&x| x as i32).collect();
            c.prefactor.is_unit() && c.value == want.coeff(&e)
        });
        bad += (!ok) as usize;
    }
    bad
}

/// `A^T diag(1,-1,-1) A` for a random invertible integer `A`.
pub fn random_lorentzian(rng: &mut ChaCha8Rng) -> Mat<BigRational> {
    loop {
        let a: Mat<BigRational> = (0..3).map(|_| (0..3).map(|_| int(rng.random_range(-3..4))).collect()).collect();
        if determinant(&a).is_zero() {
            continue;
        }
        let sig = [int(1), int(-1), int(-1)];
        return (0..3).map(|i| (0..3).map(|j| (0..3).map(|k| &a[k][i] * &sig[k] * &a[k][j]).sum()).collect()).collect();
    }
}

fn matmul(a: &Mat<BigRational>, b: &Mat<BigRational>) -> Mat<BigRational> {
    (0..3).map(|i| (0..3).map(|j| (0..3).map(|k| &a[i][k] * &b[k][j]).sum()).collect()).collect()
}

fn transpose(a: &Mat<BigRational>) -> Mat<BigRational> {
    (0..3).map(|i| (0..3).map(|j| a[j][i].clone()).collect()).collect()
}

/// Involution, covariance and signature of the dual on random Lorentzian forms; returns failures.
pub fn dual_identity_failures(cases: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = 0;
    for _ in 0..cases {
        let m = random_lorentzian(&mut rng);
        let dual = dual_quadratic(&m).expect("dual");
        let b = loop {
            let b: Mat<BigRational> = (0..3).map(|_| (0..3).map(|_| int(rng.random_range(-3..4))).collect()).collect();
            if !determinant(&b).is_zero() {
                break b;
            }
        };
        let moved = matmul(&matmul(&transpose(&b), &m), &b);
        let binv = inverse(&b).expect("inverse");
        let involution = dual_quadratic(&dual).expect("dual") == m;
        let covariant = dual_quadratic(&moved).expect("dual") == matmul(&matmul(&binv, &dual), &transpose(&binv));
        let signature = acsv_cone::localgeo::matrix::inertia(&dual) == (1, 2, 0);
        bad += !(involution && covariant && signature) as usize;
    }
    bad
}

/// Worst relative gap between `dual_power_derivative` and a central difference of the next lower order.
pub fn finite_difference_worst(cases: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut checked = 0;
    while checked < cases {
        let m = random_lorentzian(&mut rng);
        let dual: Mat<f64> = dual_quadratic(&m).expect("dual").iter().map(|r| r.iter().map(rat_to_f64).collect()).collect();
        let r: Vec<f64> = (0..3).map(|_| rng.random_range(-3.0..3.0)).collect();
        let q = bilinear(&dual, &r, &r);
        let nr2: f64 = r.iter().map(|x| x * x).sum();
        if q < 0.2 * nr2 * dual.iter().flatten().fold(0.0f64, |a, b| a.max(b.abs())) {
            continue;
        }
        let alpha = rng.random_range(-2.0..1.0);
        let mut mi = [0u32; 3];
        let size = rng.random_range(1..=3);
        for _ in 0..size {
            mi[rng.random_range(0..3)] += 1;
        }
        let i = (0..3).find(|&i| mi[i] > 0).expect("nonzero index");
        let mut lower = mi;
        lower[i] -= 1;
        let h = 1e-4 * nr2.sqrt();
        let shift = |s: f64| {
            let mut p = r.clone();
            p[i] += s;
            dual_power_derivative(&dual, alpha, &lower, &p).expect("derivative")
        };
        let fd = (shift(h) - shift(-h)) / (2.0 * h);
        let exact = dual_power_derivative(&dual, alpha, &mi, &r).expect("derivative");
        let scale = exact.abs().max(1e-12 * shift(0.0).abs() / nr2.sqrt().powi(size as i32));
        worst = worst.max((fd - exact).abs() / scale);
        checked += 1;
    }
    worst
}
