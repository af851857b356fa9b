use acsv_cone::critpoints::{find_singular_points, find_singular_points_exact, SearchOptions};
use acsv_cone::presets::{aztec_denominator, grove_denominator, poly};
use num_bigint::BigInt;
use num_rational::BigRational;

fn one() -> BigRational {
    BigRational::from_integer(BigInt::from(1))
}

#[test]
fn aztec_singular_points_are_plus_minus_one() {
    let out = find_singular_points_exact(&aztec_denominator(), &[0.0, 0.0, 0.0], &SearchOptions::default());
    assert!(!out.non_isolated);
    assert_eq!(out.points.len(), 2);
    let mut signs: Vec<i32> = out
        .points
        .iter()
        .map(|p| {
            let e = p.exact.as_ref().expect("exact");
            assert!(e.iter().all(|v| v == &e[0]));
            if e[0] == one() { 1 } else { -1 }
        })
        .collect();
    signs.sort();
    assert_eq!(signs, vec![-1, 1]);
}

#[test]
fn grove_singular_point_is_ones() {
    let out = find_singular_points_exact(&grove_denominator(), &[0.0, 0.0, 0.0], &SearchOptions::default());
    assert!(!out.non_isolated);
    assert_eq!(out.points.len(), 1);
    assert_eq!(out.points[0].exact.as_ref().unwrap(), &vec![one(), one(), one()]);
}

#[test]
fn linear_polynomial_has_no_singular_points() {
    let q = poly(2, &[(1, 1, &[0, 0]), (-1, 1, &[1, 0]), (-1, 1, &[0, 1])]);
    let out = find_singular_points(&q.to_complex(), &[0.5f64.ln(), 0.5f64.ln()], &SearchOptions::default());
    assert!(out.points.is_empty());
    assert!(!out.non_isolated);
}

#[test]
fn squared_factor_family_is_flagged() {
    let q = poly(3, &[(1, 1, &[0, 0, 0]), (-1, 1, &[0, 1, 1])]);
    let sq = &q * &q;
    let out = find_singular_points(&sq.to_complex(), &[0.0, 0.0, 0.0], &SearchOptions::default());
    assert!(out.non_isolated);
    assert!(out.points.is_empty());
    assert!(!out.family_samples.is_empty());
}

#[test]
fn deterministic_under_fixed_seed() {
    let opts = SearchOptions { starts: 64, seed: 7, max_iter: 100 };
    let a = find_singular_points(&aztec_denominator().to_complex(), &[0.0; 3], &opts);
    let b = find_singular_points(&aztec_denominator().to_complex(), &[0.0; 3], &opts);
    assert_eq!(a, b);
}
