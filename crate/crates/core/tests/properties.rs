mod common;

use acsv_cone::asympt::cone_plane_asymptotics;
use acsv_cone::localgeo::{classify_direction, QuadraticPointData};
use acsv_cone::polyseries::{Exponent, MultiPoly, TruncatedSeries};
use acsv_cone::presets::aztec_spec;
use acsv_cone::scalar::rat;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

fn small_poly(d: usize) -> impl Strategy<Value = MultiPoly<BigRational>> {
    prop::collection::vec((prop::collection::vec(0i32..3, d), -4i64..5, 1i64..4), 1..5)
        .prop_map(move |terms| MultiPoly::from_terms(d, terms.into_iter().map(|(e, n, den)| (e, rat(n, den)))))
}

fn point(d: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec((-5i64..6, 1i64..4), d).prop_map(|v| v.into_iter().map(|(n, den)| rat(n, den)).collect())
}

proptest! {
    #[test]
    fn eval_is_multiplicative(p in small_poly(2), q in small_poly(2), z in point(2)) {
        prop_assert_eq!((&p * &q).eval(&z).unwrap(), p.eval(&z).unwrap() * q.eval(&z).unwrap());
    }

    #[test]
    fn diff_obeys_leibniz(p in small_poly(3), q in small_poly(3), i in 0usize..3) {
        let lhs = (&p * &q).diff(i);
        let rhs = &(&p.diff(i) * &q) + &(&p * &q.diff(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn real_power_round_trip(p in small_poly(2), n in 1i64..4, den in 2i64..5) {
        let mut s = TruncatedSeries::from_poly(&p, 5).unwrap();
        s.add_term(Exponent::zero(2), BigRational::one() - s.constant_term());
        let a = rat(n, den);
        let back = s.pow_real(&a).unwrap().pow_real(&(BigRational::one() / a)).unwrap();
        prop_assert_eq!(back, s.truncate(5));
    }

    #[test]
    fn integer_power_matches_products(p in small_poly(2), n in 0i64..4) {
        let mut s = TruncatedSeries::from_poly(&p, 4).unwrap();
        s.add_term(Exponent::zero(2), BigRational::one() - s.constant_term());
        let mut prod = TruncatedSeries::one(2, 4);
        for _ in 0..n {
            prod = prod.mul(&s);
        }
        prop_assert_eq!(s.pow_int(n).unwrap(), prod);
    }
}

#[test]
fn recurrence_matches_naive_inversion() {
    assert_eq!(common::naive_inversion_mismatches(30, 2024), 0);
}

#[test]
fn dual_is_an_involution_and_covariant() {
    assert_eq!(common::dual_identity_failures(100, 5), 0);
}

#[test]
fn dual_power_derivative_matches_finite_differences() {
    let worst = common::finite_difference_worst(50, 9);
    assert!(worst <= 1e-6, "{worst}");
}

fn aztec_point() -> QuadraticPointData {
    QuadraticPointData::at_point(&aztec_spec(), &[Complex64::new(1.0, 0.0); 3]).unwrap()
}

proptest! {
    #[test]
    fn classification_is_scale_invariant(a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0, lam in 0.01f64..100.0) {
        let data = aztec_point();
        let r = [a, b, c];
        prop_assume!(r.iter().any(|x| x.abs() > 1e-3));
        let x = classify_direction(&data, &r, 1e-9).unwrap().tag;
        let scaled: Vec<f64> = r.iter().map(|v| v * lam).collect();
        let y = classify_direction(&data, &scaled, 1e-9).unwrap().tag;
        prop_assert_eq!(x, y);
    }

    #[test]
    fn cone_plane_is_invariant_under_rescaling_the_quadratic(s in -0.6f64..0.6, lam in 0.1f64..10.0) {
        let data = aztec_point();
        let r = [0.1, s, 1.0];
        let mut moved = data.clone();
        moved.q_matrix = data.q_matrix.iter().map(|row| row.iter().map(|v| v * lam).collect()).collect();
        moved.dual_matrix = data.dual_matrix.iter().map(|row| row.iter().map(|v| v / lam).collect()).collect();
        moved.numerator_value = data.numerator_value * lam;
        let a = cone_plane_asymptotics(&data, &r).unwrap();
        let b = cone_plane_asymptotics(&moved, &r).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm());
    }
}

#[test]
fn arctan_is_continuous_across_the_orthogonal_surface() {
    let data = aztec_point();
    let theta = |s: f64| cone_plane_asymptotics(&data, &[0.0, s, 1.0]).unwrap().re * 2.0 * std::f64::consts::PI;
    assert!((theta(0.5) - std::f64::consts::FRAC_PI_2).abs() <= 1e-9);
    let mut prev = theta(0.4);
    for k in 1..=400 {
        let s = 0.4 + 0.2 * k as f64 / 400.0;
        let t = theta(s);
        assert!((t - prev).abs() < 5e-3, "jump at s = {s}");
        prev = t;
    }
}
