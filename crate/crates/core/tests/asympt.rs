use acsv_cone::asympt::*;
use acsv_cone::localgeo::QuadraticPointData;
use acsv_cone::oracle::{coefficient_at, AnySpec};
use acsv_cone::presets::*;
use acsv_cone::scalar::rat;
use num_complex::Complex64;

fn est(spec: acsv_cone::presets::ExactSpec, r: &[f64]) -> AsymptoticEstimate {
    total_asymptotics(&AnySpec::Exact(spec), r, &AsymOptions::default()).unwrap()
}

#[test]
fn fls_leading_term() {
    let e = est(fls_spec(&rat(3, 4)).unwrap(), &[50.0, 50.0, 50.0]);
    assert!((e.value.re - 0.000222832).abs() < 5e-9, "{}", e.value);
    assert_eq!(e.terms.len(), 1);
}

#[test]
fn fls_higher_order_terms_reduce_error() {
    let spec = fls_spec(&rat(3, 4)).unwrap();
    let oracle = coefficient_at(&spec, &[20, 20, 20]).unwrap().to_f64();
    let p1 = total_asymptotics(&AnySpec::Exact(spec.clone()), &[20.0; 3], &AsymOptions::default()).unwrap().value.re;
    let opts = AsymOptions { order: 2, ..Default::default() };
    let p2 = total_asymptotics(&AnySpec::Exact(spec), &[20.0; 3], &opts).unwrap().value.re;
    let e1 = (p1 - oracle).abs() / oracle;
    let e2 = (p2 - oracle).abs() / oracle;
    assert!(e2 < e1 / 3.0, "order 1 error {e1}, order 2 error {e2}");
}

#[test]
fn superballot_core_prediction() {
    let e = est(superballot_core_spec(), &[10.0, 20.0, 30.0]);
    let n = e.value.re * 2f64.powi(60);
    assert!((n / 2.595e16 - 1.0).abs() < 5e-3, "{n}");
}

#[test]
fn aztec_parity_values() {
    let odd = est(aztec_spec(), &[0.0, 0.0, 9.0]);
    assert!((odd.value.re - 0.25).abs() < 1e-14);
    let even = est(aztec_spec(), &[0.0, 0.0, 8.0]);
    assert_eq!(even.value, Complex64::new(0.0, 0.0));
}

#[test]
fn aztec_outside_is_refused() {
    let err = total_asymptotics(&AnySpec::Exact(aztec_spec()), &[1.0, 0.0, 1.0], &AsymOptions::default()).unwrap_err();
    assert!(matches!(err, acsv_cone::Error::Refusal { ref class, .. } if class == "OutsideNormalCone"), "{err:?}");
}

#[test]
fn grove_symmetric_point() {
    let e = est(grove_spec(), &[1.0, 1.0, 1.0]);
    assert!((e.value.re - 1.0 / 3.0).abs() < 1e-13, "{}", e.value);
}

#[test]
fn residues_of_presets() {
    let az = QuadraticPointData::at_point(&aztec_spec(), &[Complex64::new(1.0, 0.0); 3]).unwrap();
    assert!((point_residue(&az).unwrap() - 1.0).abs() < 1e-12);
    let gr = QuadraticPointData::at_point(&grove_spec(), &[Complex64::new(1.0, 0.0); 3]).unwrap();
    assert!((point_residue(&gr).unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn arctan_is_right_angle_on_the_orthogonal_surface() {
    let az = QuadraticPointData::at_point(&aztec_spec(), &[Complex64::new(1.0, 0.0); 3]).unwrap();
    // t = 2s puts r on q*(r, l) = 0
    let v = cone_plane_asymptotics(&az, &[0.0, 1.0, 2.0]).unwrap();
    assert!((v.re - 0.5 * 0.5).abs() < 1e-12);
}

#[test]
fn smooth_central_binomial() {
    let spec = binomial_spec().to_complex();
    let z = [Complex64::new(0.5, 0.0); 2];
    for n in [16u32, 64, 256] {
        let v = smooth_asymptotics(&spec, 0, &z, &[n as f64, n as f64]).unwrap().re;
        let approx = 4f64.powi(n as i32) / (std::f64::consts::PI * n as f64).sqrt();
        assert!((v / approx - 1.0).abs() < 1e-12);
    }
}

#[test]
fn smooth_off_diagonal_binomial() {
    let spec = binomial_spec();
    let z = [Complex64::new(2.0 / 3.0, 0.0), Complex64::new(1.0 / 3.0, 0.0)];
    let mut last = f64::INFINITY;
    for n in [8i64, 16, 32] {
        let exact = coefficient_at(&spec, &[2 * n, n]).unwrap().to_f64();
        let v = smooth_asymptotics(&spec.to_complex(), 0, &z, &[2.0 * n as f64, n as f64]).unwrap().re;
        let err = (v / exact - 1.0).abs();
        assert!(err < last);
        last = err;
    }
    assert!(last < 0.01);
}

#[test]
fn decay_exponents_of_estimates() {
    let e = est(grove_spec(), &[1.0, 1.0, 1.0]);
    assert_eq!(e.decay_exponent, 0.0);
    let f = est(fls_spec(&rat(3, 4)).unwrap(), &[5.0, 5.0, 5.0]);
    assert!((f.decay_exponent - 1.5).abs() < 1e-12);
}
