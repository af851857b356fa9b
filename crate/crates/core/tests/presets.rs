use acsv_cone::asympt::{total_asymptotics, AsymOptions, LocalPlan};
use acsv_cone::critpoints::SearchOptions;
use acsv_cone::oracle::{coefficients_at, AnySpec};
use acsv_cone::presets::*;
use acsv_cone::scalar::rat;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn every_preset_loads() {
    for name in PRESET_NAMES {
        let p = preset(name, None).unwrap();
        assert_eq!(p.name, name);
    }
    assert!(preset("fls", Some(&rat(1, 2))).is_err());
    assert!(preset("nonsense", None).is_err());
}

#[test]
fn known_points_are_rediscovered() {
    for name in ["aztec", "cube_grove", "fls", "superballot-core"] {
        let p = preset(name, None).unwrap();
        assert!(!p.known_points.is_empty());
        assert!(p.verify_points(&SearchOptions::default()), "{name}");
    }
}

#[test]
fn reference_values() {
    let az = preset("aztec", None).unwrap();
    assert!((az.reference_formula(&[0.0, 0.0, 9.0]).unwrap() - 0.25).abs() < 1e-15);
    let gr = preset("cube_grove", None).unwrap();
    assert!((gr.reference_formula(&[1.0, 1.0, 1.0]).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    let fls = preset("fls", Some(&rat(3, 4))).unwrap();
    assert!((fls.reference_formula(&[50.0; 3]).unwrap() - 0.000222832).abs() < 5e-9);
}

fn random_interior(p: &Preset, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let t = 2 * rng.random_range(10..40) + 1;
        let r: Vec<f64> = match p.reference {
            Reference::Aztec => {
                let a = rng.random_range(-t / 2..=t / 2);
                let b = rng.random_range(-t / 2..=t / 2);
                let c = if (a + b + t) % 2 == 0 { t + 1 } else { t };
                vec![a as f64, b as f64, c as f64]
            }
            _ => (0..3).map(|_| rng.random_range(t / 3..=t) as f64).collect(),
        };
        if let Some(Ok(class)) = p.validity(&r) {
            if class.tag == acsv_cone::localgeo::DirectionTag::InteriorEllipticCone && class.margin > 0.05 {
                return r;
            }
        }
    }
}

#[test]
fn reference_matches_total_asymptotics() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in ["aztec", "cube_grove", "fls", "superballot-core"] {
        let p = preset(name, None).unwrap();
        let plan = LocalPlan::new(&AnySpec::Exact(p.spec.clone()), &AsymOptions { x: Some(p.x.clone()), ..Default::default() }).unwrap();
        for _ in 0..20 {
            let r = random_interior(&p, &mut rng);
            let want = p.reference_formula(&r).unwrap();
            let got = plan.estimate(&r).unwrap().value.re;
            assert!((got - want).abs() <= 1e-9 * want.abs().max(1e-300), "{name} {r:?}: {got} vs {want}");
        }
    }
}

#[test]
fn grove_relation_holds() {
    for n in 0..=20 {
        assert!(grove_relation_check(n).unwrap(), "n = {n}");
    }
}

#[test]
fn aztec_creation_relation_holds() {
    for n in 1..=20 {
        assert!(aztec_creation_check(n).unwrap(), "n = {n}");
    }
}

#[test]
fn aztec_probabilities_in_unit_interval() {
    let n = 12i64;
    let idx: Vec<Vec<i64>> = (-n..=n).flat_map(|i| (-n..=n).map(move |j| vec![i, j, n])).collect();
    for c in coefficients_at(&aztec_spec(), &idx).unwrap() {
        assert!(c.value >= BigRational::zero() && c.value <= BigRational::one(), "{:?}", c.r);
    }
}

type Field = std::collections::BTreeMap<(i64, i64, usize), BigRational>;

fn gf_field(t: i64) -> Field {
    let idx: Vec<Vec<i64>> = (-t..=t).flat_map(|x| (-t..=t).map(move |y| vec![x, y, t])).collect();
    let mut out = Field::new();
    for end in 0..4 {
        for c in coefficients_at(&qrw_amplitude_spec(end), &idx).unwrap() {
            if !c.value.is_zero() {
                out.insert((c.r[0], c.r[1], end), c.value);
            }
        }
    }
    out
}

#[test]
fn qrw_generating_function_matches_simulation() {
    for t in 0..=16 {
        assert_eq!(gf_field(t as i64), qrw_simulate(t), "t = {t}");
    }
}

#[test]
fn qrw_first_step() {
    let s = qrw_simulate(1);
    assert_eq!(s.len(), 4);
    assert!(s.values().all(|v| v.abs() == rat(1, 2)));
    assert_eq!(qrw_simulate(0).into_iter().collect::<Vec<_>>(), vec![((0, 0, QRW_START), BigRational::one())]);
}

#[test]
fn qrw_is_unitary() {
    for t in 0..=32 {
        let total: BigRational = qrw_simulate(t).values().map(|v| v * v).sum();
        assert!(total.is_one(), "t = {t}");
    }
}

#[test]
fn superballot_oracle_matches_closed_form() {
    let mut idx = Vec::new();
    for a in 0..5 {
        for c in 0..5 {
            for b in (a + c + 1)..(a + c + 6) {
                idx.push(vec![a, b, c]);
            }
        }
    }
    let vals = coefficients_at(&superballot_spec(), &idx).unwrap();
    for v in vals {
        let want = superballot_closed_form(v.r[0], v.r[1], v.r[2]).unwrap();
        assert_eq!(v.to_f64(), acsv_cone::scalar::rat_to_f64(&want), "{:?}", v.r);
        assert!(v.value == want && v.prefactor.is_unit(), "{:?}", v.r);
    }
}

#[test]
fn superballot_core_integer_value() {
    let v = coefficients_at(&superballot_core_scaled_spec(), &[vec![10, 20, 30]]).unwrap();
    assert_eq!(v[0].as_integer().unwrap().to_string(), "25467973278667920");
    let e = total_asymptotics(&AnySpec::Exact(preset("superballot-core", None).unwrap().spec), &[10.0, 20.0, 30.0], &AsymOptions::default())
        .unwrap();
    assert!((e.value.re / 2.595e16 - 1.0).abs() < 5e-3);
}
