use acsv_cone::cli::{exit_code, run, Cli};
use acsv_cone::oracle::AnySpec;
use acsv_cone::presets::*;
use acsv_cone::scalar::rat;
use clap::Parser;
use serde_json::Value;

fn specs_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs")
}

fn invoke(args: &[&str]) -> Result<String, i32> {
    let cli = Cli::try_parse_from(std::iter::once("acsv-cone").chain(args.iter().copied())).expect("arguments parse");
    let mut buf = Vec::new();
    match run(&cli, &mut buf) {
        Ok(()) => Ok(String::from_utf8(buf).unwrap()),
        Err(e) => Err(exit_code(&e)),
    }
}

#[test]
fn fls_oracle_value() {
    let out = invoke(&["oracle", "--preset", "fls", "--beta", "3/4", "--order", "60", "--at", "50,50,50", "--float", "9"]).unwrap();
    let row = out.lines().nth(1).unwrap();
    assert!(row.starts_with("50,50,50,2.23463991e-4,"), "{row}");
}

#[test]
fn geometric_spec_file_gives_ones() {
    let path = specs_dir().join("geo1.json");
    let out = invoke(&["oracle", "--spec", path.to_str().unwrap(), "--order", "5"]).unwrap();
    let values: Vec<&str> = out.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(values, vec!["1"; 6]);
}

#[test]
fn superballot_core_exact_integer() {
    let out = invoke(&["oracle", "--preset", "superballot-core", "--at", "10,20,30"]).unwrap();
    assert!(out.contains("10,20,30,25467973278667920,"));
}

#[test]
fn asym_values_and_refusal() {
    let v: Value = serde_json::from_str(&invoke(&["asym", "--preset", "aztec", "--r", "0,0,9"]).unwrap()).unwrap();
    assert!((v["value"][0].as_f64().unwrap() - 0.25).abs() < 1e-14);
    let v: Value = serde_json::from_str(&invoke(&["asym", "--preset", "fls", "--beta", "3/4", "--r", "50,50,50"]).unwrap()).unwrap();
    assert!((v["value"][0].as_f64().unwrap() - 0.000222832).abs() < 5e-9);
    assert_eq!(invoke(&["asym", "--preset", "aztec", "--r", "1,0,1"]), Err(2));
}

#[test]
fn error_exit_codes() {
    assert_eq!(invoke(&["oracle", "--preset", "nope"]), Err(3));
    assert_eq!(invoke(&["oracle", "--preset", "fls", "--beta", "1/2", "--at", "1,1,1"]), Err(3));
    assert_eq!(invoke(&["oracle", "--spec", "/nonexistent/spec.json"]), Err(3));
}

#[test]
fn compare_is_deterministic_and_exact_on_even_indices() {
    let args = ["compare", "--preset", "aztec", "--t", "10", "--step", "0.2", "--seed", "3"];
    let a = invoke(&args).unwrap();
    let b = invoke(&args).unwrap();
    assert_eq!(a, b);
    assert!(a.starts_with("r1,r2,r3,oracle,prediction,rel_error,class\n"));
    for line in a.lines().skip(1).filter(|l| !l.starts_with('#')) {
        let cells: Vec<&str> = line.split(',').collect();
        let sum: i64 = cells[..3].iter().map(|c| c.parse::<i64>().unwrap()).sum();
        if sum % 2 == 0 {
            assert_eq!(cells[3], "0e0", "{line}");
            if !cells[4].is_empty() {
                assert_eq!(cells[4], "0e0", "{line}");
            }
        }
    }
}

#[test]
fn fls_compare_relative_error() {
    let out = invoke(&["compare", "--preset", "fls", "--beta", "3/4", "--at", "50,50,50"]).unwrap();
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    let rel: f64 = row[5].parse().unwrap();
    assert!((0.002..0.004).contains(&rel), "{rel}");
}

#[test]
fn classify_reports_each_point() {
    let v: Value = serde_json::from_str(&invoke(&["classify", "--preset", "aztec", "--r", "0,0.9,1"]).unwrap()).unwrap();
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts.len(), 2);
    assert!(pts.iter().all(|p| p["class"] == "InteriorE"));
    let v: Value = serde_json::from_str(&invoke(&["classify", "--preset", "aztec", "--r", "1,0,1"]).unwrap()).unwrap();
    assert_eq!(v["points"][0]["class"], "OutsideNormalCone");
}

#[test]
fn shipped_specs_round_trip() {
    for entry in std::fs::read_dir(specs_dir()).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let once = AnySpec::parse_str(&text).unwrap().to_json();
        let twice = AnySpec::from_json(&once).unwrap().to_json();
        assert_eq!(once, twice, "{}", path.display());
        let file: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(file, once, "{} is not canonical", path.display());
    }
}

#[test]
fn shipped_specs_match_presets() {
    let read = |name: &str| AnySpec::parse_str(&std::fs::read_to_string(specs_dir().join(name)).unwrap()).unwrap().to_json();
    assert_eq!(read("aztec.json"), AnySpec::Exact(aztec_spec()).to_json());
    assert_eq!(read("cube_grove.json"), AnySpec::Exact(grove_spec()).to_json());
    assert_eq!(read("fls_3_4.json"), AnySpec::Exact(fls_spec(&rat(3, 4)).unwrap()).to_json());
    assert_eq!(read("qrw2d_N.json"), AnySpec::Exact(qrw_amplitude_spec(1)).to_json());
}

#[test]
fn spec_path_matches_preset_path() {
    let path = specs_dir().join("cube_grove.json");
    let a = invoke(&["oracle", "--spec", path.to_str().unwrap(), "--order", "6"]).unwrap();
    let b = invoke(&["oracle", "--preset", "cube_grove", "--order", "6"]).unwrap();
    assert_eq!(a, b);
}
