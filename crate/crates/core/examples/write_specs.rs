//! Regenerates the JSON specs shipped in `specs/`.

use std::path::Path;

use acsv_cone::oracle::AnySpec;
use acsv_cone::presets::*;
use acsv_cone::scalar::rat;

fn main() -> acsv_cone::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs");
    std::fs::create_dir_all(&dir).expect("specs directory");
    let mut specs: Vec<(String, ExactSpec)> = vec![
        ("geo1".to_string(), geometric_spec()),
        ("binomial".to_string(), binomial_spec()),
        ("aztec".to_string(), aztec_spec()),
        ("aztec_creation".to_string(), aztec_creation_spec()),
        ("cube_grove".to_string(), grove_spec()),
        ("cube_grove_creation".to_string(), grove_creation_spec()),
        ("fls_3_4".to_string(), fls_spec(&rat(3, 4))?),
        ("superballot".to_string(), superballot_spec()),
        ("superballot_core".to_string(), superballot_core_spec()),
        ("superballot_core_scaled".to_string(), preset("superballot-core", None)?.spec),
    ];
    for (e, name) in CHIRALITIES.iter().enumerate() {
        specs.push((format!("qrw2d_{name}"), qrw_amplitude_spec(e)));
    }
    for (name, spec) in specs {
        let text = serde_json::to_string_pretty(&AnySpec::Exact(spec).to_json()).expect("json") + "\n";
        std::fs::write(dir.join(format!("{name}.json")), text).expect("write spec");
    }
    Ok(())
}
