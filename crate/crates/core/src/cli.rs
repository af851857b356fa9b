//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::asympt::{AsymOptions, LocalPlan};
use crate::critpoints::SearchOptions;
use crate::error::{Error, Result};
use crate::localgeo::classify_direction;
use crate::oracle::{coefficients_at, expand, AnySpec, CoeffTable, CoeffText, Coefficient, OracleField, QuasiRationalSpec};
use crate::presets::preset;
use crate::scalar::parse_rational;

#[derive(Debug, Parser)]
#[command(name = "acsv-cone", version, about = "Coefficient asymptotics at quadratic cone points, checked against exact series")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact series coefficients.
    Oracle(OracleArgs),
    /// Predicted coefficient asymptotics in one direction.
    Asym(AsymArgs),
    /// Oracle against prediction over a grid of directions.
    Compare(CompareArgs),
    /// Direction class at each quadratic point.
    Classify(ClassifyArgs),
}

#[derive(Debug, Args, Clone)]
pub struct InputArgs {
    /// Built-in application (aztec, cube_grove, qrw2d, fls, superballot, superballot-core).
    #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
    pub preset: Option<String>,
    /// Spec JSON file.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Exponent for the fls preset, rational such as 3/4.
    #[arg(long)]
    pub beta: Option<String>,
    /// Use a companion series of the preset (creation, core, amplitude_E, ...).
    #[arg(long)]
    pub companion: Option<String>,
}

#[derive(Debug, Args, Clone)]
pub struct OutputArgs {
    /// Write to a file instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Print floats with this many significant digits instead of exact values.
    #[arg(long, num_args = 0..=1, default_missing_value = "15")]
    pub float: Option<usize>,
    /// Output format.
    #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
    pub format: String,
}

#[derive(Debug, Args, Clone)]
pub struct SearchArgs {
    /// Seed of the multistart point search.
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Number of random starts.
    #[arg(long, default_value_t = 200)]
    pub starts: usize,
    /// Log-modulus of the torus, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Option<Vec<f64>>,
    /// Effective order of the quadratic-point series.
    #[arg(long = "terms", default_value_t = 1)]
    pub terms: u32,
    /// Add smooth critical points of simple poles.
    #[arg(long)]
    pub smooth: bool,
    /// Classification tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tau: f64,
}

#[derive(Debug, Args, Clone)]
pub struct OracleArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Total degree of the expansion in series coordinates.
    #[arg(long, default_value_t = 10)]
    pub order: u32,
    /// Single coefficient indices, semicolon separated lists such as 50,50,50;1,2,3.
    #[arg(long, allow_hyphen_values = true)]
    pub at: Option<String>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args, Clone)]
pub struct AsymArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Direction, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub r: Vec<f64>,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct CompareArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Explicit directions, semicolon separated.
    #[arg(long, allow_hyphen_values = true)]
    pub at: Option<String>,
    /// Slice `(floor(l1 t), floor(l2 t), t)` of the last coordinate.
    #[arg(long)]
    pub t: Option<i64>,
    /// Grid step of the slice.
    #[arg(long, default_value_t = 0.1)]
    pub step: f64,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub lambda_min: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub lambda_max: f64,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub r: Vec<f64>,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Refusal { .. } => 2,
        Error::Parse(_) | Error::Unsupported(_) | Error::NotNormalized(_) | Error::Parameter(_) => 3,
        _ => 4,
    }
}

/// Error report printed on failure.
pub fn error_json(e: &Error) -> Value {
    match e {
        Error::Refusal { class, detail } => json!({"error": "refusal", "class": class, "detail": detail}),
        other => json!({"error": format!("{other}")}),
    }
}

/// Input spec plus the torus it lives on.
struct Loaded {
    spec: AnySpec,
    x: Option<Vec<f64>>,
}

fn load(input: &InputArgs) -> Result<Loaded> {
    if let Some(name) = &input.preset {
        let beta = match &input.beta {
            Some(b) => Some(parse_rational(b).ok_or_else(|| Error::Parse(format!("beta '{b}' is not a rational")))?),
            None => None,
        };
        let p = preset(name, beta.as_ref())?;
        if let Some(key) = &input.companion {
            let spec = p.companion(key).cloned().ok_or_else(|| Error::Parse(format!("preset {name} has no companion '{key}'")))?;
            return Ok(Loaded { spec: AnySpec::Exact(spec), x: Some(p.x) });
        }
        let mut spec = p.spec.clone();
        if spec.points.is_empty() {
            spec.points = p.known_points.iter().map(|d| d.point_z.clone()).collect();
        }
        return Ok(Loaded { spec: AnySpec::Exact(spec), x: Some(p.x) });
    }
    let path = input.spec.as_ref().ok_or_else(|| Error::Parse("either --preset or --spec is required".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    Ok(Loaded { spec: AnySpec::parse_str(&text)?, x: None })
}

fn parse_points(text: &str, d: usize) -> Result<Vec<Vec<i64>>> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let v: Vec<i64> = s
                .split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad index '{x}'"))))
                .collect::<Result<_>>()?;
            if v.len() != d {
                return Err(Error::Parse(format!("index '{s}' has {} entries, expected {d}", v.len())));
            }
            Ok(v)
        })
        .collect()
}

fn sink(path: &Option<PathBuf>, out: &mut dyn Write, body: &[u8]) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => out.write_all(body).map_err(|e| Error::Numeric(e.to_string())),
    }
}

fn options(search: &SearchArgs, x: Option<Vec<f64>>) -> AsymOptions {
    AsymOptions {
        x: search.x.clone().or(x),
        order: search.terms.max(1),
        smooth: search.smooth,
        tau: search.tau,
        search: SearchOptions { starts: search.starts, seed: search.seed, ..SearchOptions::default() },
    }
}

fn oracle_table<S: OracleField + CoeffText>(spec: &QuasiRationalSpec<S>, args: &OracleArgs) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    if let Some(at) = &args.at {
        let rs = parse_points(at, spec.arity())?;
        let coeffs: Vec<Coefficient<S>> = coefficients_at(spec, &rs)?;
        if args.out.format == "json" {
            let rows: Vec<Value> = coeffs
                .iter()
                .map(|c| {
                    json!({
                        "r": c.r,
                        "value": exact_cell(c, args.out.float),
                        "float": c.to_complex().re,
                        "in_support": c.in_support,
                    })
                })
                .collect();
            serde_json::to_writer_pretty(&mut buf, &rows).map_err(|e| Error::Numeric(e.to_string()))?;
            buf.push(b'\n');
        } else {
            let mut w = csv::Writer::from_writer(&mut buf);
            let mut header: Vec<String> = (1..=spec.arity()).map(|i| format!("r{i}")).collect();
            header.extend(["value", "float", "in_support"].map(String::from));
            w.write_record(&header).map_err(csv_err)?;
            for c in &coeffs {
                let mut row: Vec<String> = c.r.iter().map(|x| x.to_string()).collect();
                row.push(exact_cell(c, args.out.float));
                row.push(format!("{:e}", c.to_complex().re));
                row.push(c.in_support.to_string());
                w.write_record(&row).map_err(csv_err)?;
            }
            w.flush().map_err(|e| Error::Numeric(e.to_string()))?;
        }
        return Ok(buf);
    }
    let table: CoeffTable<S> = expand(spec, args.order)?;
    if args.out.format == "json" {
        serde_json::to_writer_pretty(&mut buf, &table.to_json(args.out.float)).map_err(|e| Error::Numeric(e.to_string()))?;
        buf.push(b'\n');
    } else {
        table.write_csv(&mut buf, args.out.float)?;
    }
    Ok(buf)
}

fn exact_cell<S: CoeffText>(c: &Coefficient<S>, float: Option<usize>) -> String {
    match float {
        Some(dg) => format!("{:.*e}", dg.saturating_sub(1), c.to_complex().re),
        None => {
            let base = c.value.exact_text();
            let pre: Vec<String> = c.prefactor.parts.iter().map(|(b, e)| format!("({})^({})", b.exact_text(), e.label())).collect();
            if pre.is_empty() {
                base
            } else {
                format!("{base}*{}", pre.join("*"))
            }
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Numeric(format!("csv write failed: {e}"))
}

fn cmd_oracle(args: &OracleArgs, out: &mut dyn Write) -> Result<()> {
    let loaded = load(&args.input)?;
    let body = match &loaded.spec {
        AnySpec::Exact(s) => oracle_table(s, args)?,
        AnySpec::Real(s) => oracle_table(s, args)?,
        AnySpec::Complex(s) => oracle_table(s, args)?,
    };
    sink(&args.out.output, out, &body)
}

fn pretty(v: &Value) -> Result<Vec<u8>> {
    let mut buf = serde_json::to_vec_pretty(v).map_err(|e| Error::Numeric(e.to_string()))?;
    buf.push(b'\n');
    Ok(buf)
}

fn cmd_asym(args: &AsymArgs, out: &mut dyn Write) -> Result<()> {
    let loaded = load(&args.input)?;
    let plan = LocalPlan::new(&loaded.spec, &options(&args.search, loaded.x))?;
    let est = plan.estimate(&args.r)?;
    sink(&args.output, out, &pretty(&est.to_json())?)
}

fn cmd_classify(args: &ClassifyArgs, out: &mut dyn Write) -> Result<()> {
    let loaded = load(&args.input)?;
    let plan = LocalPlan::new(&loaded.spec, &options(&args.search, loaded.x))?;
    let mut reports = Vec::new();
    for data in plan.point_data() {
        let class = classify_direction(data, &args.r, args.search.tau)?;
        reports.push(json!({
            "point": data.point_z.iter().map(|w| json!([w.re, w.im])).collect::<Vec<_>>(),
            "class": class.tag.name(),
            "margin": class.margin,
            "dual_rr": class.dual_rr,
            "dual_rl": class.dual_rl,
        }));
    }
    let decay = plan.estimate(&args.r).map(|e| e.decay_exponent).ok();
    sink(&args.output, out, &pretty(&json!({"r": args.r, "points": reports, "decay_exponent": decay}))?)
}

#[derive(Debug, Clone)]
struct Row {
    r: Vec<i64>,
    oracle: f64,
    prediction: Option<f64>,
    rel_error: Option<f64>,
    class: String,
}

fn grid(args: &CompareArgs, d: usize) -> Result<Vec<Vec<i64>>> {
    if let Some(at) = &args.at {
        return parse_points(at, d);
    }
    let t = args.t.ok_or_else(|| Error::Parse("compare needs --at or --t".into()))?;
    if d != 3 {
        return Err(Error::Parse("slice grids need three variables; use --at".into()));
    }
    if args.step <= 0.0 {
        return Err(Error::Parameter("step must be positive".into()));
    }
    let n = ((args.lambda_max - args.lambda_min) / args.step).round() as i64;
    let lam = |k: i64| args.lambda_min + k as f64 * args.step;
    let mut pts = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            let p = vec![(lam(i) * t as f64).floor() as i64, (lam(j) * t as f64).floor() as i64, t];
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
    }
    pts.sort();
    Ok(pts)
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) })
}

/// Rows of a comparison run plus `(max, median)` relative error over interior points.
pub fn compare_rows(spec: &AnySpec, plan: &LocalPlan, pts: &[Vec<i64>]) -> Result<(Vec<String>, Option<(f64, f64)>)> {
    let oracle: Vec<f64> = match spec {
        AnySpec::Exact(s) => coefficients_at(s, pts)?.iter().map(|c| c.to_f64()).collect(),
        AnySpec::Real(s) => coefficients_at(s, pts)?.iter().map(|c| c.to_f64()).collect(),
        AnySpec::Complex(s) => coefficients_at(s, pts)?.iter().map(|c| c.to_f64()).collect(),
    };
    let rows: Vec<Row> = pts
        .par_iter()
        .zip(oracle.par_iter())
        .map(|(r, &o)| {
            let rf: Vec<f64> = r.iter().map(|&x| x as f64).collect();
            match plan.estimate(&rf) {
                Ok(e) => {
                    let p = e.value.re;
                    let rel = if o == 0.0 && p == 0.0 { 0.0 } else { (p - o).abs() / o.abs() };
                    let class = e.terms.iter().find_map(|t| t.class).map(|c| c.name()).unwrap_or("Smooth");
                    Row { r: r.clone(), oracle: o, prediction: Some(p), rel_error: Some(rel), class: class.to_string() }
                }
                Err(Error::Refusal { class, .. }) => Row { r: r.clone(), oracle: o, prediction: None, rel_error: None, class },
                Err(e) => Row { r: r.clone(), oracle: o, prediction: None, rel_error: None, class: format!("error: {e}") },
            }
        })
        .collect();
    let errs: Vec<f64> = rows.iter().filter(|r| r.oracle != 0.0).filter_map(|r| r.rel_error).collect();
    let summary = median(errs.clone()).map(|m| (errs.iter().copied().fold(0.0, f64::max), m));
    let lines = rows
        .iter()
        .map(|row| {
            let mut cells: Vec<String> = row.r.iter().map(|x| x.to_string()).collect();
            cells.push(format!("{:e}", row.oracle));
            cells.push(row.prediction.map(|p| format!("{p:e}")).unwrap_or_default());
            cells.push(row.rel_error.map(|p| format!("{p:e}")).unwrap_or_default());
            cells.push(row.class.clone());
            cells.join(",")
        })
        .collect();
    Ok((lines, summary))
}

fn cmd_compare(args: &CompareArgs, out: &mut dyn Write) -> Result<()> {
    let loaded = load(&args.input)?;
    let d = loaded.spec.arity();
    let plan = LocalPlan::new(&loaded.spec, &options(&args.search, loaded.x))?;
    let pts = grid(args, d)?;
    let (lines, summary) = compare_rows(&loaded.spec, &plan, &pts)?;
    let mut body = String::new();
    let header: Vec<String> = (1..=d).map(|i| format!("r{i}")).chain(["oracle", "prediction", "rel_error", "class"].map(String::from)).collect();
    body.push_str(&header.join(","));
    body.push('\n');
    for l in lines {
        body.push_str(&l);
        body.push('\n');
    }
    match summary {
        Some((mx, md)) => body.push_str(&format!("# summary: interior points with nonzero oracle: max rel_error {mx:e}, median rel_error {md:e}\n")),
        None => body.push_str("# summary: no interior points with nonzero oracle\n"),
    }
    sink(&args.output, out, body.as_bytes())
}

/// Runs one parsed command, writing its result to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Oracle(a) => cmd_oracle(a, out),
        Command::Asym(a) => cmd_asym(a, out),
        Command::Compare(a) => cmd_compare(a, out),
        Command::Classify(a) => cmd_classify(a, out),
    }
}

/// Sizes the worker pool from `ACSV_CONE_THREADS`.
pub fn init_threads() {
    if let Some(n) = std::env::var("ACSV_CONE_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

