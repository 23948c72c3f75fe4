//! `eqindex`: batch front-end for the index workbench.
//!
//! Exit codes: 0 ok, 2 verification failure, 3 invalid input, 4 evaluator error.

mod config;
mod report;
mod verify;

use clap::{Args, Parser, Subcommand};
use config::{parse_point, resolve_symbol, Method, RunConfig};
use eqindex::cohindex::index_germ_at;
use eqindex::distributions::GermBody;
use eqindex::oracle::{model_for, oracle_distribution_with};
use eqindex::IndexError;
use report::{document, meta, MethodReport};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Eval(String),
    Verification(String),
}

impl From<IndexError> for CliError {
    fn from(e: IndexError) -> Self {
        match e {
            IndexError::Invalid(_)
            | IndexError::InvalidWeight(_)
            | IndexError::GroupMismatch(_)
            | IndexError::WindowViolation(_)
            | IndexError::UnsupportedBundle(_)
            | IndexError::ContactTransversalityFails(_)
            | IndexError::UnknownFixedSetModel(_)
            | IndexError::NotCliffordType(_)
            | IndexError::OrderFlagMissing => CliError::Invalid(e.to_string()),
            _ => CliError::Eval(e.to_string()),
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 2,
            CliError::Invalid(_) => 3,
            CliError::Eval(_) => 4,
        }
    }
}

#[derive(Parser)]
#[command(name = "eqindex", version, about = "Equivariant index of transversally elliptic symbols")]
struct Cli {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Catalog name or JSON descriptor.
    #[arg(long)]
    symbol: Option<String>,
    /// `s1`, `t2`, `z2`, `point`, or products such as `s1xz2`.
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    window: Option<i64>,
    #[arg(long = "order")]
    germ_order: Option<u32>,
    #[arg(long = "tol")]
    tolerance: Option<f64>,
    /// Comma separated sample points, e.g. `1,-1,i,1/3`.
    #[arg(long)]
    samples: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the index of a symbol.
    Compute {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        method: Option<Method>,
    },
    /// Print the germ of the index at a rational rotation.
    Germ {
        #[command(flatten)]
        common: Common,
        /// `1`, `-1`, `i`, `-i` or a turn `p/q`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Run the axiom suites and print the check matrix.
    VerifyAxioms {
        #[command(flatten)]
        common: Common,
        /// Run only these suites.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        #[arg(long, value_enum)]
        inject_fault: Option<verify::FaultKind>,
        /// Catalog entry that receives the fault.
        #[arg(long, default_value = "atiyah")]
        fault_symbol: String,
    },
    /// Analytic index of the model operator by counting.
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Basis degree cutoff; twice the window by default.
        #[arg(long)]
        cutoff: Option<i64>,
    },
    /// Compare the coefficients of two report files.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long = "tol")]
        tolerance: Option<f64>,
    },
}

fn merged(path: Option<&Path>, c: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::load(path)?;
    if let Some(s) = &c.symbol {
        cfg.symbol = Some(Value::String(s.clone()));
    }
    if let Some(g) = &c.group {
        cfg.group = Some(Value::String(g.clone()));
    }
    if let Some(w) = c.window {
        cfg.window = w;
    }
    if let Some(o) = c.germ_order {
        cfg.germ_order = o;
    }
    if let Some(t) = c.tolerance {
        cfg.tolerance = t;
    }
    if let Some(s) = &c.samples {
        cfg.sample_points = Some(s.split(',').map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect());
    }
    if c.out.is_some() {
        cfg.out = c.out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_out(path: Option<&Path>, v: &Value) -> Result<(), CliError> {
    if let Some(p) = path {
        let text = serde_json::to_string_pretty(v).expect("report serializes");
        std::fs::write(p, text + "\n").map_err(|e| CliError::Eval(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn summary(reports: &[MethodReport]) {
    for r in reports {
        println!("{} [{}] on {}", r.symbol, r.method, r.symbol.group());
        if let Some(d) = &r.distribution {
            let cs: Vec<String> = d.coefficients(3).into_iter().map(|(k, c)| format!("{k}:{c}")).collect();
            println!("  coefficients near 0: {}", cs.join("  "));
        }
        for c in &r.checks {
            println!("  {:<5} {:<40} residual {:.3e}", if c.pass { "pass" } else { "FAIL" }, c.name, c.residual);
        }
    }
}

fn compute(path: Option<&Path>, common: &Common, method: Option<Method>) -> Result<(), CliError> {
    let mut cfg = merged(path, common)?;
    if let Some(m) = method {
        cfg.method = m;
    }
    let sigma = cfg.symbol()?;
    let t = Instant::now();
    let mut timings = Map::new();
    let reports = report::compute(&sigma, &cfg, &mut timings)?;
    timings.insert("total".into(), json!(t.elapsed().as_millis() as u64));
    summary(&reports);
    write_out(cfg.out.as_deref(), &document(&cfg, &reports, timings))?;
    if reports.iter().all(MethodReport::pass) {
        Ok(())
    } else {
        Err(CliError::Verification(format!("{sigma}: a check failed")))
    }
}

fn germ(path: Option<&Path>, common: &Common, point: &str) -> Result<(), CliError> {
    let cfg = merged(path, common)?;
    let sigma = cfg.symbol()?;
    let s = parse_point(&sigma.group(), point)?;
    let g = index_germ_at(&sigma, &s, cfg.germ_order)?;
    match &g.body {
        GermBody::Delta(_) | GermBody::Density(_) => println!("germ of {sigma} at {s}: delta-type germ (flagged, no Taylor series): {g}"),
        _ => println!("germ of {sigma} at {s} to order {}: {g}", g.order),
    }
    let v = json!({"schema": report::SCHEMA_ID, "meta": meta(&cfg, Map::new()), "germ": report::germ_entry(&g)});
    write_out(cfg.out.as_deref(), &v)
}

fn verify_axioms(path: Option<&Path>, common: &Common, only: &[String], fault: Option<verify::FaultKind>, fault_symbol: &str) -> Result<(), CliError> {
    let cfg = merged(path, common)?;
    if fault.is_some() {
        resolve_symbol(fault_symbol)?;
    }
    let t = Instant::now();
    let rows = verify::run(&cfg, only, fault.map(|k| (k, fault_symbol)))?;
    let mut failed = vec![];
    for r in &rows {
        let c = &r.check;
        println!("{:<18} {:<5} {:<44} {:.3e}", r.suite, if c.pass { "pass" } else { "FAIL" }, c.name, c.residual);
        if !c.pass {
            println!("{:<18}       {}", "", c.detail);
            failed.push(format!("{}/{}", r.suite, c.name));
        }
    }
    let mut timings = Map::new();
    timings.insert("total".into(), json!(t.elapsed().as_millis() as u64));
    let matrix: Vec<Value> = rows.iter().map(|r| {
        let mut v = r.check.to_json();
        v["suite"] = json!(r.suite);
        v
    }).collect();
    let v = json!({"schema": report::SCHEMA_ID, "meta": meta(&cfg, timings), "fault": fault.map(|k| json!({"kind": k, "symbol": fault_symbol})), "checks": matrix});
    write_out(cfg.out.as_deref(), &v)?;
    if failed.is_empty() {
        println!("all {} checks pass", rows.len());
        Ok(())
    } else {
        Err(CliError::Verification(format!("failing checks: {}", failed.join(", "))))
    }
}

fn oracle(path: Option<&Path>, common: &Common, cutoff: Option<i64>) -> Result<(), CliError> {
    let mut cfg = merged(path, common)?;
    cfg.method = Method::Analytic;
    let sigma = cfg.symbol()?;
    let t = Instant::now();
    let r = match cutoff {
        None => report::analytic(&sigma, &cfg)?,
        Some(c) => {
            let op = model_for(&sigma)?;
            let d = oracle_distribution_with(&op, cfg.window, c)?;
            let checks = vec![report::Check::new("cutoff stability", true, 0.0, ""), report::growth_check(&d, cfg.window)];
            MethodReport { symbol: sigma.clone(), method: "analytic-oracle", distribution: Some(d), germs: vec![], checks, notes: vec![format!("model operator: {op}, cutoff {c}")] }
        }
    };
    let mut timings = Map::new();
    timings.insert("analytic-oracle".into(), json!(t.elapsed().as_millis() as u64));
    let reports = [r];
    summary(&reports);
    write_out(cfg.out.as_deref(), &document(&cfg, &reports, timings))
}

/// Weight → value, from the first report of a document.
fn coefficients_of(path: &Path) -> Result<(String, Value, BTreeMap<Vec<i64>, eqindex::scalar::GaussQ>), CliError> {
    let bad = |m: String| CliError::Invalid(format!("{}: {m}", path.display()));
    let text = std::fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    let r = v.get("reports").and_then(|r| r.get(0)).ok_or_else(|| bad("no reports".into()))?;
    let symbol = r.get("symbol").and_then(Value::as_str).unwrap_or("?").to_string();
    let group = r.get("group").cloned().unwrap_or(Value::Null);
    let mut map = BTreeMap::new();
    for c in r.get("coefficients").and_then(Value::as_array).ok_or_else(|| bad("no coefficients".into()))? {
        let w: Vec<i64> = serde_json::from_value(c["weight"].clone()).map_err(|e| bad(e.to_string()))?;
        let x = eqindex::distributions::json::gauss_from_json(&c["value"])?;
        map.insert(w, x);
    }
    Ok((symbol, group, map))
}

fn compare(a: &Path, b: &Path, tol: Option<f64>) -> Result<(), CliError> {
    let tol = tol.unwrap_or(RunConfig::default().tolerance);
    let (sa, ga, ma) = coefficients_of(a)?;
    let (sb, gb, mb) = coefficients_of(b)?;
    if ga != gb {
        return Err(CliError::Verification(format!("groups differ: {ga} vs {gb}")));
    }
    let zero = eqindex::scalar::GaussQ::int(0);
    let mut worst = 0.0f64;
    let mut first = None;
    let keys: std::collections::BTreeSet<_> = ma.keys().chain(mb.keys()).collect();
    for k in keys {
        let r = (ma.get(k).unwrap_or(&zero).clone() - mb.get(k).unwrap_or(&zero).clone()).to_c64().norm();
        worst = worst.max(r);
        if r > tol && first.is_none() {
            first = Some(k.clone());
        }
    }
    println!("{sa} vs {sb}: max residual {worst:.3e}");
    match first {
        None => Ok(()),
        Some(k) => Err(CliError::Verification(format!("first mismatch at k = {k:?}"))),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let path = cli.config.as_deref();
    match &cli.cmd {
        Cmd::Compute { common, method } => compute(path, common, *method),
        Cmd::Germ { common, point } => germ(path, common, point),
        Cmd::VerifyAxioms { common, only, inject_fault, fault_symbol } => verify_axioms(path, common, only, *inject_fault, fault_symbol),
        Cmd::Oracle { common, cutoff } => oracle(path, common, *cutoff),
        Cmd::Compare { a, b, tolerance } => compare(a, b, *tolerance),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Invalid(m) | CliError::Eval(m) => eprintln!("eqindex: {m}"),
                CliError::Verification(m) => eprintln!("eqindex: verification failed: {m}"),
            }
            ExitCode::from(e.code())
        }
    }
}

