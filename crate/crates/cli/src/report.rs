//! IndexReport documents. Everything outside `meta.timings_ms` is a
//! function of the configuration.

use crate::config::RunConfig;
use crate::CliError;
use eqindex::cohindex::{assemble_index_with, Fault, IndexValue};
use eqindex::distributions::json::{coefficients_to_json, germ_to_json, group_to_json};
use eqindex::distributions::{FourierDistribution, Germ};
use eqindex::oracle::{compare, model_for, oracle_distribution, CompareReport, GROWTH_C, GROWTH_N};
use eqindex::scalar::Q;
use eqindex::symbols::SymbolDescriptor;
use serde_json::{json, Map, Value};
use std::time::Instant;

pub const SCHEMA_ID: &str = "eqindex/index-report/1";

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub residual: f64,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, residual: f64, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, residual, detail: detail.into() }
    }
    pub fn to_json(&self) -> Value {
        let mut v = json!({"name": self.name, "pass": self.pass, "residual": finite(self.residual)});
        if !self.detail.is_empty() {
            v["detail"] = json!(self.detail);
        }
        v
    }
}

fn finite(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

pub fn germ_entry(g: &Germ) -> Value {
    let mut v = germ_to_json(g);
    label_points(&mut v);
    v
}

/// Replace each `point` object, including those of nested factors, by its label.
fn label_points(v: &mut Value) {
    if let Some(label) = v["point"]["label"].as_str().map(str::to_string) {
        v["point"] = json!(label);
    }
    for key in ["factors", "terms"] {
        if let Some(xs) = v.get_mut(key).and_then(Value::as_array_mut) {
            xs.iter_mut().for_each(label_points);
        }
    }
}

pub fn growth_check(d: &FourierDistribution, window: i64) -> Check {
    let ok = d.check_growth(&Q::from_integer(GROWTH_C.into()), GROWTH_N, window);
    Check::new("growth", ok, 0.0, if ok { String::new() } else { format!("exceeds {GROWTH_C}(1+|k|)^{GROWTH_N}") })
}

pub fn compare_check(name: &str, r: &CompareReport) -> Check {
    Check::new(name, r.pass, r.max_residual, r.detail.clone())
}

/// Report for one method; `checks` decide the exit status.
#[derive(Clone, Debug)]
pub struct MethodReport {
    pub symbol: SymbolDescriptor,
    pub method: &'static str,
    pub distribution: Option<FourierDistribution>,
    pub germs: Vec<Germ>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl MethodReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self, window: i64) -> Value {
        json!({
            "symbol": self.symbol.to_string(),
            "descriptor": serde_json::to_value(&self.symbol).expect("descriptor serializes"),
            "group": group_to_json(&self.symbol.group()),
            "method": self.method,
            "coefficients": self.distribution.as_ref().map_or(json!([]), |d| coefficients_to_json(d, window)),
            "germs": self.germs.iter().map(germ_entry).collect::<Vec<_>>(),
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
            "notes": self.notes,
        })
    }
}

pub fn cohomological(sigma: &SymbolDescriptor, cfg: &RunConfig, fault: Option<&Fault>) -> Result<MethodReport, CliError> {
    let samples = cfg.samples(&sigma.group())?;
    let v: IndexValue = assemble_index_with(sigma, &samples, cfg.germ_order, fault)?;
    let mut checks = vec![];
    if let Some(g) = &v.glue {
        for e in &g.entries {
            checks.push(Check::new(format!("glue at {}", e.point), e.comparison.pass, e.comparison.residual, e.comparison.detail.clone()));
        }
    }
    let mut notes: Vec<String> = v.provenance.iter().map(|p| format!("{}: {}", p.part, p.evaluator)).collect();
    match &v.distribution {
        Some(d) => checks.push(growth_check(d, cfg.window)),
        None => {
            let why = v.degraded.clone().unwrap_or_default();
            notes.push(format!("germs only: {why}"));
        }
    }
    Ok(MethodReport { symbol: sigma.clone(), method: "cohomological", distribution: v.distribution, germs: v.germs, checks, notes })
}

pub fn analytic(sigma: &SymbolDescriptor, cfg: &RunConfig) -> Result<MethodReport, CliError> {
    let op = model_for(sigma)?;
    let d = oracle_distribution(&op, cfg.window)?;
    let checks = vec![Check::new("cutoff stability", true, 0.0, ""), growth_check(&d, cfg.window)];
    Ok(MethodReport { symbol: sigma.clone(), method: "analytic-oracle", distribution: Some(d), germs: vec![], checks, notes: vec![format!("model operator: {op}")] })
}

/// Reports for the configured method; with `both`, the cohomological report
/// carries the coefficientwise comparison with the oracle.
pub fn compute(sigma: &SymbolDescriptor, cfg: &RunConfig, timings: &mut Map<String, Value>) -> Result<Vec<MethodReport>, CliError> {
    use crate::config::Method;
    let mut out = vec![];
    if matches!(cfg.method, Method::Cohomological | Method::Both) {
        let t = Instant::now();
        out.push(cohomological(sigma, cfg, None)?);
        timings.insert("cohomological".into(), json!(t.elapsed().as_millis() as u64));
    }
    if matches!(cfg.method, Method::Analytic | Method::Both) {
        let t = Instant::now();
        out.push(analytic(sigma, cfg)?);
        timings.insert("analytic-oracle".into(), json!(t.elapsed().as_millis() as u64));
    }
    if let [c, a] = out.as_mut_slice() {
        match (&c.distribution, &a.distribution) {
            (Some(x), Some(y)) => {
                let r = compare(x, y, cfg.window, cfg.tolerance);
                c.checks.push(compare_check("oracle agreement", &r));
            }
            _ => c.checks.push(Check::new("oracle agreement", false, f64::INFINITY, "no closed form to compare")),
        }
    }
    Ok(out)
}

pub fn meta(cfg: &RunConfig, timings: Map<String, Value>) -> Value {
    json!({
        "config_hash": cfg.hash(),
        "config": cfg,
        "versions": {"eqindex": eqindex::VERSION, "eqindex-cli": env!("CARGO_PKG_VERSION")},
        "timings_ms": timings,
    })
}

pub fn document(cfg: &RunConfig, reports: &[MethodReport], timings: Map<String, Value>) -> Value {
    json!({
        "schema": SCHEMA_ID,
        "meta": meta(cfg, timings),
        "reports": reports.iter().map(|r| r.to_json(cfg.window)).collect::<Vec<_>>(),
    })
}
