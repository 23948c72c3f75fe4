//! The axiom suites behind `verify-axioms`.

use crate::config::{resolve_symbol, RunConfig};
use crate::report::{compare_check, growth_check, Check};
use crate::CliError;
use eqindex::cartan::chart::{cotangent_circle, liouville, plane, rotation_one_form};
use eqindex::cartan::{bump_independence, par_equals_one_certificate};
use eqindex::cohindex::{assemble_index, assemble_index_with, free_action_index, multiplicative_index, numeric_pairing_check, sample_points, Fault};
use eqindex::distributions::{FourierDistribution, GroupDescriptor, TestFunction, Weight};
use eqindex::oracle::{compare, model_for, oracle_distribution};
use eqindex::poly::sum_of_squares;
use eqindex::scalar::GaussQ;
use eqindex::symbols::{catalog, SymbolDescriptor};
use rayon::prelude::*;
use serde::Serialize;

pub const SUITES: [&str; 8] = ["n1", "n2", "n3", "multiplicativity", "free-action", "gluing", "growth", "bump-independence"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaultKind {
    /// Perturb the germ at the second sample point.
    Germ,
    /// Add an atom at weight 3 to the glued candidate.
    Coefficient,
}

#[derive(Clone, Debug)]
pub struct Row {
    pub suite: &'static str,
    pub check: Check,
}

fn index(s: &SymbolDescriptor) -> Result<FourierDistribution, CliError> {
    let v = assemble_index(s, &sample_points(&s.group()), eqindex::distributions::DEFAULT_ORDER)?;
    v.distribution.ok_or_else(|| CliError::Eval(format!("{s}: {}", v.degraded.unwrap_or_default())))
}

fn named(n: &str) -> Result<SymbolDescriptor, CliError> {
    resolve_symbol(n)
}

fn n1(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let p = index(&named("point")?)?;
    let one = FourierDistribution::constant(&GroupDescriptor::trivial(), GaussQ::one());
    let z = index(&named("zero")?)?;
    let delta = FourierDistribution::delta(&GroupDescriptor::torus(1));
    let oracle = oracle_distribution(&model_for(&named("zero")?)?, cfg.window)?;
    Ok(vec![
        compare_check("point is the trace map", &compare(&p, &one, 0, 0.0)),
        compare_check("zero(T^1) is the delta series", &compare(&z, &delta, cfg.window, 0.0)),
        compare_check("zero(T^1) equals the oracle", &compare(&z, &oracle, cfg.window, 0.0)),
    ])
}

fn n2(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let mut out = vec![];
    for n in ["bott-line", "bott-plane"] {
        let s = named(n)?;
        let d = index(&s)?;
        out.push(compare_check(&format!("{n} is 1"), &compare(&d, &FourierDistribution::constant(&s.group(), GaussQ::one()), cfg.window, 0.0)));
    }
    Ok(out)
}

fn n3(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let d = index(&named("atiyah")?)?;
    let oracle = oracle_distribution(&model_for(&named("atiyah")?)?, cfg.window)?;
    Ok(vec![
        compare_check("atiyah is -sum_{k>=1} t^k", &compare(&d, &FourierDistribution::atiyah(1), cfg.window, 0.0)),
        compare_check("atiyah equals the oracle", &compare(&d, &oracle, cfg.window, 0.0)),
    ])
}

fn multiplicativity(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let w = cfg.window.min(32);
    let mut out = vec![];
    for n in ["atiyah-x-atiyah", "zero-x-zero", "bott-x-bott", "bott-line-x-bott-line"] {
        let s = named(n)?;
        let v = multiplicative_index(&s)?;
        let d = v.distribution.ok_or_else(|| CliError::Eval(format!("{n}: no closed form")))?;
        let oracle = oracle_distribution(&model_for(&s)?, w)?;
        out.push(compare_check(&format!("{n} equals the tensor oracle"), &compare(&d, &oracle, w, 0.0)));
        out.push(Check::new(format!("{n} glues"), v.glue.as_ref().is_some_and(|g| g.pass), 0.0, ""));
    }
    Ok(out)
}

fn free_action(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let w = cfg.window.min(32);
    let mut out = vec![];
    for n in ["free-point", "free-circle", "free-atiyah"] {
        let r = free_action_index(&named(n)?, w)?;
        out.push(Check::new(format!("{n}: both paths agree"), r.comparison.pass, r.comparison.residual, r.comparison.detail.clone()));
    }
    let p = index(&named("free-point")?)?;
    out.push(compare_check("free-point is the delta series", &compare(&p, &FourierDistribution::delta(&GroupDescriptor::torus(1)), cfg.window, 0.0)));
    Ok(out)
}

fn gluing(cfg: &RunConfig, fault: Option<(FaultKind, &str)>) -> Result<Vec<Check>, CliError> {
    let entries: Vec<(&str, SymbolDescriptor)> = catalog();
    let rows: Vec<Result<Check, CliError>> = entries
        .par_iter()
        .map(|(n, s)| {
            let g = s.group();
            let samples = cfg.samples(&g)?;
            let f = match fault {
                Some((k, target)) if target == *n => Some(match k {
                    FaultKind::Germ => Fault::Germ { point: 1.min(samples.len().saturating_sub(1)), delta: GaussQ::frac(1, 1000) },
                    FaultKind::Coefficient => Fault::Coefficient { weight: Weight::from_flat(&g, &vec![3; g.weight_len()])?, delta: GaussQ::frac(1, 1000) },
                }),
                _ => None,
            };
            let v = assemble_index_with(s, &samples, cfg.germ_order, f.as_ref())?;
            Ok(match &v.glue {
                Some(r) => {
                    let worst = r.entries.iter().map(|e| e.comparison.residual).fold(0.0, f64::max);
                    let failing: Vec<String> = r.entries.iter().filter(|e| !e.comparison.pass).map(|e| format!("{}: {}", e.point, e.comparison.detail)).collect();
                    Check::new(format!("{n} at {} points", r.entries.len()), r.pass, worst, failing.join("; "))
                }
                None => Check::new(n.to_string(), false, f64::INFINITY, v.degraded.unwrap_or_default()),
            })
        })
        .collect();
    rows.into_iter().collect()
}

fn growth(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    catalog()
        .iter()
        .map(|(n, s)| {
            let mut c = growth_check(&index(s)?, cfg.window);
            c.name = n.to_string();
            Ok(c)
        })
        .collect()
}

fn bump_independent(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let mut out = vec![];
    let c = cotangent_circle(1);
    let a = sum_of_squares(c.nvars(), &[1]);
    let r = bump_independence(&c, &liouville(&c), &a, &a.scale(&GaussQ::int(2)))?;
    out.push(Check::new("Par(omega) bump change is D-exact", r.verified(), 0.0, ""));
    let r = par_equals_one_certificate(&c, &liouville(&c), &a)?;
    out.push(Check::new("Par(omega) - 1 is D-exact", r.verified(), 0.0, ""));
    let p = plane(1);
    let a = sum_of_squares(p.nvars(), &[0, 1]);
    let k = rotation_one_form(&p, 1);
    out.push(Check::new("Par(kappa) bump change is D-exact", bump_independence(&p, &k, &a, &a.scale(&GaussQ::int(2)))?.verified(), 0.0, ""));
    out.push(Check::new("Par(kappa) - 1 is D-exact", par_equals_one_certificate(&p, &k, &a)?.verified(), 0.0, ""));
    let s = named("zero")?;
    let q = cfg.quadrature.spec();
    let phi = TestFunction::gaussian(0.3, 0.4);
    let x = numeric_pairing_check(&s, &phi, &cfg.quadrature.schedule, &cfg.quadrature.bump()?, &q, cfg.tolerance / 10.0)?;
    let other = eqindex::cartan::numeric::Bump::new(0.5, 1.5)?;
    let y = numeric_pairing_check(&s, &phi, &cfg.quadrature.schedule, &other, &q, cfg.tolerance / 10.0)?;
    let d = (x.value - y.value).norm();
    out.push(Check::new("zero(T^1) pairing under two bumps", d < 2e-6, d, ""));
    out.push(Check::new("zero(T^1) pairing against 2 pi phi(0)", x.pass(), x.error, ""));
    Ok(out)
}

pub fn run(cfg: &RunConfig, only: &[String], fault: Option<(FaultKind, &str)>) -> Result<Vec<Row>, CliError> {
    for o in only {
        if !SUITES.contains(&o.as_str()) {
            return Err(CliError::Invalid(format!("unknown suite `{o}`; suites: {}", SUITES.join(", "))));
        }
    }
    let mut rows = vec![];
    for suite in SUITES {
        if !only.is_empty() && !only.iter().any(|o| o == suite) {
            continue;
        }
        let checks = match suite {
            "n1" => n1(cfg)?,
            "n2" => n2(cfg)?,
            "n3" => n3(cfg)?,
            "multiplicativity" => multiplicativity(cfg)?,
            "free-action" => free_action(cfg)?,
            "gluing" => gluing(cfg, fault)?,
            "growth" => growth(cfg)?,
            _ => bump_independent(cfg)?,
        };
        rows.extend(checks.into_iter().map(|check| Row { suite, check }));
    }
    Ok(rows)
}
