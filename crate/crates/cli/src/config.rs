use crate::CliError;
use eqindex::cartan::numeric::{Bump, QuadratureSpec};
use eqindex::cohindex::sample_points;
use eqindex::distributions::{GroupDescriptor, GroupElement};
use eqindex::scalar::parse_q;
use eqindex::symbols::{catalog, SymbolDescriptor};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Cohomological,
    Analytic,
    Both,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub schedule: Vec<f64>,
    pub bump: [f64; 2],
    pub gl_nodes: usize,
    pub x_chunks: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        let q = QuadratureSpec::default();
        QuadratureConfig { schedule: vec![4.0, 8.0, 16.0, 32.0, 64.0], bump: [1.0, 2.0], gl_nodes: q.gl_nodes, x_chunks: q.x_chunks }
    }
}

impl QuadratureConfig {
    pub fn spec(&self) -> QuadratureSpec {
        QuadratureSpec { gl_nodes: self.gl_nodes, x_chunks: self.x_chunks, ..QuadratureSpec::default() }
    }
    pub fn bump(&self) -> Result<Bump, CliError> {
        Bump::new(self.bump[0], self.bump[1]).map_err(CliError::from)
    }
}

/// One JSON document; command-line flags override its fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// `s1`, `t2`, `z2`, `point`, products joined by `x`, or `{"rank", "cyclic"}`.
    pub group: Option<Value>,
    /// A catalog name or a descriptor object.
    pub symbol: Option<Value>,
    pub window: i64,
    pub germ_order: u32,
    pub tolerance: f64,
    pub method: Method,
    pub sample_points: Option<Vec<String>>,
    pub quadrature: QuadratureConfig,
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            group: None,
            symbol: None,
            window: 64,
            germ_order: 8,
            tolerance: 1e-6,
            method: Method::Cohomological,
            sample_points: None,
            quadrature: QuadratureConfig::default(),
            out: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(p) = path else { return Ok(RunConfig::default()) };
        let text = std::fs::read_to_string(p).map_err(|e| CliError::Invalid(format!("{}: {e}", p.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", p.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.window < 1 {
            return Err(CliError::Invalid(format!("window must be at least 1, got {}", self.window)));
        }
        if !(self.tolerance > 0.0) {
            return Err(CliError::Invalid(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        self.quadrature.bump()?;
        if self.quadrature.schedule.is_empty() {
            return Err(CliError::Invalid("quadrature schedule is empty".into()));
        }
        Ok(())
    }

    /// SHA-256 of the canonical serialization, output path excluded.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn symbol(&self) -> Result<SymbolDescriptor, CliError> {
        let s = match &self.symbol {
            None => return Err(CliError::Invalid("no symbol given".into())),
            Some(Value::String(name)) => resolve_symbol(name)?,
            Some(v) => SymbolDescriptor::from_json(&v.to_string())?,
        };
        s.validate()?;
        if let Some(g) = &self.group {
            let g = parse_group(g)?;
            if g != s.group() {
                return Err(CliError::Invalid(format!("symbol {s} lives on {}, not {g}", s.group())));
            }
        }
        Ok(s)
    }

    pub fn samples(&self, g: &GroupDescriptor) -> Result<Vec<GroupElement>, CliError> {
        match &self.sample_points {
            None => Ok(sample_points(g)),
            Some(ps) => ps.iter().map(|p| parse_point(g, p)).collect(),
        }
    }
}

pub fn resolve_symbol(name: &str) -> Result<SymbolDescriptor, CliError> {
    let t = name.trim();
    if t.starts_with('{') {
        return Ok(SymbolDescriptor::from_json(t)?);
    }
    catalog()
        .into_iter()
        .find(|(n, _)| *n == t)
        .map(|(_, s)| s)
        .ok_or_else(|| CliError::Invalid(format!("unknown symbol `{t}`; catalog: {}", catalog().iter().map(|c| c.0).collect::<Vec<_>>().join(", "))))
}

fn parse_group_token(t: &str) -> Result<GroupDescriptor, CliError> {
    let bad = || CliError::Invalid(format!("unknown group `{t}`"));
    match t {
        "point" | "trivial" | "e" => Ok(GroupDescriptor::trivial()),
        "s1" => Ok(GroupDescriptor::torus(1)),
        _ => {
            if let Some(n) = t.strip_prefix('t') {
                n.parse().map(GroupDescriptor::torus).map_err(|_| bad())
            } else if let Some(n) = t.strip_prefix('z') {
                let n: u64 = n.parse().map_err(|_| bad())?;
                let g = GroupDescriptor::cyclic_group(n);
                g.validate()?;
                Ok(g)
            } else {
                Err(bad())
            }
        }
    }
}

pub fn parse_group(v: &Value) -> Result<GroupDescriptor, CliError> {
    match v {
        Value::String(s) => s.to_lowercase().split('x').try_fold(GroupDescriptor::trivial(), |g, t| Ok(g.product(&parse_group_token(t.trim())?))),
        _ => Ok(eqindex::distributions::json::group_from_json(v)?),
    }
}

/// `1`, `-1`, `i`, `-i`, a bare turn `p/q`, or the core `turn=p/q, c=r` syntax.
pub fn parse_point(g: &GroupDescriptor, s: &str) -> Result<GroupElement, CliError> {
    let t = s.trim();
    let is_word = |p: &str| matches!(p, "1" | "-1" | "i" | "-i") || p.starts_with("turn=") || p.starts_with("c=");
    let rewritten: Vec<String> = t
        .split(',')
        .map(str::trim)
        .map(|p| if !is_word(p) && parse_q(p).is_ok() { format!("turn={p}") } else { p.to_string() })
        .collect();
    Ok(GroupElement::parse(g, &rewritten.join(","))?)
}
