//! Cutoff quadrature of `⟨index, φ⟩` with `Par^T` in place of `Par`, for `T`
//! increasing until the values settle.

use crate::cartan::chart::{cotangent_circle, cotangent_plane, liouville, plane, rotation_one_form};
use crate::cartan::chern::CliffordSymbolData;
use crate::cartan::numeric::{chern_support_integral, chunked, par_pairing, smooth_value, Bump, QuadratureSpec};
use crate::distributions::pairing::atiyah_reference;
use crate::distributions::{pair, FourierDistribution, GroupDescriptor, SmoothFactor, TestFunction};
use crate::error::{IndexError, Result};
use crate::poly::sum_of_squares;
use crate::scalar::{q_to_f64, GaussQ, C64};
use crate::symbols::{SymbolDescriptor, SymbolKind};
use std::f64::consts::PI;

/// Symbols with a quadrature path.
pub const NUMERIC_SYMBOLS: &str = "zero(T^1), atiyah(a), bott-plane(a)";

#[derive(Clone, Debug, PartialEq)]
pub struct PairingStep {
    pub t_max: f64,
    pub value: C64,
    /// Distance to the previous step.
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub symbol: String,
    pub steps: Vec<PairingStep>,
    pub value: C64,
    /// The pairing of the symbolic index with `φ`.
    pub reference: C64,
    pub error: f64,
    pub tol: f64,
}

impl ConvergenceReport {
    pub fn pass(&self) -> bool {
        self.error < self.tol
    }
}

fn x_range(phi: &TestFunction) -> Result<(f64, f64)> {
    phi.check_window()?;
    match phi {
        TestFunction::Gaussian { center, width } => Ok((center - 12.0 * width, center + 12.0 * width)),
        TestFunction::PiecewisePoly(ps) => {
            let lo = ps.iter().map(|p| q_to_f64(&p.0)).fold(f64::MAX, f64::min);
            let hi = ps.iter().map(|p| q_to_f64(&p.1)).fold(f64::MIN, f64::max);
            Ok((lo, hi))
        }
        TestFunction::TrigPoly(_) => Err(IndexError::Invalid("quadrature needs a test function on the Lie algebra".into())),
    }
}

/// Barycentric interpolant through Chebyshev points of the second kind.
struct Chebyshev {
    xs: Vec<f64>,
    ys: Vec<C64>,
}

impl Chebyshev {
    fn build(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> Result<C64>) -> Result<Self> {
        let xs: Vec<f64> = (0..=n).map(|j| 0.5 * (lo + hi) + 0.5 * (hi - lo) * (PI * j as f64 / n as f64).cos()).collect();
        let ys = xs.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
        Ok(Chebyshev { xs, ys })
    }
    fn eval(&self, x: f64) -> C64 {
        let n = self.xs.len() - 1;
        let mut num = C64::new(0.0, 0.0);
        let mut den = 0.0;
        for (j, (&xj, &yj)) in self.xs.iter().zip(&self.ys).enumerate() {
            let d = x - xj;
            if d.abs() < 1e-14 {
                return yj;
            }
            let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == n {
                w *= 0.5;
            }
            num += yj * (w / d);
            den += w / d;
        }
        num / den
    }
}

const CHEB_NODES: usize = 28;

/// `Ch(t)` carries `e^{−t²q}` and `q ≥ r1` where `dχ ≠ 0`, so past this
/// cutoff the transgression tail is below `e^{−42}`.
fn chern_cutoff(t_max: f64, bump: &Bump) -> f64 {
    t_max.min((42.0 / bump.r1).sqrt())
}

/// Interpolants of `∫_C dχ∧β^T` per line weight, reused while the effective
/// transgression cutoff does not change.
#[derive(Default)]
struct ChernCache {
    key: Option<f64>,
    lines: Vec<(i64, Chebyshev)>,
}

impl ChernCache {
    fn line(&mut self, w: i64, t_max: f64, bump: &Bump, q: &QuadratureSpec, xr: (f64, f64)) -> Result<&Chebyshev> {
        let t = chern_cutoff(t_max, bump);
        if self.key != Some(t) {
            self.key = Some(t);
            self.lines.clear();
        }
        if let Some(i) = self.lines.iter().position(|(x, _)| *x == w) {
            return Ok(&self.lines[i].1);
        }
        let data = CliffordSymbolData::new(vec![w]);
        let h = Chebyshev::build(xr.0, xr.1, CHEB_NODES, |x| chern_support_integral(&data, x, t, bump, q))?;
        self.lines.push((w, h));
        Ok(&self.lines.last().unwrap().1)
    }
}

fn lambda_plane(a: i64) -> SmoothFactor {
    SmoothFactor::two_i_pi(-2).mul(&SmoothFactor::todd(a)).mul(&SmoothFactor::todd(-a))
}

fn pairing_at(sigma: &SymbolDescriptor, phi: &TestFunction, t_max: f64, bump: &Bump, q: &QuadratureSpec, xr: (f64, f64), cache: &mut ChernCache) -> Result<C64> {
    let two_i_pi = C64::new(0.0, 2.0 * PI);
    match &sigma.kind {
        SymbolKind::ZeroOnTorus { n: 1 } => {
            let c = cotangent_circle(1);
            let w = |x: f64| phi.value(x);
            Ok(par_pairing(&c, &liouville(&c), &sum_of_squares(c.nvars(), &[1]), bump, t_max, &w, xr, q)? / two_i_pi)
        }
        SymbolKind::Atiyah { weight: a } => {
            let a = *a;
            let lam = lambda_plane(a);
            let h = cache.line(a, t_max, bump, q, xr)?;
            let orient = cotangent_plane(a).orientation as f64;
            let w = |x: f64| phi.value(x) * smooth_value(&lam, x).unwrap_or_default() * h.eval(x) * orient;
            let c = plane(a);
            par_pairing(&c, &rotation_one_form(&c, a), &sum_of_squares(c.nvars(), &[0, 1]), bump, t_max, &w, xr, q)
        }
        SymbolKind::BottPlane { weight: a } => {
            let a = *a;
            let lam = lambda_plane(a);
            // product representative: Ch on C_a ⊕ C_{−a} is the product of the line forms
            let hp: Vec<C64> = {
                let h = cache.line(a, t_max, bump, q, xr)?;
                chunked(xr.0, xr.1, q.x_chunks, q.gl_nodes).iter().map(|(x, _)| h.eval(*x)).collect()
            };
            let hm = cache.line(-a, t_max, bump, q, xr)?;
            let mut acc = C64::new(0.0, 0.0);
            for ((x, w), hp) in chunked(xr.0, xr.1, q.x_chunks, q.gl_nodes).into_iter().zip(hp) {
                acc += phi.value(x) * smooth_value(&lam, x)? * hp * hm.eval(x) * w;
            }
            Ok(acc)
        }
        _ => Err(IndexError::Invalid(format!("no quadrature path for {sigma}; supported: {NUMERIC_SYMBOLS}"))),
    }
}

fn reference(sigma: &SymbolDescriptor, phi: &TestFunction) -> Result<C64> {
    let g = GroupDescriptor::torus(1);
    match &sigma.kind {
        SymbolKind::ZeroOnTorus { n: 1 } => Ok(pair(&FourierDistribution::delta(&g), phi)?.approx),
        SymbolKind::Atiyah { weight } => Ok(atiyah_reference(*weight, phi)),
        SymbolKind::BottPlane { .. } => Ok(pair(&FourierDistribution::constant(&g, GaussQ::one()), phi)?.approx),
        _ => Err(IndexError::Invalid(format!("no quadrature path for {sigma}; supported: {NUMERIC_SYMBOLS}"))),
    }
}

/// Run the cutoffs in `schedule` until two successive values differ by less
/// than `tol`, then compare with the symbolic pairing.
pub fn numeric_pairing_check(sigma: &SymbolDescriptor, phi: &TestFunction, schedule: &[f64], bump: &Bump, q: &QuadratureSpec, tol: f64) -> Result<ConvergenceReport> {
    let xr = x_range(phi)?;
    let reference = reference(sigma, phi)?;
    let mut steps: Vec<PairingStep> = vec![];
    let mut cache = ChernCache::default();
    for &t in schedule {
        let value = pairing_at(sigma, phi, t, bump, q, xr, &mut cache)?;
        let delta = steps.last().map_or(f64::INFINITY, |s| (value - s.value).norm());
        steps.push(PairingStep { t_max: t, value, delta });
        if delta < tol {
            return Ok(ConvergenceReport { symbol: sigma.to_string(), steps, value, reference, error: (value - reference).norm(), tol });
        }
    }
    let trace = steps.iter().map(|s| format!("T={}: {:.3e}", s.t_max, s.delta)).collect::<Vec<_>>().join(", ");
    Err(IndexError::NonConvergent { t_max: schedule.last().copied().unwrap_or(0.0), trace })
}
