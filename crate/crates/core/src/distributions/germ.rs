//! Germs of invariant generalized functions near a group element, and the
//! comparison used for gluing.

use super::density::GeneralizedDensity;
use super::fourier::{mpoly_to_upoly, FourierDistribution, Part};
use super::group::{window, GroupDescriptor, GroupElement, Weight};
use super::series::Series;
use crate::ball::Ball;
use crate::error::{IndexError, Result};
use crate::poly::MPoly;
use crate::scalar::{Coef, GaussQ, C64};
use std::fmt;

pub const DEFAULT_ORDER: u32 = 8;
pub const DEFAULT_WINDOW: i64 = 64;

/// Truncated Taylor series in `Y`: exact, or with certified radii.
#[derive(Clone, Debug, PartialEq)]
pub enum Taylor {
    Exact(Series<GaussQ>),
    Numeric(Series<Ball>),
}

impl Taylor {
    pub fn zero(nvars: usize, order: u32) -> Self {
        Taylor::Exact(Series::zero(nvars, order))
    }
    pub fn constant(nvars: usize, order: u32, c: GaussQ) -> Self {
        Taylor::Exact(Series::constant(nvars, order, c))
    }
    pub fn nvars(&self) -> usize {
        match self {
            Taylor::Exact(s) => s.nvars,
            Taylor::Numeric(s) => s.nvars,
        }
    }
    pub fn order(&self) -> u32 {
        match self {
            Taylor::Exact(s) => s.order,
            Taylor::Numeric(s) => s.order,
        }
    }
    pub fn is_exact(&self) -> bool {
        matches!(self, Taylor::Exact(_))
    }
    pub fn to_ball(&self) -> Series<Ball> {
        match self {
            Taylor::Exact(s) => s.map(Ball::from_gauss),
            Taylor::Numeric(s) => s.clone(),
        }
    }
    pub fn is_zero(&self) -> bool {
        match self {
            Taylor::Exact(s) => s.terms.is_empty(),
            Taylor::Numeric(s) => s.terms.values().all(|b| b.mid.norm() == 0.0 && b.rad == 0.0),
        }
    }
    pub fn add(&self, o: &Taylor) -> Taylor {
        match (self, o) {
            (Taylor::Exact(a), Taylor::Exact(b)) => Taylor::Exact(a.add(b)),
            _ => Taylor::Numeric(self.to_ball().add(&o.to_ball())),
        }
    }
    pub fn scale(&self, c: &GaussQ) -> Taylor {
        match self {
            Taylor::Exact(a) => Taylor::Exact(a.scale(c)),
            Taylor::Numeric(a) => Taylor::Numeric(a.scale(&Ball::from_gauss(c))),
        }
    }
    pub fn mul(&self, o: &Taylor) -> Taylor {
        match (self, o) {
            (Taylor::Exact(a), Taylor::Exact(b)) => Taylor::Exact(a.mul(b)),
            _ => Taylor::Numeric(self.to_ball().mul(&o.to_ball())),
        }
    }
    pub fn inv(&self) -> Option<Taylor> {
        match self {
            Taylor::Exact(a) => a.inv().map(Taylor::Exact),
            Taylor::Numeric(a) => a.inv().map(Taylor::Numeric),
        }
    }
    pub fn tensor(&self, o: &Taylor) -> Taylor {
        match (self, o) {
            (Taylor::Exact(a), Taylor::Exact(b)) => Taylor::Exact(a.tensor(b)),
            _ => Taylor::Numeric(self.to_ball().tensor(&o.to_ball())),
        }
    }
    pub fn truncate(&self, order: u32) -> Taylor {
        match self {
            Taylor::Exact(a) => Taylor::Exact(a.truncate(order)),
            Taylor::Numeric(a) => Taylor::Numeric(a.truncate(order)),
        }
    }
    pub fn constant_term(&self) -> Ball {
        self.to_ball().constant_term()
    }
    /// Rank-1 re-expansion `G(S + Y)` as a series in `Y`, for real `S`.
    pub fn reexpand(&self, shift: f64, order: u32) -> Series<Ball> {
        let s = self.to_ball();
        let mut out = Series::zero(1, order);
        let sb = Ball::real(shift);
        for (e, c) in &s.terms {
            let k = e[0];
            // (S + Y)^k = Σ_j C(k, j) S^{k−j} Y^j
            let mut spow = vec![Ball::one()];
            for _ in 0..k {
                let last = *spow.last().unwrap();
                spow.push(last.mul(&sb));
            }
            for j in 0..=k.min(order) {
                let b = crate::poly::binomial_gauss(k as u64, j as u64);
                out.insert(vec![j], c.mul(&spow[(k - j) as usize]).mul(&Ball::from_gauss(&b)));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GermBody {
    Taylor(Taylor),
    /// `Σ_k p(k)·e^{i⟨k,Y⟩}`, supported at `Y = 0`; the flagged δ-germ.
    Delta(MPoly),
    /// Rank-1 singular germ given by its density on the Lie algebra.
    Density(GeneralizedDensity),
    /// External product over factor groups.
    Product(Vec<Germ>),
    /// Sum of singular germs with no common shape.
    Sum(Vec<Germ>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Germ {
    pub point: GroupElement,
    pub order: u32,
    pub body: GermBody,
}

impl Germ {
    pub fn taylor(point: GroupElement, t: Taylor) -> Germ {
        Germ { point, order: t.order(), body: GermBody::Taylor(t) }
    }
    pub fn zero(point: GroupElement, order: u32) -> Germ {
        let n = point.torus.len();
        Germ::taylor(point, Taylor::zero(n, order))
    }
    pub fn is_singular(&self) -> bool {
        !matches!(self.body, GermBody::Taylor(_))
    }
    pub fn is_exact(&self) -> bool {
        match &self.body {
            GermBody::Taylor(t) => t.is_exact(),
            GermBody::Product(gs) | GermBody::Sum(gs) => gs.iter().all(|g| g.is_exact()),
            _ => true,
        }
    }
    pub fn as_taylor(&self) -> Option<&Taylor> {
        match &self.body {
            GermBody::Taylor(t) => Some(t),
            _ => None,
        }
    }
    /// Value at `Y = 0` for regular germs.
    pub fn value(&self) -> Option<Ball> {
        self.as_taylor().map(|t| t.constant_term())
    }
}

pub fn exact_or_ball(s: &GroupElement, k: &Weight) -> std::result::Result<GaussQ, Ball> {
    s.character_exact(k).ok_or_else(|| s.character_ball(k))
}

/// `c·s^w·e^{i⟨w,Y⟩}` as a series.
pub fn character_series(s: &GroupElement, w: &Weight, order: u32) -> Taylor {
    match exact_or_ball(s, w) {
        Ok(chi) => {
            let lin: Vec<GaussQ> = w.torus.iter().map(|&k| GaussQ::i() * GaussQ::int(k)).collect();
            Taylor::Exact(Series::linear(order, &lin).exp_nilpotent().scale(&chi))
        }
        Err(chi) => {
            let lin: Vec<Ball> = w.torus.iter().map(|&k| Ball::exact(C64::new(0.0, k as f64))).collect();
            Taylor::Numeric(Series::linear(order, &lin).exp_nilpotent().scale(&chi))
        }
    }
}

/// `Θ|_s(Y) = Σ_k c_k s^k e^{i⟨k,Y⟩}` to `order`.
pub fn restrict_germ(d: &FourierDistribution, s: &GroupElement, order: u32) -> Result<Germ> {
    if s.group() != d.group {
        return Err(IndexError::GroupMismatch(format!("point {s} is not in {}", d.group)));
    }
    let g = &d.group;
    if g.rank == 1 && g.cyclic.is_empty() {
        return restrict_circle(d, s, order);
    }
    let mut bodies = vec![];
    for p in &d.parts {
        bodies.push(part_germ(g, p, s, order)?);
    }
    Ok(Germ { point: s.clone(), order, body: sum_bodies(s, order, bodies) })
}

/// On the circle, the parts that are singular at `s` (together with the
/// atoms) form one density `Σ_k c_k s^k δ_k`; regular rays stay Taylor.
fn restrict_circle(d: &FourierDistribution, s: &GroupElement, order: u32) -> Result<Germ> {
    let g = &d.group;
    let singular_ray = |p: &Part| matches!(p, Part::Ray { step, .. } if s.phase(step) == num::Zero::zero());
    let has_lattice = s.is_identity() && d.parts.iter().any(|p| matches!(p, Part::Lattice(_)));
    if !has_lattice && !d.parts.iter().any(singular_ray) {
        let bodies = d.parts.iter().map(|p| part_germ(g, p, s, order)).collect::<Result<Vec<_>>>()?;
        return Ok(Germ { point: s.clone(), order, body: sum_bodies(s, order, bodies) });
    }
    if s.is_identity() && d.parts.iter().all(|p| matches!(p, Part::Lattice(_))) {
        let Part::Lattice(p) = &d.parts[0] else { unreachable!() };
        return Ok(Germ { point: s.clone(), order, body: GermBody::Delta(p.clone()) });
    }
    let chi = |k: &Weight| {
        s.character_exact(k).ok_or_else(|| IndexError::GermSingular(format!("{s} is not an exact point of a singular ray")))
    };
    let mut twisted = vec![];
    let mut regular = vec![];
    for p in &d.parts {
        match p {
            Part::Atoms(m) => {
                let mut out = std::collections::BTreeMap::new();
                for (k, c) in m {
                    out.insert(k.clone(), c * &chi(k)?);
                }
                twisted.push(Part::Atoms(out));
            }
            Part::Ray { offset, step, poly } if singular_ray(p) => {
                twisted.push(Part::Ray { offset: offset.clone(), step: step.clone(), poly: poly.scale(&chi(offset)?) });
            }
            Part::Lattice(_) if s.is_identity() => twisted.push(p.clone()),
            Part::Lattice(_) => {}
            _ => regular.push(part_germ(g, p, s, order)?),
        }
    }
    let dens = FourierDistribution { group: g.clone(), parts: twisted }.simplify().to_density_germ()?;
    let mut bodies = vec![GermBody::Density(dens)];
    bodies.extend(regular);
    Ok(Germ { point: s.clone(), order, body: sum_bodies(s, order, bodies) })
}

fn sum_bodies(s: &GroupElement, order: u32, bodies: Vec<GermBody>) -> GermBody {
    let n = s.torus.len();
    let mut taylor = Taylor::zero(n, order);
    let mut rest = vec![];
    for b in bodies {
        match b {
            GermBody::Taylor(t) => taylor = taylor.add(&t),
            other if singular_is_zero(&Germ { point: s.clone(), order, body: other.clone() }) => {}
            other => rest.push(Germ { point: s.clone(), order, body: other }),
        }
    }
    if rest.is_empty() {
        return GermBody::Taylor(taylor);
    }
    if !taylor.is_zero() {
        rest.insert(0, Germ::taylor(s.clone(), taylor));
    }
    if rest.len() == 1 {
        return rest.pop().unwrap().body;
    }
    GermBody::Sum(rest)
}

fn part_germ(g: &GroupDescriptor, p: &Part, s: &GroupElement, order: u32) -> Result<GermBody> {
    let n = g.rank;
    Ok(match p {
        Part::Atoms(m) => {
            let mut t = Taylor::zero(n, order);
            for (w, c) in m {
                t = t.add(&character_series(s, w, order).scale(c));
            }
            GermBody::Taylor(t)
        }
        Part::Ray { offset, step, poly } => {
            if s.phase(step) == num::Zero::zero() {
                return Err(IndexError::GermSingular(format!("ray with step {step} at {s}")));
            }
            // Σ_n p(n) x^n = Σ_j c_j (1 − x)^{−(j+1)}, x = s^d e^{i⟨d,Y⟩}.
            let x = character_series(s, step, order);
            let one = Taylor::constant(n, order, GaussQ::one());
            let base = one.add(&x.scale(&GaussQ::int(-1)));
            let inv = match &base {
                Taylor::Exact(b) => Taylor::Exact(b.inv().expect("regular point")),
                Taylor::Numeric(b) => Taylor::Numeric(
                    b.inv().ok_or_else(|| IndexError::GermSingular(format!("cannot separate {s} from a pole")))?,
                ),
            };
            let mut acc = Taylor::zero(n, order);
            let mut pw = inv.clone();
            for c in poly.to_binomial_basis() {
                acc = acc.add(&pw.scale(&c));
                pw = pw.mul(&inv);
            }
            GermBody::Taylor(acc.mul(&character_series(s, offset, order)))
        }
        Part::Lattice(p) => {
            if g.rank == 0 {
                // A finite group: Σ_k c·χ_k(s) is |G|·c at the identity.
                let size: u64 = g.cyclic.iter().product();
                let v = if s.is_identity() { p.constant_term() * GaussQ::int(size as i64) } else { GaussQ::zero() };
                GermBody::Taylor(Taylor::constant(0, order, v))
            } else if s.is_identity() {
                GermBody::Delta(p.clone())
            } else {
                GermBody::Taylor(Taylor::zero(n, order))
            }
        }
        Part::Tensor(fs) => {
            let mut rest = s.clone();
            let mut germs = vec![];
            for f in fs {
                let (a, b) = rest.split(&f.group);
                germs.push(restrict_germ(f, &a, order)?);
                rest = b;
            }
            if germs.iter().all(|g| !g.is_singular()) {
                let mut t = germs[0].as_taylor().unwrap().clone();
                for g in &germs[1..] {
                    t = t.tensor(g.as_taylor().unwrap());
                }
                GermBody::Taylor(t)
            } else {
                GermBody::Product(germs)
            }
        }
    })
}

/// Outcome of comparing two germs at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct GermComparison {
    pub pass: bool,
    pub residual: f64,
    pub detail: String,
}

impl GermComparison {
    fn ok(residual: f64) -> Self {
        GermComparison { pass: true, residual, detail: String::new() }
    }
    fn fail(residual: f64, detail: impl Into<String>) -> Self {
        GermComparison { pass: false, residual, detail: detail.into() }
    }
}

/// Compare germs to their common order: exact coefficients must agree
/// exactly, certified ones within their radii plus `tol`. Singular germs are
/// compared by their Fourier coefficients on the window.
pub fn compare_germs(a: &Germ, b: &Germ, tol: f64, win: i64) -> GermComparison {
    let order = a.order.min(b.order);
    match (&a.body, &b.body) {
        (GermBody::Taylor(x), GermBody::Taylor(y)) => compare_taylor(&x.truncate(order), &y.truncate(order), tol),
        (GermBody::Product(xs), GermBody::Product(ys)) if xs.len() == ys.len() => combine(xs.iter().zip(ys).map(|(x, y)| compare_germs(x, y, tol, win))),
        (GermBody::Sum(xs), GermBody::Sum(ys)) if xs.len() == ys.len() => combine(xs.iter().zip(ys).map(|(x, y)| compare_germs(x, y, tol, win))),
        (GermBody::Taylor(t), _) | (_, GermBody::Taylor(t)) => {
            let other = if matches!(a.body, GermBody::Taylor(_)) { b } else { a };
            if t.is_zero() && singular_is_zero(other) {
                GermComparison::ok(0.0)
            } else {
                GermComparison::fail(f64::INFINITY, "regular germ against a singular one")
            }
        }
        _ => match (land(a), land(b)) {
            (Ok(x), Ok(y)) => compare_coefficients(&x, &y, win, tol),
            _ => {
                if a.body == b.body {
                    GermComparison::ok(0.0)
                } else {
                    GermComparison::fail(f64::INFINITY, "singular germs differ")
                }
            }
        },
    }
}

fn singular_is_zero(g: &Germ) -> bool {
    match &g.body {
        GermBody::Delta(p) => p.is_zero(),
        GermBody::Density(d) => d.is_zero(),
        GermBody::Taylor(t) => t.is_zero(),
        GermBody::Product(gs) => gs.iter().any(singular_is_zero),
        GermBody::Sum(gs) => gs.iter().all(singular_is_zero),
    }
}

fn combine(it: impl Iterator<Item = GermComparison>) -> GermComparison {
    let mut out = GermComparison::ok(0.0);
    for (i, c) in it.enumerate() {
        out.residual = out.residual.max(c.residual);
        if !c.pass && out.pass {
            out.pass = false;
            out.detail = format!("factor {i}: {}", c.detail);
        }
    }
    out
}

fn compare_taylor(x: &Taylor, y: &Taylor, tol: f64) -> GermComparison {
    if let (Taylor::Exact(a), Taylor::Exact(b)) = (x, y) {
        let diff = a.sub(b);
        let residual = diff.terms.values().map(|c| c.to_c64().norm()).fold(0.0, f64::max);
        return match diff.terms.iter().next() {
            None => GermComparison::ok(0.0),
            Some((e, _)) => GermComparison::fail(residual, format!("coefficient of Y^{e:?} differs")),
        };
    }
    let (a, b) = (x.to_ball(), y.to_ball());
    let mut keys: Vec<&Vec<u32>> = a.terms.keys().chain(b.terms.keys()).collect();
    keys.sort();
    keys.dedup();
    let mut out = GermComparison::ok(0.0);
    for e in keys {
        let (ca, cb) = (a.coeff(e), b.coeff(e));
        out.residual = out.residual.max((ca.mid - cb.mid).norm());
        if !ca.overlaps(&cb, tol) && out.pass {
            out.pass = false;
            out.detail = format!("coefficient of Y^{e:?} differs by {:.3e}", (ca.mid - cb.mid).norm());
        }
    }
    out
}

/// Fourier coefficients of a rank-1 singular germ at the identity.
fn land(g: &Germ) -> Result<FourierDistribution> {
    let circle = GroupDescriptor::torus(1);
    match &g.body {
        GermBody::Delta(p) if p.nvars == 1 => Ok(FourierDistribution::lattice(&circle, p.clone())),
        GermBody::Density(d) => FourierDistribution::from_density(d),
        _ => Err(IndexError::NotRepresentable("germ has no rank-1 landing".into())),
    }
}

/// Coefficientwise comparison of two distributions on `|k| ≤ win`.
pub fn compare_coefficients(a: &FourierDistribution, b: &FourierDistribution, win: i64, tol: f64) -> GermComparison {
    if a.group != b.group {
        return GermComparison::fail(f64::INFINITY, format!("groups differ: {} vs {}", a.group, b.group));
    }
    let mut out = GermComparison::ok(0.0);
    for k in window(&a.group, win) {
        let d = a.coeff(&k).unwrap() - b.coeff(&k).unwrap();
        let r = d.to_c64().norm();
        out.residual = out.residual.max(r);
        if r > tol && out.pass {
            out.pass = false;
            out.detail = format!("first mismatch at k = {k}");
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct GlueEntry {
    pub point: GroupElement,
    pub comparison: GermComparison,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GlueReport {
    pub pass: bool,
    pub entries: Vec<GlueEntry>,
}

impl GlueReport {
    pub fn failing_points(&self) -> Vec<&GroupElement> {
        self.entries.iter().filter(|e| !e.comparison.pass).map(|e| &e.point).collect()
    }
}

/// Check that `candidate` restricts to each supplied germ. Existence is
/// exhibited by the candidate; compatibility is checked at the samples.
pub fn glue(germs: &[Germ], candidate: &FourierDistribution, order: u32, tol: f64) -> GlueReport {
    let entries: Vec<GlueEntry> = germs
        .iter()
        .map(|g| {
            let comparison = match restrict_germ(candidate, &g.point, order.min(g.order)) {
                Ok(r) => compare_germs(&r, g, tol, DEFAULT_WINDOW),
                Err(e) => GermComparison::fail(f64::INFINITY, e.to_string()),
            };
            GlueEntry { point: g.point.clone(), comparison }
        })
        .collect();
    GlueReport { pass: entries.iter().all(|e| e.comparison.pass), entries }
}

impl fmt::Display for Germ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.body {
            GermBody::Taylor(Taylor::Exact(s)) => {
                let parts: Vec<String> = s.terms.iter().map(|(e, c)| format!("({c})Y^{e:?}")).collect();
                write!(f, "{}", if parts.is_empty() { "0".into() } else { parts.join(" + ") })
            }
            GermBody::Taylor(Taylor::Numeric(s)) => {
                let parts: Vec<String> = s.terms.iter().map(|(e, c)| format!("({c})Y^{e:?}")).collect();
                write!(f, "{}", if parts.is_empty() { "0".into() } else { parts.join(" + ") })
            }
            GermBody::Delta(p) => write!(f, "delta-germ with polynomial {}", mpoly_to_upoly_if_rank1(p)),
            GermBody::Density(d) => write!(f, "density {d}"),
            GermBody::Product(gs) => write!(f, "{}", gs.iter().map(|g| format!("[{g}]")).collect::<Vec<_>>().join(" ⊠ ")),
            GermBody::Sum(gs) => write!(f, "{}", gs.iter().map(|g| format!("[{g}]")).collect::<Vec<_>>().join(" + ")),
        }
    }
}

fn mpoly_to_upoly_if_rank1(p: &MPoly) -> String {
    if p.nvars == 1 {
        mpoly_to_upoly(p).to_string()
    } else {
        format!("{p:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    use crate::scalar::Q;

    fn at(t: Q) -> GroupElement {
        GroupElement::circle(t)
    }

    #[test]
    fn atiyah_at_minus_one_is_one_half() {
        let g = restrict_germ(&FourierDistribution::atiyah(1), &at(q(1, 2)), 0).unwrap();
        assert_eq!(g.as_taylor().unwrap(), &Taylor::constant(1, 0, GaussQ::frac(1, 2)));
    }

    #[test]
    fn delta_vanishes_away_from_identity() {
        let d = FourierDistribution::delta(&GroupDescriptor::torus(1));
        let g = restrict_germ(&d, &at(q(1, 2)), 8).unwrap();
        assert!(g.as_taylor().unwrap().is_zero());
        let g1 = restrict_germ(&d, &at(q(0, 1)), 8).unwrap();
        assert!(matches!(g1.body, GermBody::Delta(_)));
    }

    #[test]
    fn generic_point_is_certified() {
        let g = restrict_germ(&FourierDistribution::atiyah(1), &at(q(1, 3)), 4).unwrap();
        let v = g.value().unwrap();
        // −s/(1−s) at s = e^{2πi/3}
        let s = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let want = -s / (1.0 - s);
        assert!(v.overlaps(&Ball::exact(want), 1e-14));
        assert!(!g.is_exact());
    }
}
