//! Supports of catalog symbols and their intersection with `T*_K M`.
//!
//! A support is described by a graph: each cotangent coordinate is either
//! free or a polynomial in the free ones. `T*_K M` is cut out by the moment
//! functions `f_j = ⟨ξ, V_j⟩`. Compactness of the intersection is certified
//! exactly when every noncompact coordinate is forced to vanish by a moment
//! function that, restricted to the support, is `c·v` or a definite diagonal
//! quadratic form.

use super::{contact_lower_bound, SymbolDescriptor, SymbolKind};
use crate::distributions::GroupDescriptor;
use crate::poly::MPoly;
use crate::scalar::{fmt_q, GaussQ, Q, C64};
use num::{Signed, Zero};
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq)]
pub struct CotangentModel {
    pub names: Vec<String>,
    pub compact: Vec<bool>,
    /// One moment function per torus generator.
    pub moment: Vec<MPoly>,
    /// `None` for a coordinate that is free on the support.
    pub support: Vec<Option<MPoly>>,
}

impl CotangentModel {
    fn point() -> Self {
        CotangentModel { names: vec![], compact: vec![], moment: vec![], support: vec![] }
    }
    fn dim(&self) -> usize {
        self.names.len()
    }
    fn circle(full_support: bool) -> Self {
        let n = 2;
        let xi = MPoly::var(n, 1);
        let support = if full_support { vec![None, None] } else { vec![None, Some(MPoly::zero(n))] };
        CotangentModel { names: vec!["theta".into(), "xi".into()], compact: vec![true, false], moment: vec![xi.neg()], support }
    }
    fn line_origin() -> Self {
        let z = MPoly::zero(2);
        CotangentModel { names: vec!["x".into(), "xi".into()], compact: vec![false, false], moment: vec![], support: vec![Some(z.clone()), Some(z)] }
    }
    /// `T*C` as `(x, y, ξ₁, ξ₂)` with `f = w(yξ₁ − xξ₂)`.
    fn plane(w: i64, shape: PlaneShape) -> Self {
        let n = 4;
        let v = |k| MPoly::var(n, k);
        let wq = GaussQ::int(w);
        let f = v(1).mul(&v(2)).sub(&v(0).mul(&v(3))).scale(&wq);
        let z = || Some(MPoly::zero(n));
        let support = match shape {
            PlaneShape::Origin => vec![z(), z(), z(), z()],
            PlaneShape::ZeroSection => vec![None, None, z(), z()],
            // ξ = −κ(x), κ = w(−y dx + x dy)
            PlaneShape::Graph => vec![None, None, Some(v(1).scale(&wq)), Some(v(0).scale(&-wq))],
        };
        CotangentModel {
            names: ["x", "y", "xi1", "xi2"].iter().map(|s| s.to_string()).collect(),
            compact: vec![false; 4],
            moment: vec![f],
            support,
        }
    }
    fn product(&self, o: &CotangentModel) -> CotangentModel {
        let (n1, n) = (self.dim(), self.dim() + o.dim());
        let left: Vec<usize> = (0..n1).collect();
        let right: Vec<usize> = (n1..n).collect();
        let clash = self.names.iter().any(|a| o.names.contains(a));
        let tag = |s: &String, t: &str| if clash { format!("{s}_{t}") } else { s.clone() };
        let mut names: Vec<String> = self.names.iter().map(|s| tag(s, "1")).collect();
        names.extend(o.names.iter().map(|s| tag(s, "2")));
        let mut moment: Vec<MPoly> = self.moment.iter().map(|p| p.remap(n, &left)).collect();
        moment.extend(o.moment.iter().map(|p| p.remap(n, &right)));
        let mut support: Vec<Option<MPoly>> = self.support.iter().map(|p| p.as_ref().map(|p| p.remap(n, &left))).collect();
        support.extend(o.support.iter().map(|p| p.as_ref().map(|p| p.remap(n, &right))));
        CotangentModel { names, compact: self.compact.iter().chain(&o.compact).copied().collect(), moment, support }
    }
    /// The moment functions restricted to the support.
    fn restricted_moment(&self) -> Vec<MPoly> {
        self.moment
            .iter()
            .map(|f| {
                let mut g = f.clone();
                for (i, p) in self.support.iter().enumerate() {
                    if let Some(p) = p {
                        g = g.substitute(i, p);
                    }
                }
                g
            })
            .collect()
    }
    fn fmt_support(&self) -> Vec<String> {
        self.support.iter().enumerate().filter_map(|(i, p)| p.as_ref().map(|p| format!("{} = {}", self.names[i], p.fmt_with(&self.names)))).collect()
    }
}

enum PlaneShape {
    Origin,
    ZeroSection,
    Graph,
}

/// Chart model of `σ`; `None` for the contact spheres.
pub(crate) fn model(s: &SymbolDescriptor) -> Option<CotangentModel> {
    Some(match &s.kind {
        SymbolKind::ZeroOnTorus { n } => (0..*n).fold(CotangentModel::point(), |m, _| m.product(&CotangentModel::circle(true))),
        SymbolKind::BottLine => CotangentModel::line_origin(),
        SymbolKind::BottPlane { weight } => CotangentModel::plane(*weight, PlaneShape::Origin),
        SymbolKind::CotangentClifford { weight } => CotangentModel::plane(*weight, PlaneShape::ZeroSection),
        SymbolKind::Atiyah { weight } | SymbolKind::PushedSpin { weight, .. } => CotangentModel::plane(*weight, PlaneShape::Graph),
        SymbolKind::Pushed { base, .. } => match &base.kind {
            SymbolKind::CotangentClifford { weight } => CotangentModel::plane(*weight, PlaneShape::Graph),
            _ => return None,
        },
        SymbolKind::Exterior { left, right } => model(left)?.product(&model(right)?),
        // Q*σ: the vertical covector is free, horizontal data follow σ.
        SymbolKind::FreePullback { base, .. } => CotangentModel::circle(true).product(&model(base)?),
        SymbolKind::ContactSphere { .. } => return None,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SupportDescription {
    pub coords: Vec<String>,
    /// Defining equations of `supp σ`; empty means all of `T*M`.
    pub equations: Vec<String>,
    pub support_compact: bool,
    /// Equations of `supp σ ∩ T*_K M`.
    pub intersection: Vec<String>,
    /// `None` when the catalog certificate does not apply.
    pub intersection_compact: Option<bool>,
    /// Noncompact coordinates are bounded by this on the intersection.
    pub witness_radius: Option<Q>,
    model: Option<CotangentModel>,
}

impl SupportDescription {
    /// Sample the support on a grid and check the flags: intersection points
    /// stay within the witness radius, and a noncompact verdict is backed by
    /// an intersection point of norm at least 1.
    pub fn probe_consistent(&self) -> bool {
        let Some(m) = &self.model else { return true };
        let free: Vec<usize> = (0..m.dim()).filter(|&i| m.support[i].is_none()).collect();
        let values = [-1.5, 0.0, 1.0, 2.0];
        let angles = [0.0, 1.0, 2.5, 4.0];
        let mut far = false;
        let mut idx = vec![0usize; free.len()];
        loop {
            let mut pt = vec![C64::new(0.0, 0.0); m.dim()];
            for (j, &i) in free.iter().enumerate() {
                pt[i] = C64::new(if m.compact[i] { angles[idx[j]] } else { values[idx[j]] }, 0.0);
            }
            for i in 0..m.dim() {
                if let Some(p) = &m.support[i] {
                    pt[i] = p.eval_c64(&pt);
                }
            }
            if m.moment.iter().all(|f| f.eval_c64(&pt).norm() < 1e-12) {
                let r = (0..m.dim()).filter(|&i| !m.compact[i]).map(|i| pt[i].norm_sqr()).sum::<f64>().sqrt();
                if let Some(w) = &self.witness_radius {
                    if r > crate::scalar::q_to_f64(w) + 1e-12 {
                        return false;
                    }
                }
                far |= r >= 1.0;
            }
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < values.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
        match self.intersection_compact {
            Some(false) => far,
            _ => true,
        }
    }
}

/// Forced-vanishing certificate; `Some(true)` compact, `Some(false)`
/// certified noncompact, `None` undecided.
fn certify(m: &CotangentModel, moment: &[MPoly]) -> (Option<bool>, BTreeSet<usize>) {
    let mut forced = BTreeSet::new();
    for g in moment {
        if g.is_zero() {
            continue;
        }
        if let Some(vars) = definite_vars(g) {
            forced.extend(vars);
        }
    }
    let noncompact = |i: usize| !m.compact[i];
    let free_ok = (0..m.dim()).filter(|&i| m.support[i].is_none() && noncompact(i)).all(|i| forced.contains(&i));
    let det_ok = (0..m.dim()).filter(|&i| noncompact(i)).all(|i| match &m.support[i] {
        Some(p) => p.constant_term().is_zero() && p.support_vars().iter().all(|v| forced.contains(v)),
        None => true,
    });
    if free_ok && det_ok {
        return (Some(true), forced);
    }
    let constant_free = moment.iter().all(|g| g.constant_term().is_zero());
    let unconstrained = (0..m.dim()).any(|i| m.support[i].is_none() && noncompact(i) && moment.iter().all(|g| g.degree_in(i) == 0));
    if constant_free && unconstrained {
        return (Some(false), forced);
    }
    (None, forced)
}

/// Variables of `g` when `g = c·v` or `g = Σ c_v v²` with the `c_v` real of one strict sign.
fn definite_vars(g: &MPoly) -> Option<Vec<usize>> {
    let mut vars = vec![];
    let mut sign = 0;
    let single_linear = g.terms.len() == 1 && g.total_degree() == Some(1);
    for (e, c) in &g.terms {
        if !c.im.is_zero() {
            return None;
        }
        let nz: Vec<usize> = (0..e.len()).filter(|&k| e[k] > 0).collect();
        if nz.len() != 1 {
            return None;
        }
        let k = nz[0];
        if single_linear {
            return Some(vec![k]);
        }
        if e[k] != 2 {
            return None;
        }
        let s = if c.re.is_positive() { 1 } else { -1 };
        if sign != 0 && s != sign {
            return None;
        }
        sign = s;
        vars.push(k);
    }
    Some(vars)
}

fn describe(m: &CotangentModel, group_acts: bool) -> SupportDescription {
    let moment = if group_acts { m.restricted_moment() } else { vec![] };
    let (verdict, forced) = certify(m, &moment);
    let support_compact = (0..m.dim()).all(|i| m.compact[i] || matches!(&m.support[i], Some(p) if p.is_zero()));
    let mut intersection = m.fmt_support();
    match verdict {
        Some(true) => {
            for v in &forced {
                if !m.compact[*v] {
                    intersection.push(format!("{} = 0", m.names[*v]));
                }
            }
        }
        _ => intersection.extend(moment.iter().filter(|g| !g.is_zero()).map(|g| format!("{} = 0", g.fmt_with(&m.names)))),
    }
    intersection.sort();
    intersection.dedup();
    SupportDescription {
        coords: m.names.clone(),
        equations: m.fmt_support(),
        support_compact,
        intersection,
        intersection_compact: verdict,
        witness_radius: (verdict == Some(true)).then(Q::zero),
        model: Some(CotangentModel { moment: if group_acts { m.moment.clone() } else { vec![] }, ..m.clone() }),
    }
}

fn contact_support(weights: &[i64], group_acts: bool) -> SupportDescription {
    let bound = contact_lower_bound(weights).ok();
    let compact = group_acts && bound.is_some();
    SupportDescription {
        coords: vec!["z".into(), "xi".into()],
        equations: vec!["xi = t*alpha, t >= 0".into()],
        support_compact: false,
        intersection: if compact {
            vec![format!("t*f_alpha = 0 with |f_alpha| >= {}", fmt_q(bound.as_ref().unwrap())), "xi = 0".into()]
        } else {
            vec!["xi = t*alpha, t >= 0".into()]
        },
        intersection_compact: Some(compact),
        witness_radius: compact.then(Q::zero),
        model: None,
    }
}

/// `supp σ` and its intersection with `T*_K M` for the symbol's own group.
pub fn support(s: &SymbolDescriptor) -> SupportDescription {
    describe_for(s, true)
}

fn describe_for(s: &SymbolDescriptor, group_acts: bool) -> SupportDescription {
    match (&s.kind, model(s)) {
        (SymbolKind::ContactSphere { weights, .. }, _) => contact_support(weights, group_acts),
        (_, Some(m)) => describe(&m, group_acts),
        (_, None) => SupportDescription {
            coords: vec![],
            equations: vec![],
            support_compact: false,
            intersection: vec![],
            intersection_compact: None,
            witness_radius: None,
            model: None,
        },
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EllipticityReport {
    pub transversal: bool,
    pub elliptic: bool,
    pub support: SupportDescription,
    pub reason: String,
}

/// Certify that `supp σ ∩ T*_K M` is compact for `K = group`, which must be
/// the symbol's own group or the trivial group.
pub fn is_transversally_elliptic(s: &SymbolDescriptor, group: &GroupDescriptor) -> EllipticityReport {
    let own = s.group();
    let trivial = group.rank == 0 && group.cyclic.is_empty();
    if *group != own && !trivial {
        return EllipticityReport {
            transversal: false,
            elliptic: false,
            support: support(s),
            reason: format!("{group} does not act on the model of {s} (expected {own})"),
        };
    }
    // Finite groups have T*_K M = T*M.
    let acts = !trivial && own.rank > 0;
    let d = describe_for(s, acts);
    let transversal = d.intersection_compact == Some(true);
    let reason = match d.intersection_compact {
        Some(true) => "intersection is compact".to_string(),
        Some(false) => "intersection contains an unbounded direction".to_string(),
        None => "no catalog certificate".to_string(),
    };
    EllipticityReport { transversal, elliptic: d.support_compact, support: d, reason }
}

#[cfg(test)]
mod tests {
    use super::super::{exterior_product, push_symbol, KappaSpec, PrincipalBundleData};
    use super::*;

    fn check(s: &SymbolDescriptor) -> EllipticityReport {
        let r = is_transversally_elliptic(s, &s.group());
        assert!(r.support.probe_consistent(), "{s}");
        r
    }

    #[test]
    fn atiyah_support() {
        let s = SymbolDescriptor::atiyah(1);
        let d = support(&s);
        assert_eq!(d.equations, vec!["xi1 = y", "xi2 = (-1)*x"]);
        assert!(!d.support_compact);
        let r = check(&s);
        assert!(r.transversal && !r.elliptic);
        assert_eq!(r.support.intersection, vec!["x = 0", "xi1 = y", "xi2 = (-1)*x", "y = 0"]);
        let t = is_transversally_elliptic(&s, &GroupDescriptor::trivial());
        assert!(!t.transversal);
        assert_eq!(t.support.intersection_compact, Some(false));
        assert!(t.support.probe_consistent());
    }

    #[test]
    fn zero_operator_support() {
        let r = check(&SymbolDescriptor::zero_on_torus(1));
        assert!(r.transversal && r.support.equations.is_empty());
        assert_eq!(r.support.intersection, vec!["xi = 0"]);
    }

    #[test]
    fn bott_is_elliptic() {
        for s in [SymbolDescriptor::bott_plane(1), SymbolDescriptor::bott_line()] {
            let r = check(&s);
            assert!(r.elliptic && r.transversal, "{s}");
        }
        assert!(is_transversally_elliptic(&SymbolDescriptor::bott_line(), &GroupDescriptor::trivial()).transversal);
    }

    #[test]
    fn clifford_on_cotangent_needs_push() {
        let s = SymbolDescriptor::cotangent_clifford(1);
        assert!(!check(&s).transversal);
        let p = push_symbol(&s, &KappaSpec::Generator).unwrap();
        let r = check(&p);
        assert!(r.transversal);
        // graph of −κ over C_κ = {0}
        assert_eq!(support(&p).equations, support(&SymbolDescriptor::atiyah(1)).equations);
    }

    #[test]
    fn products_and_pullbacks() {
        let a = SymbolDescriptor::atiyah(1);
        let p = exterior_product(&a, &a).unwrap();
        let r = check(&p);
        assert!(r.transversal);
        assert_eq!(r.support.coords.len(), 8);
        assert_eq!(r.support.equations.len(), 4);
        let z = SymbolDescriptor::zero_on_torus(1);
        assert!(check(&exterior_product(&a, &z).unwrap()).transversal);
        let q = SymbolDescriptor::new(SymbolKind::FreePullback { base: Box::new(z), bundle: PrincipalBundleData::torus_over_circle() });
        assert!(check(&q).transversal);
    }

    #[test]
    fn contact_support_compact() {
        let s = super::super::contact_data(1, &[1, 1]).unwrap();
        let r = check(&s);
        assert!(r.transversal && !r.elliptic);
        let s = SymbolDescriptor::new(SymbolKind::ContactSphere { n: 1, weights: vec![1, -1] });
        assert!(!check(&s).transversal);
    }
}
