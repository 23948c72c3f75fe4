//! Evaluators for the cohomological index: identity germs through
//! Par-reduced integrals, fixed-point germs `Λ_s·Ch_s`, assembly by gluing,
//! and the structural formulas.

mod assemble;
mod germs;
mod identity;
pub mod normalization;
mod numeric;
mod structural;

pub use assemble::{assemble_index, assemble_index_with, Fault};
pub use germs::index_germ_at;
pub use identity::{index_at_identity, par_kappa_density, IdentityRoute};
pub use numeric::{numeric_pairing_check, ConvergenceReport, PairingStep, NUMERIC_SYMBOLS};
pub use structural::{contact_index, contact_polynomial, free_action_index, multiplicative_index, pushed_index, FreeActionResult};

use crate::distributions::fourier::{FourierDistribution, Part};
use crate::distributions::germ::{GermBody, GlueReport, Taylor};
use crate::distributions::{Germ, GroupDescriptor, GroupElement};
use crate::poly::MPoly;
use crate::scalar::Q;

/// Default gluing tolerance for certified (non-exact) germ coefficients.
pub const GLUE_TOL: f64 = 1e-9;

/// Which evaluator produced one part of an [`IndexValue`].
#[derive(Clone, Debug, PartialEq)]
pub struct Provenance {
    pub part: String,
    pub evaluator: String,
}

impl Provenance {
    pub fn new(part: impl Into<String>, evaluator: impl Into<String>) -> Self {
        Provenance { part: part.into(), evaluator: evaluator.into() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndexValue {
    pub symbol: String,
    pub group: GroupDescriptor,
    /// Closed form, when some evaluator produced one.
    pub distribution: Option<FourierDistribution>,
    pub germs: Vec<Germ>,
    pub provenance: Vec<Provenance>,
    /// Set by [`assemble_index`].
    pub glue: Option<GlueReport>,
    /// Why the closed form is missing, if it is.
    pub degraded: Option<String>,
}

impl IndexValue {
    pub fn germ_at(&self, s: &GroupElement) -> Option<&Germ> {
        self.germs.iter().find(|g| &g.point == s)
    }
    pub fn glued(&self) -> bool {
        self.glue.as_ref().is_some_and(|r| r.pass)
    }
}

/// Default sample set: the diagonal elements at turns `0, 1/2, 1/4, 3/4, 1/3`
/// that exist in `g`. The last one is certified rather than exact.
pub fn sample_points(g: &GroupDescriptor) -> Vec<GroupElement> {
    let turns = [Q::from_integer(0.into()), Q::new(1.into(), 2.into()), Q::new(1.into(), 4.into()), Q::new(3.into(), 4.into()), Q::new(1.into(), 3.into())];
    let mut out: Vec<GroupElement> = vec![];
    for t in &turns {
        if let Some(s) = g.diagonal(t) {
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    out
}

/// Polynomial `p` with germ `Σ_k p(k) e^{ikY}`, for δ-type germs of rank 1.
fn delta_poly(g: &Germ) -> Option<MPoly> {
    match &g.body {
        GermBody::Delta(p) => Some(p.clone()),
        GermBody::Density(d) if d.as_full_line_poly().is_some() => match FourierDistribution::from_density(d).ok()?.parts.as_slice() {
            [Part::Lattice(p)] => Some(p.clone()),
            _ => None,
        },
        _ => None,
    }
}

fn is_zero_taylor(g: &Germ) -> bool {
    matches!(&g.body, GermBody::Taylor(t) if t.is_zero())
}

/// External product of germs on the factor groups, in the shape that
/// `restrict_germ` gives for an external product of distributions.
pub fn germ_product(point: &GroupElement, order: u32, factors: Vec<Germ>) -> Germ {
    if factors.len() == 1 {
        let mut g = factors.into_iter().next().unwrap();
        g.point = point.clone();
        return g;
    }
    if factors.iter().any(is_zero_taylor) {
        return Germ::zero(point.clone(), order);
    }
    if let Some(ts) = factors.iter().map(|g| g.as_taylor()).collect::<Option<Vec<&Taylor>>>() {
        let t = ts[1..].iter().fold(ts[0].clone(), |acc, t| acc.tensor(t));
        return Germ::taylor(point.clone(), t);
    }
    if let Some(ps) = factors.iter().map(delta_poly).collect::<Option<Vec<MPoly>>>() {
        let n: usize = ps.iter().map(|p| p.nvars).sum();
        let mut acc = MPoly::one(n);
        let mut off = 0;
        for p in &ps {
            let map: Vec<usize> = (off..off + p.nvars).collect();
            acc = acc.mul(&p.remap(n, &map));
            off += p.nvars;
        }
        return Germ { point: point.clone(), order, body: GermBody::Delta(acc) };
    }
    Germ { point: point.clone(), order, body: GermBody::Product(factors) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::germ::restrict_germ;
    use crate::distributions::DEFAULT_ORDER;

    #[test]
    fn samples_by_group() {
        assert_eq!(sample_points(&GroupDescriptor::torus(1)).len(), 5);
        let z2 = sample_points(&GroupDescriptor::cyclic_group(2));
        assert_eq!(z2.len(), 2);
        assert_eq!(sample_points(&GroupDescriptor::trivial()).len(), 1);
    }

    #[test]
    fn delta_product_matches_restriction() {
        let g1 = GroupDescriptor::torus(1);
        let d = FourierDistribution::delta(&g1);
        let e = d.external_product(&d);
        let id = e.group.identity();
        let one = restrict_germ(&d, &g1.identity(), DEFAULT_ORDER).unwrap();
        let prod = germ_product(&id, DEFAULT_ORDER, vec![one.clone(), one]);
        assert_eq!(prod, restrict_germ(&e, &id, DEFAULT_ORDER).unwrap());
    }
}
