//! Structural evaluators: free actions, external products, pushed symbols and
//! contact spheres.

use super::assemble::assemble_index;
use super::germs::index_germ_at;
use super::identity::{identity_eval, zero_circle, IdentityEval, IdentityRoute};
use super::normalization::{balance, two_i_pi_power, Stage};
use super::{germ_product, sample_points, IndexValue, Provenance, GLUE_TOL};
use crate::cartan::chart::{cotangent_circle, liouville};
use crate::cartan::integrate::{fiber_integrate, FiberValue};
use crate::cartan::par::{par_form, ParMode};
use crate::distributions::fourier::upoly_to_mpoly;
use crate::distributions::germ::{compare_coefficients, GermBody, GermComparison};
use crate::distributions::{glue, FourierDistribution, GeneralizedDensity, Germ, GroupDescriptor, GroupElement, Series, Weight, DEFAULT_ORDER};
use crate::error::{IndexError, Result};
use crate::poly::{interpolate_at_naturals, sum_of_squares, UPoly};
use crate::scalar::{GaussQ, Q};
use crate::symbols::{PrincipalBundleData, SymbolDescriptor, SymbolKind};

fn circle() -> GroupDescriptor {
    GroupDescriptor::torus(1)
}

fn is_trivial(g: &GroupDescriptor) -> bool {
    g.rank == 0 && g.cyclic.is_empty()
}

/// `∫_{k*} Par(−ν)` on `T*K`, `K = S¹`: the coefficient of `dφ` after
/// integrating over the covector `η` alone.
fn vertical_density() -> Result<GeneralizedDensity> {
    let c = cotangent_circle(1);
    let minus_nu = liouville(&c);
    let p = par_form(&c, &minus_nu, &sum_of_squares(c.nvars(), &[1]), ParMode::SymbolicLimit)?;
    // dη∧dφ = −dφ∧dη
    let r = fiber_integrate(&c, &p.par, &[1], -1)?;
    let want = two_i_pi_power(1, Stage::ParVertical);
    let mut u = GeneralizedDensity::zero();
    for t in &r.terms {
        match &t.value {
            FiberValue::Density(d) if t.mask == 1 && t.pi_pow == want => u = u.add(d),
            FiberValue::Density(d) if t.mask == 1 && !d.is_zero() => {
                return Err(IndexError::ReductionUnavailable(format!("vertical integral carries π^{}", t.pi_pow)));
            }
            FiberValue::Smooth(e) if t.mask == 1 && !e.is_zero() => {
                return Err(IndexError::ReductionUnavailable("smooth part in the vertical integral".into()));
            }
            _ => {}
        }
    }
    Ok(u.canonical())
}

/// The `K`-side factor `(2iπ)^{−1}·vol(K)·∫_{k*} Par(−ν)`; for a flat bundle
/// `Θ(Y) = 0` and the contraction with `δ(X − Θ(Y))` sets `X = 0` in the base.
fn k_side(order: u32) -> Result<(Germ, FourierDistribution)> {
    let u = vertical_density()?;
    balance(1, &[(Stage::FreeAction, -1), (Stage::Volume, 1), (Stage::ParVertical, 0)])?;
    // (2iπ)^{−1}·2π = 1/i
    let v = u.scale(&GaussQ::i().inv().unwrap());
    let dist = FourierDistribution::from_density(&v)?;
    Ok((Germ { point: circle().identity(), order, body: GermBody::Density(v) }, dist))
}

fn scale_germ(g: Germ, c: &GaussQ) -> Result<Germ> {
    let body = match g.body {
        GermBody::Density(d) => GermBody::Density(d.scale(c)),
        GermBody::Taylor(t) => GermBody::Taylor(t.scale(c)),
        GermBody::Delta(p) => GermBody::Delta(p.scale(c)),
        _ => return Err(IndexError::ReductionUnavailable("cannot scale a composite germ".into())),
    };
    Ok(Germ { body, ..g })
}

fn pullback_parts(base: &SymbolDescriptor, bundle: &PrincipalBundleData) -> Result<()> {
    base.validate()?;
    bundle.validate(base)
}

pub(crate) fn free_action_identity(base: &SymbolDescriptor, bundle: &PrincipalBundleData, order: u32) -> Result<IdentityEval> {
    pullback_parts(base, bundle)?;
    let (kg, kd) = k_side(order)?;
    let b = identity_eval(base, order)?;
    let g = circle().product(&base.group());
    if is_trivial(&base.group()) {
        let c = b.distribution.as_ref().and_then(|d| d.coeff(&Weight::zero(&d.group)).ok()).ok_or_else(|| IndexError::ReductionUnavailable("base index has no closed form".into()))?;
        let mut germ = scale_germ(kg, &c)?;
        germ.point = g.identity();
        return Ok(IdentityEval { germ, distribution: Some(kd.scale(&c)), route: IdentityRoute::FreeAction });
    }
    let germ = germ_product(&g.identity(), order, vec![kg, b.germ]);
    let distribution = b.distribution.map(|d| kd.external_product(&d));
    Ok(IdentityEval { germ, distribution, route: IdentityRoute::FreeAction })
}

pub(crate) fn free_action_germ(base: &SymbolDescriptor, bundle: &PrincipalBundleData, s: &GroupElement, order: u32) -> Result<Germ> {
    pullback_parts(base, bundle)?;
    let (k, b) = s.split(&circle());
    if !k.is_identity() {
        // K acts freely: no fixed points
        return Ok(Germ::zero(s.clone(), order));
    }
    let (kg, _) = k_side(order)?;
    let bg = index_germ_at(base, &b, order)?;
    Ok(germ_product(s, order, vec![kg, bg]))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FreeActionResult {
    pub symbol: String,
    pub group: GroupDescriptor,
    /// From the fiber integral of `Par(−ν)` over `k*`.
    pub cohomological: FourierDistribution,
    /// `Σ_τ Tr(k, τ)·index(σ_τ*)(g)`, truncated at `|τ| ≤ tau_cutoff`.
    pub series: FourierDistribution,
    pub per_tau: Vec<(i64, FourierDistribution)>,
    pub tau_cutoff: i64,
    pub comparison: GermComparison,
    /// Why the result is smooth in the base group.
    pub smoothness: String,
}

pub fn free_action_index(sigma: &SymbolDescriptor, tau_cutoff: i64) -> Result<FreeActionResult> {
    let SymbolKind::FreePullback { base, bundle } = &sigma.kind else {
        return Err(IndexError::Invalid(format!("{sigma} is not a free pullback")));
    };
    let e = free_action_identity(base, bundle, DEFAULT_ORDER)?;
    let cohomological = e.distribution.ok_or_else(|| IndexError::ReductionUnavailable("base index has no closed form".into()))?;
    let base_dist = identity_eval(base, DEFAULT_ORDER)?.distribution.ok_or_else(|| IndexError::ReductionUnavailable("base index has no closed form".into()))?;
    let g = sigma.group();
    // flat bundle: each V_τ is trivial, so index(σ_τ*) is the base index
    let base_coeffs = base_dist.coefficients(tau_cutoff);
    let mut atoms = vec![];
    let mut per_tau = vec![];
    for tau in -tau_cutoff..=tau_cutoff {
        per_tau.push((tau, base_dist.clone()));
        for (m, c) in &base_coeffs {
            atoms.push((Weight::scalar(tau).concat(m), c.clone()));
        }
    }
    let series = FourierDistribution::atoms(&g, atoms);
    let comparison = compare_coefficients(&cohomological, &series, tau_cutoff, 0.0);
    Ok(FreeActionResult {
        symbol: sigma.to_string(),
        group: g,
        cohomological,
        series,
        per_tau,
        tau_cutoff,
        comparison,
        smoothness: format!("flat {} bundle: the base index is evaluated at X = 0", bundle.total_space),
    })
}

pub fn multiplicative_index(sigma: &SymbolDescriptor) -> Result<IndexValue> {
    let SymbolKind::Exterior { left, right } = &sigma.kind else {
        return Err(IndexError::Invalid(format!("{sigma} is not an external product")));
    };
    sigma.validate()?;
    let l = assemble_index(left, &sample_points(&left.group()), DEFAULT_ORDER)?;
    let r = assemble_index(right, &sample_points(&right.group()), DEFAULT_ORDER)?;
    let g = sigma.group();
    let mut provenance = vec![
        Provenance::new("left factor", format!("{} ({})", l.symbol, if l.glued() { "glued" } else { "not glued" })),
        Provenance::new("right factor", format!("{} ({})", r.symbol, if r.glued() { "glued" } else { "not glued" })),
        Provenance::new("smoothness", format!("{} is almost homogeneous of order 0: the product is smooth in {}", r.symbol, r.group)),
    ];
    let distribution = match (&l.distribution, &r.distribution) {
        (Some(a), Some(b)) => Some(a.external_product(b)),
        _ => None,
    };
    let mut germs = vec![];
    for s in sample_points(&g) {
        germs.push(index_germ_at(sigma, &s, DEFAULT_ORDER)?);
    }
    provenance.push(Provenance::new("distribution", "external product of the factor indices"));
    let glue_report = distribution.as_ref().map(|d| glue(&germs, d, DEFAULT_ORDER, GLUE_TOL));
    let degraded = if distribution.is_none() { Some("a factor has no closed form".into()) } else { None };
    Ok(IndexValue { symbol: sigma.to_string(), group: g, distribution, germs, provenance, glue: glue_report, degraded })
}

pub fn pushed_index(sigma: &SymbolDescriptor) -> Result<IndexValue> {
    if !matches!(sigma.kind, SymbolKind::Pushed { .. } | SymbolKind::PushedSpin { .. }) {
        return Err(IndexError::Invalid(format!("{sigma} is not a pushed symbol")));
    }
    sigma.validate()?;
    assemble_index(sigma, &sample_points(&sigma.group()), DEFAULT_ORDER)
}

pub fn contact_index(sigma: &SymbolDescriptor) -> Result<IndexValue> {
    if !matches!(sigma.kind, SymbolKind::ContactSphere { .. }) {
        return Err(IndexError::Invalid(format!("{sigma} is not a contact symbol")));
    }
    sigma.validate()?;
    assemble_index(sigma, &sample_points(&sigma.group()), DEFAULT_ORDER)
}

/// The circle acts on `S^{2n+1}` through one unit weight `w`, so the contact
/// integral reduces to `CP^n`: `p(τ)` is the coefficient of `h^n` in
/// `(h/(1 − e^{−h}))^{n+1}·e^{τh}`, interpolated from `τ = 0..n`.
pub fn contact_polynomial(n: usize, w: i64) -> Result<UPoly> {
    if w.abs() != 1 {
        return Err(IndexError::ReductionUnavailable(format!("weight {w} is not a unit")));
    }
    let order = n as u32;
    // (1 − e^{−h})/h = Σ_k (−h)^k/(k+1)!
    let mut e = Series::zero(1, order);
    let mut fact = Q::from_integer(1.into());
    for k in 0..=order {
        fact *= Q::from_integer((k as i64 + 1).into());
        let sign = if k % 2 == 0 { 1 } else { -1 };
        e.insert(vec![k], GaussQ::real(Q::from_integer(sign.into()) / &fact));
    }
    let todd = e.inv().expect("unit constant term").powi(n as i64 + 1).unwrap();
    let mut values = vec![];
    for tau in 0..=n as i64 {
        let shift = Series::linear(order, &[GaussQ::int(tau)]).exp_nilpotent();
        values.push(todd.mul(&shift).coeff(&[order]));
    }
    let p = interpolate_at_naturals(&values);
    Ok(if w < 0 { p.compose_affine(&GaussQ::int(-1), &GaussQ::zero()) } else { p })
}

fn unit_diagonal(n: usize, weights: &[i64]) -> Result<i64> {
    let w = weights[0];
    if weights.len() != n + 1 || w.abs() != 1 || weights.iter().any(|&x| x != w) {
        return Err(IndexError::ReductionUnavailable(format!("contact reduction needs equal unit weights, got {weights:?}")));
    }
    Ok(w)
}

pub(crate) fn contact_identity(n: usize, weights: &[i64], order: u32) -> Result<IdentityEval> {
    let w = unit_diagonal(n, weights)?;
    if n == 0 {
        // S¹ itself: the symplectization is T*S¹ without its zero section
        let mut e = zero_circle(w, order)?;
        e.route = IdentityRoute::Contact;
        return Ok(e);
    }
    let p = upoly_to_mpoly(&contact_polynomial(n, w)?);
    Ok(IdentityEval {
        germ: Germ { point: circle().identity(), order, body: GermBody::Delta(p.clone()) },
        distribution: Some(FourierDistribution::lattice(&circle(), p)),
        route: IdentityRoute::Contact,
    })
}

pub(crate) fn contact_germ(n: usize, weights: &[i64], s: &GroupElement, order: u32) -> Result<Germ> {
    unit_diagonal(n, weights)?;
    // unit weights act freely on the sphere
    Ok(Germ::zero(s.clone(), order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::contact_data;

    #[test]
    fn free_action_over_point_is_delta() {
        let s = SymbolDescriptor::new(SymbolKind::FreePullback { base: Box::new(SymbolDescriptor::point()), bundle: PrincipalBundleData::circle_over_point() });
        let r = free_action_index(&s, 16).unwrap();
        assert!(r.comparison.pass, "{:?}", r.comparison);
        assert_eq!(r.cohomological, FourierDistribution::delta(&circle()));
    }

    #[test]
    fn free_action_factorizes() {
        for (base, bundle) in [
            (SymbolDescriptor::zero_on_torus(1), PrincipalBundleData::torus_over_circle()),
            (SymbolDescriptor::atiyah(1), PrincipalBundleData::trivial()),
        ] {
            let s = SymbolDescriptor::new(SymbolKind::FreePullback { base: Box::new(base.clone()), bundle });
            let r = free_action_index(&s, 8).unwrap();
            assert!(r.comparison.pass, "{base}: {:?}", r.comparison);
        }
    }

    #[test]
    fn contact_polynomials() {
        assert_eq!(contact_polynomial(0, 1).unwrap(), UPoly::constant(GaussQ::one()));
        assert_eq!(contact_polynomial(1, 1).unwrap(), UPoly::from_ints(&[1, 1]));
        assert_eq!(contact_polynomial(1, -1).unwrap(), UPoly::from_ints(&[1, -1]));
        // dim of degree-τ polynomials in three variables
        let p = contact_polynomial(2, 1).unwrap();
        for tau in 0..6i64 {
            assert_eq!(p.eval(&GaussQ::int(tau)), GaussQ::int((tau + 1) * (tau + 2) / 2));
        }
    }

    #[test]
    fn contact_circle_is_delta() {
        let v = contact_index(&contact_data(0, &[1]).unwrap()).unwrap();
        assert!(v.glued());
        assert_eq!(v.distribution.unwrap(), FourierDistribution::delta(&circle()));
    }

    #[test]
    fn contact_non_diagonal_degrades() {
        let s = SymbolDescriptor::new(SymbolKind::ContactSphere { n: 1, weights: vec![1, 2] });
        let v = contact_index(&s).unwrap();
        assert!(v.distribution.is_none() && v.degraded.is_some());
    }
}
