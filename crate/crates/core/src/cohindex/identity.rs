//! The germ at the identity, `(2iπ)^{−dim M}∫ Â(M)²·Ch_sup(σ)·Par(ω)`, landed
//! as a density on the Lie algebra and then as a Fourier series.

use super::normalization::{balance, two_i_pi_power, Stage};
use super::{germ_product, structural, IndexValue, Provenance};
use crate::cartan::chart::{cotangent_circle, cotangent_plane, liouville, plane, rotation_one_form};
use crate::cartan::chern::{bouquet_chern_supertrace, chern_transgression, lambda_factor, CliffordSymbolData, FixedSetModel};
use crate::cartan::integrate::fiber_integrate;
use crate::cartan::par::{par_form, ParMode};
use crate::distributions::germ::{GermBody, Taylor};
use crate::distributions::{FourierDistribution, GeneralizedDensity, Germ, GroupDescriptor, Series, SmoothFactor, DEFAULT_ORDER};
use crate::error::{IndexError, Result};
use crate::poly::sum_of_squares;
use crate::scalar::GaussQ;
use crate::symbols::{is_transversally_elliptic, KappaSpec, SymbolDescriptor, SymbolKind};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentityRoute {
    /// The trace map on a point.
    Trace,
    /// `Λ·∫_{T*S¹} Par(ω)`.
    ParLiouville,
    /// `Λ·∫_{T*C} Ch_sup·Par(κ)` with the Chern integral from the transgression.
    ParRotation,
    /// The same, with `∫_C Ch(σ_V)` obtained by localizing to the zero section.
    ThomLocalized,
    /// `∫_C Â·Par(κ)` for the spinor symbol.
    Spin,
    /// `Λ·∫ Ch(σ)` for compactly supported Bott symbols.
    BottChern,
    Product,
    FreeAction,
    Contact,
}

impl fmt::Display for IdentityRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            IdentityRoute::Trace => "trace on a point",
            IdentityRoute::ParLiouville => "Par(ω) on T*S1, fiber integral",
            IdentityRoute::ParRotation => "Ch_sup·Par(κ) on T*C, Chern transgression",
            IdentityRoute::ThomLocalized => "Ch_sup·Par(κ) on T*C, Thom factor by localization",
            IdentityRoute::Spin => "Â·Par(κ) on C",
            IdentityRoute::BottChern => "Λ·Ch(σ) over the compact support",
            IdentityRoute::Product => "external product",
            IdentityRoute::FreeAction => "free-action reduction",
            IdentityRoute::Contact => "contact reduction",
        };
        f.write_str(s)
    }
}

/// Identity germ together with the closed form it lands in, if any.
#[derive(Clone, Debug)]
pub(crate) struct IdentityEval {
    pub germ: Germ,
    pub distribution: Option<FourierDistribution>,
    pub route: IdentityRoute,
}

pub fn index_at_identity(sigma: &SymbolDescriptor) -> Result<IndexValue> {
    let rep = is_transversally_elliptic(sigma, &sigma.group());
    if !rep.transversal {
        return Err(IndexError::Invalid(format!("{sigma} is not transversally elliptic: {}", rep.reason)));
    }
    let e = identity_eval(sigma, DEFAULT_ORDER)?;
    Ok(IndexValue {
        symbol: sigma.to_string(),
        group: sigma.group(),
        distribution: e.distribution,
        germs: vec![e.germ],
        provenance: vec![Provenance::new("identity germ", e.route.to_string())],
        glue: None,
        degraded: None,
    })
}

pub(crate) fn identity_eval(sigma: &SymbolDescriptor, order: u32) -> Result<IdentityEval> {
    let g = sigma.group();
    match &sigma.kind {
        SymbolKind::ZeroOnTorus { n: 0 } => Ok(IdentityEval {
            germ: Germ::taylor(g.identity(), Taylor::constant(0, order, GaussQ::one())),
            distribution: Some(FourierDistribution::constant(&g, GaussQ::one())),
            route: IdentityRoute::Trace,
        }),
        SymbolKind::ZeroOnTorus { n: 1 } => zero_circle(1, order),
        SymbolKind::ZeroOnTorus { n } => {
            let one = zero_circle(1, order)?;
            let factors = vec![one; *n];
            Ok(product_eval(&g, order, &factors))
        }
        SymbolKind::Atiyah { weight } => plane_pipeline(*weight, ThomRoute::Transgression, order),
        SymbolKind::Pushed { base, kappa } => match (&base.kind, kappa) {
            (SymbolKind::CotangentClifford { weight }, KappaSpec::Generator) => plane_pipeline(*weight, ThomRoute::Localized, order),
            _ => Err(IndexError::ReductionUnavailable(format!("no pushed pipeline for {sigma}"))),
        },
        SymbolKind::PushedSpin { weight, kappa: KappaSpec::Generator } => plane_pipeline(*weight, ThomRoute::Spin, order),
        SymbolKind::BottPlane { weight } => bott_plane(*weight, order),
        SymbolKind::BottLine => bott_line(order),
        SymbolKind::Exterior { left, right } => {
            let l = identity_eval(left, order)?;
            let r = identity_eval(right, order)?;
            Ok(product_eval(&g, order, &[l, r]))
        }
        SymbolKind::FreePullback { base, bundle } => structural::free_action_identity(base, bundle, order),
        SymbolKind::ContactSphere { n, weights } => structural::contact_identity(*n, weights, order),
        _ => Err(IndexError::Invalid(format!("{sigma} has no identity evaluator"))),
    }
}

fn product_eval(g: &GroupDescriptor, order: u32, factors: &[IdentityEval]) -> IdentityEval {
    let germ = germ_product(&g.identity(), order, factors.iter().map(|f| f.germ.clone()).collect());
    let mut dist = factors[0].distribution.clone();
    for f in &factors[1..] {
        dist = match (dist, &f.distribution) {
            (Some(a), Some(b)) => Some(a.external_product(b)),
            _ => None,
        };
    }
    IdentityEval { germ, distribution: dist, route: IdentityRoute::Product }
}

fn no_pi(f: SmoothFactor) -> SmoothFactor {
    SmoothFactor { pi_pow: 0, ..f }
}

/// Check a closed-form multiplier against an independently computed Taylor germ.
fn certify(what: &str, f: &SmoothFactor, t: &Taylor, order: u32) -> Result<()> {
    let (s, _) = f.taylor(order)?;
    match t {
        Taylor::Exact(e) if *e == s => Ok(()),
        _ => Err(IndexError::ReductionUnavailable(format!("{what}: closed form disagrees with the computed germ"))),
    }
}

/// `∫_{T*S¹} Par(ω)` as a density, for the circle acting with weight `w`.
pub(crate) fn par_liouville_density(w: i64) -> Result<GeneralizedDensity> {
    let c = cotangent_circle(w);
    let l = liouville(&c);
    let p = par_form(&c, &l, &sum_of_squares(c.nvars(), &[1]), ParMode::SymbolicLimit)?;
    let r = fiber_integrate(&c, &p.par, &[0, 1], c.orientation)?;
    r.density(two_i_pi_power(1, Stage::ParCotangent))
}

/// `∫_C Par(κ)` as a density, `κ = a(−y dx + x dy)`.
pub fn par_kappa_density(a: i64) -> Result<GeneralizedDensity> {
    let c = plane(a);
    let k = rotation_one_form(&c, a);
    let p = par_form(&c, &k, &sum_of_squares(c.nvars(), &[0, 1]), ParMode::SymbolicLimit)?;
    let r = fiber_integrate(&c, &p.par, &[0, 1], c.orientation)?;
    r.density(two_i_pi_power(2, Stage::ParBase))
}

/// Zero symbol on `T*S¹`, the circle acting with weight `w = ±1`.
pub(crate) fn zero_circle(w: i64, order: u32) -> Result<IdentityEval> {
    let id = GroupDescriptor::torus(1).identity();
    let lf = lambda_factor(&id, &FixedSetModel::Circle, order)?.ok_or_else(|| IndexError::ReductionUnavailable("empty fixed set at the identity".into()))?;
    let u = par_liouville_density(w)?;
    balance(1, &[(Stage::Lambda, lf.pi_pow), (Stage::ParCotangent, 1)])?;
    let m = SmoothFactor::two_i_pi(-1);
    certify("Λ on S1", &m, &lf.taylor, order)?;
    let v = no_pi(m).apply(&u)?;
    let dist = FourierDistribution::from_density(&v)?;
    Ok(IdentityEval { germ: Germ { point: id, order, body: GermBody::Density(v) }, distribution: Some(dist), route: IdentityRoute::ParLiouville })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ThomRoute {
    Transgression,
    Localized,
    Spin,
}

/// `Ch(σ_V)` integrated over the fiber by localization: `Str(e^{μ})` on
/// `ΛC_a` divided by the equivariant Euler form `−iaX/(2iπ)`.
fn localized_thom(a: i64, order: u32) -> Result<(Series<GaussQ>, i32)> {
    let id = GroupDescriptor::torus(1).identity();
    let st = bouquet_chern_supertrace(&id, &[a], order + 1)?;
    let Taylor::Exact(st) = st else {
        return Err(IndexError::ReductionUnavailable("supertrace is not exact".into()));
    };
    if !st.constant_term().is_zero() {
        return Err(IndexError::ReductionUnavailable("supertrace does not vanish on the zero section".into()));
    }
    let euler = GaussQ::i() * GaussQ::int(-a);
    let mut out = Series::zero(1, order);
    for (e, c) in &st.terms {
        if e[0] >= 1 && e[0] - 1 <= order {
            out.insert(vec![e[0] - 1], c * &euler.inv().unwrap());
        }
    }
    // times 2iπ
    let out = out.scale(&(GaussQ::int(2) * GaussQ::i()));
    Ok((out, 1))
}

/// Atiyah-type symbols on `C` with weight `a`: the identity germ is
/// `Λ·∫_{T*C} Ch_sup(σ)·Par(κ)`, with the fiber integral of `Ch` done first.
fn plane_pipeline(a: i64, route: ThomRoute, order: u32) -> Result<IdentityEval> {
    let id = GroupDescriptor::torus(1).identity();
    let lf = lambda_factor(&id, &FixedSetModel::Complex { weights: vec![a] }, order)?
        .ok_or_else(|| IndexError::ReductionUnavailable("empty fixed set at the identity".into()))?;
    let u = par_kappa_density(a)?;
    // Ch is integrated in the complex orientation of the fiber, T*C carries the symplectic one.
    let orient = GaussQ::int(cotangent_plane(a).orientation);
    let (m, out_route) = match route {
        ThomRoute::Transgression | ThomRoute::Localized => {
            let lam = SmoothFactor::two_i_pi(-2).mul(&SmoothFactor::todd(a)).mul(&SmoothFactor::todd(-a));
            certify("Λ on C", &lam, &lf.taylor, order)?;
            let chern = SmoothFactor::chern_line(a);
            let (series, pi) = if route == ThomRoute::Transgression {
                let fam = chern_transgression(&CliffordSymbolData::new(vec![a]), order)?;
                if !fam.verified() {
                    return Err(IndexError::ReductionUnavailable("Chern transgression identities fail".into()));
                }
                (fam.integral, fam.integral_pi_pow)
            } else {
                localized_thom(a, order)?
            };
            certify("∫_C Ch(σ_V)", &chern, &Taylor::Exact(series), order)?;
            balance(2, &[(Stage::Lambda, lf.pi_pow), (Stage::ChernThom, pi), (Stage::ParBase, 1)])?;
            let r = if route == ThomRoute::Transgression { IdentityRoute::ParRotation } else { IdentityRoute::ThomLocalized };
            (lam.mul(&chern).scale(&orient), r)
        }
        ThomRoute::Spin => {
            // Â(C)² agrees with the Λ germ up to (2iπ)^{−2}.
            let ah = SmoothFactor::a_hat(a);
            certify("Â(C)²", &SmoothFactor::two_i_pi(-2).mul(&ah).mul(&ah), &lf.taylor, order)?;
            // spinors twisted by the square root of the canonical weight
            let twisted = ah.mul(&SmoothFactor::exp_shift(crate::scalar::Q::new(a.into(), 2.into())));
            let spin = SmoothFactor::two_i_pi(two_i_pi_power(2, Stage::Spin));
            balance(2, &[(Stage::Spin, spin.pi_pow), (Stage::ParBase, 1)])?;
            (spin.mul(&twisted).scale(&orient), IdentityRoute::Spin)
        }
    };
    let v = no_pi(m).apply(&u)?;
    let dist = FourierDistribution::from_density(&v)?;
    Ok(IdentityEval { germ: Germ { point: id, order, body: GermBody::Density(v) }, distribution: Some(dist), route: out_route })
}

/// A regular identity germ that is an exact constant lands as that constant.
fn constant_candidate(g: &GroupDescriptor, t: &Taylor) -> Option<FourierDistribution> {
    match t {
        Taylor::Exact(s) if s.terms.keys().all(|e| e.iter().all(|&k| k == 0)) => Some(FourierDistribution::constant(g, s.constant_term())),
        _ => None,
    }
}

/// Bott symbol on `T*R² = C_a ⊕ C_{−a}`: `Λ·∫_{T*R²} Ch(σ)`.
fn bott_plane(a: i64, order: u32) -> Result<IdentityEval> {
    let g = GroupDescriptor::torus(1);
    let id = g.identity();
    let lf = lambda_factor(&id, &FixedSetModel::Complex { weights: vec![a] }, order)?
        .ok_or_else(|| IndexError::ReductionUnavailable("empty fixed set at the identity".into()))?;
    let fam = chern_transgression(&CliffordSymbolData::new(vec![a, -a]), order)?;
    if !fam.verified() {
        return Err(IndexError::ReductionUnavailable("Chern transgression identities fail".into()));
    }
    balance(2, &[(Stage::Lambda, lf.pi_pow), (Stage::ChernCotangent, fam.integral_pi_pow)])?;
    let t = lf.taylor.mul(&Taylor::Exact(fam.integral));
    Ok(IdentityEval { distribution: constant_candidate(&g, &t), germ: Germ::taylor(id, t), route: IdentityRoute::BottChern })
}

/// Bott symbol on `T*R = C` with `Z/2` acting by `−1`.
fn bott_line(order: u32) -> Result<IdentityEval> {
    let g = GroupDescriptor::cyclic_group(2);
    let id = g.identity();
    let lf = lambda_factor(&id, &FixedSetModel::RealSign { dim: 1 }, order)?
        .ok_or_else(|| IndexError::ReductionUnavailable("empty fixed set at the identity".into()))?;
    // no Lie algebra: only the constant term of the circle-equivariant integral survives
    let fam = chern_transgression(&CliffordSymbolData::new(vec![0]), order)?;
    if !fam.verified() {
        return Err(IndexError::ReductionUnavailable("Chern transgression identities fail".into()));
    }
    balance(1, &[(Stage::Lambda, lf.pi_pow), (Stage::ChernCotangent, fam.integral_pi_pow)])?;
    let Taylor::Exact(lam) = &lf.taylor else {
        return Err(IndexError::ReductionUnavailable("Λ is not exact".into()));
    };
    let c = lam.constant_term() * fam.integral.constant_term();
    let t = Taylor::constant(0, order, c);
    Ok(IdentityEval { distribution: constant_candidate(&g, &t), germ: Germ::taylor(id, t), route: IdentityRoute::BottChern })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::Weight;
    use crate::poly::UPoly;
    use crate::scalar::Q;

    fn ev(s: &SymbolDescriptor) -> IdentityEval {
        identity_eval(s, DEFAULT_ORDER).unwrap()
    }

    #[test]
    fn zero_operator_is_delta() {
        let e = ev(&SymbolDescriptor::zero_on_torus(1));
        let g = GroupDescriptor::torus(1);
        assert_eq!(e.distribution.unwrap(), FourierDistribution::delta(&g));
    }

    #[test]
    fn par_kappa_is_half_line() {
        // 2iπ ∫_0^∞ e^{irθ} dr
        let u = par_kappa_density(1).unwrap();
        assert_eq!(u, GeneralizedDensity::piece(Some(Q::from_integer(0.into())), None, UPoly::constant(GaussQ::new(Q::from_integer(0.into()), Q::from_integer(2.into())))));
    }

    #[test]
    fn atiyah_routes_agree() {
        for a in [1, 2] {
            let want = FourierDistribution::atiyah(a);
            let s = SymbolDescriptor::atiyah(a);
            assert_eq!(ev(&s).distribution.unwrap(), want, "transgression, a = {a}");
            let p = crate::symbols::push_symbol(&SymbolDescriptor::cotangent_clifford(a), &KappaSpec::Generator).unwrap();
            assert_eq!(ev(&p).distribution.unwrap(), want, "localized, a = {a}");
            assert_eq!(ev(&SymbolDescriptor::pushed_spin(a)).distribution.unwrap(), want, "spin, a = {a}");
        }
    }

    #[test]
    fn bott_is_one() {
        let e = ev(&SymbolDescriptor::bott_line());
        assert_eq!(e.distribution.unwrap(), FourierDistribution::constant(&GroupDescriptor::cyclic_group(2), GaussQ::one()));
        let e = ev(&SymbolDescriptor::bott_plane(1));
        assert_eq!(e.distribution.unwrap().coeff(&Weight::scalar(0)).unwrap(), GaussQ::one());
    }

    #[test]
    fn torus_products() {
        let e = ev(&SymbolDescriptor::zero_on_torus(2));
        assert_eq!(e.distribution.unwrap(), FourierDistribution::delta(&GroupDescriptor::torus(2)));
        assert!(matches!(e.germ.body, GermBody::Delta(_)));
        let p = ev(&SymbolDescriptor::point());
        assert_eq!(p.germ.value().unwrap().mid.re, 1.0);
    }
}
