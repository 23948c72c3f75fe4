//! Germs at `s ≠ 1`: `Λ_s·Ch_s(σ)` on the fixed set `M(s)`.

use super::identity::identity_eval;
use super::{germ_product, structural};
use crate::cartan::chern::{bouquet_chern, bouquet_chern_supertrace, lambda_factor, FixedSetModel};
use crate::distributions::germ::Taylor;
use crate::distributions::{Germ, GroupElement, Weight};
use crate::error::{IndexError, Result};
use crate::poly::binomial_gauss;
use crate::scalar::GaussQ;
use crate::symbols::{SymbolDescriptor, SymbolKind};
use num::Zero;

/// Germ of the index at `s`; the zero germ when `M(s)` is empty.
pub fn index_germ_at(sigma: &SymbolDescriptor, s: &GroupElement, order: u32) -> Result<Germ> {
    if s.group() != sigma.group() {
        return Err(IndexError::GroupMismatch(format!("{s} is not an element of {}", sigma.group())));
    }
    if s.is_identity() {
        return Ok(identity_eval(sigma, order)?.germ);
    }
    match &sigma.kind {
        SymbolKind::ZeroOnTorus { n } => {
            let mut factors = vec![];
            for t in &s.torus {
                let c = GroupElement::circle(t.clone());
                factors.push(match lambda_factor(&c, &FixedSetModel::Circle, order)? {
                    None => Germ::zero(c, order),
                    Some(_) => identity_eval(&SymbolDescriptor::zero_on_torus(1), order)?.germ,
                });
            }
            debug_assert_eq!(factors.len(), *n);
            Ok(germ_product(s, order, factors))
        }
        SymbolKind::Atiyah { weight } => line_germ(sigma, *weight, s, order, false),
        SymbolKind::Pushed { base, .. } => match &base.kind {
            SymbolKind::CotangentClifford { weight } => line_germ(sigma, *weight, s, order, true),
            _ => Err(IndexError::ReductionUnavailable(format!("no germ evaluator for {sigma}"))),
        },
        // at the fixed point the twisted spinor module is ΛC_a, as for σ_V
        SymbolKind::PushedSpin { weight, .. } => line_germ(sigma, *weight, s, order, true),
        SymbolKind::BottPlane { weight } => {
            if fixes(s, *weight) {
                return relabel(identity_eval(sigma, order)?.germ, s);
            }
            let lf = lambda_factor(s, &FixedSetModel::Complex { weights: vec![*weight] }, order)?.expect("fixed point");
            Ok(Germ::taylor(s.clone(), lf.taylor.mul(&bouquet_chern(s, &[*weight, -*weight], order)?)))
        }
        SymbolKind::BottLine => {
            let lf = lambda_factor(s, &FixedSetModel::RealSign { dim: 1 }, order)?.expect("fixed point");
            let Taylor::Exact(l) = &lf.taylor else { unreachable!() };
            Ok(Germ::taylor(s.clone(), Taylor::constant(0, order, l.constant_term() * real_sign_supertrace(1))))
        }
        SymbolKind::Exterior { left, right } => {
            let (a, b) = s.split(&left.group());
            Ok(germ_product(s, order, vec![index_germ_at(left, &a, order)?, index_germ_at(right, &b, order)?]))
        }
        SymbolKind::FreePullback { base, bundle } => structural::free_action_germ(base, bundle, s, order),
        SymbolKind::ContactSphere { n, weights } => structural::contact_germ(*n, weights, s, order),
        SymbolKind::CotangentClifford { .. } => Err(IndexError::Invalid(format!("{sigma} is not transversally elliptic"))),
    }
}

fn fixes(s: &GroupElement, w: i64) -> bool {
    s.phase(&Weight::scalar(w)).is_zero()
}

fn relabel(mut g: Germ, s: &GroupElement) -> Result<Germ> {
    g.point = s.clone();
    Ok(g)
}

/// Line `C_a`: the origin is the only fixed point unless `s^a = 1`, in which
/// case `s` acts trivially and the germ is the identity one.
fn line_germ(sigma: &SymbolDescriptor, a: i64, s: &GroupElement, order: u32, supertrace: bool) -> Result<Germ> {
    if fixes(s, a) {
        return relabel(identity_eval(sigma, order)?.germ, s);
    }
    let lf = lambda_factor(s, &FixedSetModel::Complex { weights: vec![a] }, order)?.expect("fixed point");
    let ch = if supertrace { bouquet_chern_supertrace(s, &[a], order)? } else { bouquet_chern(s, &[a], order)? };
    Ok(Germ::taylor(s.clone(), lf.taylor.mul(&ch)))
}

/// `Str(ε)` on `ΛC^d` for `ε = −1`: `Σ_j (−1)^j·(−1)^j·C(d, j) = 2^d`.
fn real_sign_supertrace(d: u64) -> GaussQ {
    let mut acc = GaussQ::zero();
    for j in 0..=d {
        let sign = if j % 2 == 0 { 1 } else { -1 };
        acc += binomial_gauss(d, j) * GaussQ::int(sign) * GaussQ::int(sign);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{GroupDescriptor, DEFAULT_ORDER};
    use crate::distributions::germ::GermBody;
    use crate::distributions::Series;
    use crate::scalar::Q;

    fn half() -> GroupElement {
        GroupElement::circle(Q::new(1.into(), 2.into()))
    }

    #[test]
    fn atiyah_at_minus_one() {
        let g = index_germ_at(&SymbolDescriptor::atiyah(1), &half(), DEFAULT_ORDER).unwrap();
        // −s e^{iY}/(1 − s e^{iY}) at s = −1
        let x = Series::linear(DEFAULT_ORDER, &[GaussQ::i()]).exp_nilpotent();
        let one = Series::one(1, DEFAULT_ORDER);
        let want = x.mul(&one.add(&x).inv().unwrap());
        assert_eq!(g.as_taylor().unwrap(), &Taylor::Exact(want));
    }

    #[test]
    fn zero_operator_off_identity() {
        let g = index_germ_at(&SymbolDescriptor::zero_on_torus(1), &half(), DEFAULT_ORDER).unwrap();
        assert!(g.as_taylor().unwrap().is_zero());
    }

    #[test]
    fn bott_germs_are_one() {
        let eps = GroupDescriptor::cyclic_group(2).diagonal(&Q::new(1.into(), 2.into())).unwrap();
        let g = index_germ_at(&SymbolDescriptor::bott_line(), &eps, DEFAULT_ORDER).unwrap();
        assert_eq!(g.as_taylor().unwrap(), &Taylor::constant(0, DEFAULT_ORDER, GaussQ::one()));
        let g = index_germ_at(&SymbolDescriptor::bott_plane(1), &half(), DEFAULT_ORDER).unwrap();
        assert_eq!(g.as_taylor().unwrap(), &Taylor::constant(1, DEFAULT_ORDER, GaussQ::one()));
        let third = GroupElement::circle(Q::new(1.into(), 3.into()));
        let g = index_germ_at(&SymbolDescriptor::bott_plane(1), &third, DEFAULT_ORDER).unwrap();
        let b = g.as_taylor().unwrap().to_ball();
        assert!((b.coeff(&[0]).mid.re - 1.0).abs() < 1e-12);
        assert!(b.terms.iter().filter(|(e, _)| e[0] > 0).all(|(_, c)| c.abs_upper() < 1e-9));
    }

    #[test]
    fn weight_two_fixed_at_minus_one() {
        let g = index_germ_at(&SymbolDescriptor::atiyah(2), &half(), DEFAULT_ORDER).unwrap();
        assert!(matches!(g.body, GermBody::Density(_)));
    }
}
