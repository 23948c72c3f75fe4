//! The symbol catalog.
//!
//! Descriptors name symbols rather than carry them: each variant fixes a
//! model manifold, a group and a symbol whose support is known in closed
//! form. Clifford-type data outside the catalog goes through
//! `cartan::chern_transgression` instead.

mod support;

pub use support::{
    is_transversally_elliptic, support, CotangentModel, EllipticityReport, SupportDescription,
};

use crate::distributions::GroupDescriptor;
use crate::error::{IndexError, Result};
use crate::scalar::{fmt_q, q, Q};
use serde::{Deserialize, Serialize};
use std::fmt;

fn yes() -> bool {
    true
}

/// A catalog symbol together with its order-0 flag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolDescriptor {
    #[serde(flatten)]
    pub kind: SymbolKind,
    /// Almost homogeneous of order 0; required of right factors in products.
    #[serde(default = "yes")]
    pub order0: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SymbolKind {
    /// Zero operator on `T^n` acting on itself.
    ZeroOnTorus { n: usize },
    /// `x + iξ` on `R` with `Z/2` acting by `−1`.
    BottLine,
    /// Bott symbol of `R²` rotated with weight `weight`.
    BottPlane { weight: i64 },
    /// Atiyah symbol on `C` with weight `weight`.
    Atiyah { weight: i64 },
    /// `σ_V(x, ξ) = c(ξ)` on `C` with weight `weight`; invertible off the zero section.
    CotangentClifford { weight: i64 },
    /// `σ(x, ξ + κ(x))` for a base symbol invertible off the zero section.
    Pushed { base: Box<SymbolDescriptor>, kappa: KappaSpec },
    /// Spin Dirac symbol on `C` with weight `weight`, pushed by `κ`.
    PushedSpin { weight: i64, kappa: KappaSpec },
    Exterior { left: Box<SymbolDescriptor>, right: Box<SymbolDescriptor> },
    FreePullback { base: Box<SymbolDescriptor>, bundle: PrincipalBundleData },
    /// Tangential symbol of the round contact structure on `S^{2n+1}`.
    ContactSphere { n: usize, weights: Vec<i64> },
}

/// One-forms used to push symbols on the plane chart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum KappaSpec {
    /// Metric dual of the generator: `κ = w(−y dx + x dy)` for weight `w`.
    Generator,
    Zero,
}

/// Flat principal circle bundles of the catalog.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrincipalBundleData {
    /// `"S1"` (over a point), `"S1xS1"` (over `S¹`) or `"S1xM"`, the trivial
    /// bundle `S¹ × M` over the base symbol's manifold.
    pub total_space: String,
    pub structure_rank: usize,
    /// `θ = Σ c_j dφ_j` in the fiber angles.
    pub connection: Vec<i64>,
    /// Coefficient of the curvature two-form; zero for flat bundles.
    #[serde(default)]
    pub curvature: i64,
    /// Moment constant `μ(Y)`, zero for the catalog.
    #[serde(default)]
    pub moment: i64,
}

impl PrincipalBundleData {
    pub fn circle_over_point() -> Self {
        PrincipalBundleData { total_space: "S1".into(), structure_rank: 1, connection: vec![1], curvature: 0, moment: 0 }
    }
    pub fn torus_over_circle() -> Self {
        PrincipalBundleData { total_space: "S1xS1".into(), structure_rank: 1, connection: vec![1], curvature: 0, moment: 0 }
    }
    pub fn trivial() -> Self {
        PrincipalBundleData { total_space: "S1xM".into(), structure_rank: 1, connection: vec![1], curvature: 0, moment: 0 }
    }
    /// `vol(K, dX)` for the angle coordinate on `[0, 2π)`, as a power of `2π`.
    pub fn volume_two_pi_pow(&self) -> usize {
        self.structure_rank
    }
    pub fn validate(&self, base: &SymbolDescriptor) -> Result<()> {
        if self.structure_rank != 1 || self.connection != [1] {
            return Err(IndexError::UnsupportedBundle(format!("structure torus of rank {} with connection {:?}", self.structure_rank, self.connection)));
        }
        if self.curvature != 0 || self.moment != 0 {
            return Err(IndexError::UnsupportedBundle("only flat bundles are in the catalog".into()));
        }
        match (self.total_space.as_str(), &base.kind) {
            ("S1", SymbolKind::ZeroOnTorus { n: 0 }) => Ok(()),
            ("S1xS1", SymbolKind::ZeroOnTorus { n: 1 }) => Ok(()),
            ("S1xM", SymbolKind::ContactSphere { .. }) => Err(IndexError::UnsupportedBundle("no trivial bundle over a contact sphere".into())),
            ("S1xM", _) => Ok(()),
            ("S1", _) => Err(IndexError::UnsupportedBundle("the bundle S1 lies over a point".into())),
            ("S1xS1", _) => Err(IndexError::UnsupportedBundle("the bundle S1xS1 lies over S1".into())),
            (other, _) => Err(IndexError::UnsupportedBundle(format!("total space `{other}`"))),
        }
    }
}

impl SymbolDescriptor {
    pub fn new(kind: SymbolKind) -> Self {
        SymbolDescriptor { kind, order0: true }
    }
    pub fn zero_on_torus(n: usize) -> Self {
        Self::new(SymbolKind::ZeroOnTorus { n })
    }
    /// The identity symbol on a point, whose index is the trace map.
    pub fn point() -> Self {
        Self::zero_on_torus(0)
    }
    pub fn atiyah(weight: i64) -> Self {
        Self::new(SymbolKind::Atiyah { weight })
    }
    pub fn bott_line() -> Self {
        Self::new(SymbolKind::BottLine)
    }
    pub fn bott_plane(weight: i64) -> Self {
        Self::new(SymbolKind::BottPlane { weight })
    }
    pub fn cotangent_clifford(weight: i64) -> Self {
        Self::new(SymbolKind::CotangentClifford { weight })
    }
    pub fn pushed_spin(weight: i64) -> Self {
        Self::new(SymbolKind::PushedSpin { weight, kappa: KappaSpec::Generator })
    }
    pub fn with_order0(mut self, flag: bool) -> Self {
        self.order0 = flag;
        self
    }

    /// The acting group, factors in the order of the descriptor tree.
    pub fn group(&self) -> GroupDescriptor {
        match &self.kind {
            SymbolKind::ZeroOnTorus { n } => GroupDescriptor::torus(*n),
            SymbolKind::BottLine => GroupDescriptor::cyclic_group(2),
            SymbolKind::Exterior { left, right } => left.group().product(&right.group()),
            SymbolKind::FreePullback { base, .. } => GroupDescriptor::torus(1).product(&base.group()),
            _ => GroupDescriptor::torus(1),
        }
    }

    /// Structural checks that the constructors also enforce.
    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            SymbolKind::Atiyah { weight } if *weight < 1 => Err(IndexError::Invalid(format!("Atiyah weight {weight} must be at least 1"))),
            SymbolKind::BottPlane { weight } | SymbolKind::CotangentClifford { weight } | SymbolKind::PushedSpin { weight, .. } if *weight == 0 => {
                Err(IndexError::Invalid("plane weights must be nonzero".into()))
            }
            SymbolKind::PushedSpin { kappa, .. } => critical_set(kappa).map(|_| ()),
            SymbolKind::Pushed { base, kappa } => push_symbol(base, kappa).map(|_| ()),
            SymbolKind::Exterior { left, right } => exterior_product(left, right).map(|_| ()),
            SymbolKind::FreePullback { base, bundle } => {
                base.validate()?;
                bundle.validate(base)
            }
            SymbolKind::ContactSphere { n, weights } => contact_data(*n, weights).map(|_| ()),
            _ => Ok(()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("descriptors serialize")
    }
    pub fn from_json(s: &str) -> Result<Self> {
        let d: SymbolDescriptor = serde_json::from_str(s).map_err(|e| IndexError::Invalid(format!("symbol descriptor: {e}")))?;
        d.validate()?;
        Ok(d)
    }
}

impl fmt::Display for SymbolDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SymbolKind::ZeroOnTorus { n: 0 } => write!(f, "point"),
            SymbolKind::ZeroOnTorus { n } => write!(f, "zero(T^{n})"),
            SymbolKind::BottLine => write!(f, "bott(R, Z/2)"),
            SymbolKind::BottPlane { weight } => write!(f, "bott(R^2, {weight})"),
            SymbolKind::Atiyah { weight } => write!(f, "atiyah({weight})"),
            SymbolKind::CotangentClifford { weight } => write!(f, "sigma_V(C_{weight})"),
            SymbolKind::Pushed { base, .. } => write!(f, "pushed[{base}]"),
            SymbolKind::PushedSpin { weight, .. } => write!(f, "pushed-spin(C_{weight})"),
            SymbolKind::Exterior { left, right } => write!(f, "{left} x {right}"),
            SymbolKind::FreePullback { base, bundle } => write!(f, "pullback[{base}; {}]", bundle.total_space),
            SymbolKind::ContactSphere { n, weights } => write!(f, "contact(S^{}, {weights:?})", 2 * n + 1),
        }
    }
}

/// Exterior product; the right factor must carry the order-0 flag.
pub fn exterior_product(left: &SymbolDescriptor, right: &SymbolDescriptor) -> Result<SymbolDescriptor> {
    if !right.order0 {
        return Err(IndexError::OrderFlagMissing);
    }
    left.validate()?;
    right.validate()?;
    if matches!(left.kind, SymbolKind::ContactSphere { .. }) || matches!(right.kind, SymbolKind::ContactSphere { .. }) {
        return Err(IndexError::Invalid("contact spheres have no chart model for products".into()));
    }
    Ok(SymbolDescriptor::new(SymbolKind::Exterior { left: Box::new(left.clone()), right: Box::new(right.clone()) }).with_order0(left.order0))
}

/// The critical set `C_κ = {κ(V) = 0}` on the plane chart, as the radius
/// of a ball containing it; `κ(V) = −w²(x² + y²)` for the generator.
pub fn critical_set(kappa: &KappaSpec) -> Result<Q> {
    match kappa {
        KappaSpec::Generator => Ok(q(0, 1)),
        KappaSpec::Zero => Err(IndexError::NonCompactCriticalSet("κ = 0 on C: C_κ = C".into())),
    }
}

/// `σ(κ)(x, ξ) = σ(x, ξ + κ(x))`.
pub fn push_symbol(base: &SymbolDescriptor, kappa: &KappaSpec) -> Result<SymbolDescriptor> {
    match &base.kind {
        SymbolKind::CotangentClifford { weight } if *weight != 0 => {}
        SymbolKind::CotangentClifford { .. } => return Err(IndexError::Invalid("plane weights must be nonzero".into())),
        _ => return Err(IndexError::Invalid(format!("{base} is not invertible exactly off the zero section"))),
    }
    critical_set(kappa)?;
    Ok(SymbolDescriptor::new(SymbolKind::Pushed { base: Box::new(base.clone()), kappa: kappa.clone() }))
}

/// The round contact sphere `S^{2n+1}` with the given circle weights.
/// `f_α = α(V) = Σ w_j |z_j|²` on the sphere.
/// Named catalog entries: `(name, descriptor)`.
pub fn catalog() -> Vec<(&'static str, SymbolDescriptor)> {
    let z1 = SymbolDescriptor::zero_on_torus(1);
    let a1 = SymbolDescriptor::atiyah(1);
    let b1 = SymbolDescriptor::bott_plane(1);
    let ext = |l: &SymbolDescriptor, r: &SymbolDescriptor| exterior_product(l, r).expect("catalog product");
    let pull = |base: SymbolDescriptor, bundle: PrincipalBundleData| SymbolDescriptor::new(SymbolKind::FreePullback { base: Box::new(base), bundle });
    vec![
        ("point", SymbolDescriptor::point()),
        ("zero", z1.clone()),
        ("zero-t2", SymbolDescriptor::zero_on_torus(2)),
        ("atiyah", a1.clone()),
        ("atiyah-2", SymbolDescriptor::atiyah(2)),
        ("bott-line", SymbolDescriptor::bott_line()),
        ("bott-plane", b1.clone()),
        ("atiyah-x-atiyah", ext(&a1, &a1)),
        ("zero-x-zero", ext(&z1, &z1)),
        ("bott-x-bott", ext(&b1, &b1)),
        ("bott-line-x-bott-line", ext(&SymbolDescriptor::bott_line(), &SymbolDescriptor::bott_line())),
        ("pushed-clifford", push_symbol(&SymbolDescriptor::cotangent_clifford(1), &KappaSpec::Generator).expect("catalog push")),
        ("pushed-spin", SymbolDescriptor::pushed_spin(1)),
        ("free-point", pull(SymbolDescriptor::point(), PrincipalBundleData::circle_over_point())),
        ("free-circle", pull(z1, PrincipalBundleData::torus_over_circle())),
        ("free-atiyah", pull(a1, PrincipalBundleData::trivial())),
        ("contact-s1", contact_data(0, &[1]).expect("catalog contact")),
        ("contact-s3", contact_data(1, &[1, 1]).expect("catalog contact")),
        ("contact-s5", contact_data(2, &[1, 1, 1]).expect("catalog contact")),
    ]
}

pub fn contact_data(n: usize, weights: &[i64]) -> Result<SymbolDescriptor> {
    if weights.len() != n + 1 {
        return Err(IndexError::Invalid(format!("S^{} needs {} weights, got {}", 2 * n + 1, n + 1, weights.len())));
    }
    contact_lower_bound(weights)?;
    Ok(SymbolDescriptor::new(SymbolKind::ContactSphere { n, weights: weights.to_vec() }))
}

/// Certified lower bound of `|f_α|` on the sphere: `f_α` is a convex
/// combination of the weights, so the bound is `min |w_j|` when all weights
/// share a strict sign. Otherwise returns a point `u_j = |z_j|²` where `f_α = 0`.
pub fn contact_lower_bound(weights: &[i64]) -> Result<Q> {
    let fmt_u = |u: &[Q]| format!("u = ({})", u.iter().map(fmt_q).collect::<Vec<_>>().join(", "));
    let m = weights.len();
    if let Some(j) = weights.iter().position(|&w| w == 0) {
        let mut u = vec![q(0, 1); m];
        u[j] = q(1, 1);
        return Err(IndexError::ContactTransversalityFails(fmt_u(&u)));
    }
    let pos = weights.iter().position(|&w| w > 0);
    let neg = weights.iter().position(|&w| w < 0);
    if let (Some(i), Some(j)) = (pos, neg) {
        let (a, b) = (weights[i], weights[j]);
        let mut u = vec![q(0, 1); m];
        u[i] = q(-b, a - b);
        u[j] = q(a, a - b);
        return Err(IndexError::ContactTransversalityFails(fmt_u(&u)));
    }
    Ok(q(weights.iter().map(|w| w.abs()).min().unwrap_or(0), 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atiyah_product_is_valid() {
        let a = SymbolDescriptor::atiyah(1);
        let p = exterior_product(&a, &a).unwrap();
        assert_eq!(p.group(), GroupDescriptor::torus(2));
    }

    #[test]
    fn unflagged_right_factor_rejected() {
        let a = SymbolDescriptor::atiyah(1);
        let b = SymbolDescriptor::atiyah(1).with_order0(false);
        assert_eq!(exterior_product(&a, &b), Err(IndexError::OrderFlagMissing));
        assert!(exterior_product(&b, &a).is_ok());
    }

    #[test]
    fn zero_kappa_rejected() {
        let s = SymbolDescriptor::cotangent_clifford(1);
        assert!(matches!(push_symbol(&s, &KappaSpec::Zero), Err(IndexError::NonCompactCriticalSet(_))));
        assert!(push_symbol(&s, &KappaSpec::Generator).is_ok());
        assert!(push_symbol(&SymbolDescriptor::atiyah(1), &KappaSpec::Generator).is_err());
    }

    #[test]
    fn contact_weights() {
        assert!(contact_data(0, &[1]).is_ok());
        assert_eq!(contact_lower_bound(&[1, 1]), Ok(q(1, 1)));
        assert_eq!(contact_lower_bound(&[-2, -3]), Ok(q(2, 1)));
        match contact_data(1, &[1, -1]) {
            Err(IndexError::ContactTransversalityFails(w)) => assert_eq!(w, "u = (1/2, 1/2)"),
            other => panic!("{other:?}"),
        }
        assert!(contact_data(1, &[1]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let a = SymbolDescriptor::atiyah(2);
        let pushed = push_symbol(&SymbolDescriptor::cotangent_clifford(1), &KappaSpec::Generator).unwrap();
        let pull = SymbolDescriptor::new(SymbolKind::FreePullback {
            base: Box::new(SymbolDescriptor::zero_on_torus(1)),
            bundle: PrincipalBundleData::torus_over_circle(),
        });
        for d in [exterior_product(&a, &SymbolDescriptor::bott_plane(1)).unwrap(), pushed, pull, contact_data(1, &[1, 1]).unwrap()] {
            let s = d.to_json();
            let back = SymbolDescriptor::from_json(&s).unwrap();
            assert_eq!(back, d);
            assert_eq!(back.to_json(), s);
        }
    }

    #[test]
    fn unknown_kind_rejected() {
        assert!(SymbolDescriptor::from_json(r#"{"kind":"laplacian"}"#).is_err());
        assert!(SymbolDescriptor::from_json(r#"{"kind":"atiyah","weight":0}"#).is_err());
    }

    #[test]
    fn bundle_catalog() {
        let b = PrincipalBundleData { curvature: 1, ..PrincipalBundleData::circle_over_point() };
        assert!(matches!(b.validate(&SymbolDescriptor::point()), Err(IndexError::UnsupportedBundle(_))));
        assert!(PrincipalBundleData::circle_over_point().validate(&SymbolDescriptor::point()).is_ok());
        assert!(PrincipalBundleData::trivial().validate(&SymbolDescriptor::atiyah(1)).is_ok());
        assert!(PrincipalBundleData::torus_over_circle().validate(&SymbolDescriptor::atiyah(1)).is_err());
    }
}
