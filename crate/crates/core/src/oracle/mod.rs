//! Analytic index by counting: each model operator has a weight-graded
//! monomial basis of kernel and cokernel states, and the multiplicity at a
//! weight is the signed count of states there.
//!
//! Conventions for the Hardy models on `S^{2n+1} ⊂ C^{n+1}` with diagonal
//! weight `w`: the kernel is spanned by the boundary values of `z^α`, at
//! weight `w|α|`; the cokernel of the adjoint family is spanned by
//! `z̄^β·z̄_0⋯z̄_n`, at weight `−w(|β| + n + 1)`, counted with sign `(−1)^n`.

use crate::distributions::group::window;
use crate::distributions::{FourierDistribution, GroupDescriptor, Weight};
use crate::error::{IndexError, Result};
use crate::scalar::GaussQ;
use crate::symbols::{KappaSpec, SymbolDescriptor, SymbolKind};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelOperator {
    /// Zero operator on `L²(T^n)`: every character once, in the kernel.
    FunctionSpaceOnTorus { n: usize },
    /// `∂̄`-type operator on `C` with weight `a`: no kernel, cokernel `z̄^m dz̄`.
    WeightedDbar { weight: i64 },
    /// Bott operator on `C^d` (or `R^d` for a cyclic group): Fock states
    /// `z^α ⊗ e_I`, energy `|α| + |I|`.
    BottOscillator { weights: Vec<i64>, modulus: Option<u64> },
    HardyBoundary { n: usize, weight: i64 },
    Tensor(Vec<ModelOperator>),
}

/// Signed count of states by weight, complete up to `cutoff` in degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityTable {
    pub cutoff: i64,
    pub group: GroupDescriptor,
    pub map: BTreeMap<Weight, i64>,
}

impl MultiplicityTable {
    pub fn get(&self, k: &Weight) -> i64 {
        self.map.get(k).copied().unwrap_or(0)
    }
}

impl fmt::Display for ModelOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelOperator::FunctionSpaceOnTorus { n } => write!(f, "L2(T^{n})"),
            ModelOperator::WeightedDbar { weight } => write!(f, "dbar(C_{weight})"),
            ModelOperator::BottOscillator { weights, modulus: None } => write!(f, "oscillator{weights:?}"),
            ModelOperator::BottOscillator { weights, modulus: Some(m) } => write!(f, "oscillator{weights:?} mod {m}"),
            ModelOperator::HardyBoundary { n, weight } => write!(f, "hardy(S^{}, {weight})", 2 * n + 1),
            ModelOperator::Tensor(ops) => write!(f, "{}", ops.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(" ⊗ ")),
        }
    }
}

/// All `α ∈ N^m` with `|α| = d`.
fn multi_indices(m: usize, d: i64) -> Vec<Vec<i64>> {
    if m == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = vec![];
    for first in 0..=d {
        for mut rest in multi_indices(m - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl ModelOperator {
    pub fn group(&self) -> GroupDescriptor {
        match self {
            ModelOperator::FunctionSpaceOnTorus { n } => GroupDescriptor::torus(*n),
            ModelOperator::BottOscillator { modulus: Some(m), .. } => GroupDescriptor::cyclic_group(*m),
            ModelOperator::Tensor(ops) => ops.iter().fold(GroupDescriptor::trivial(), |g, o| g.product(&o.group())),
            _ => GroupDescriptor::torus(1),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelOperator::WeightedDbar { weight } if *weight < 1 => Err(IndexError::Invalid(format!("dbar weight {weight} must be positive"))),
            ModelOperator::HardyBoundary { weight, .. } if weight.abs() != 1 => Err(IndexError::Invalid(format!("Hardy model needs a unit weight, got {weight}"))),
            ModelOperator::BottOscillator { weights, modulus } if weights.is_empty() || modulus.is_some_and(|m| m < 2) => {
                Err(IndexError::Invalid("oscillator needs at least one direction and a modulus ≥ 2".into()))
            }
            ModelOperator::Tensor(ops) => ops.iter().try_for_each(|o| o.validate()),
            _ => Ok(()),
        }
    }

    /// Basis states `(weight, sign)` of degree at most `cutoff`.
    pub fn states(&self, cutoff: i64) -> Vec<(Weight, i64)> {
        let g = self.group();
        match self {
            ModelOperator::FunctionSpaceOnTorus { .. } => window(&g, cutoff).into_iter().map(|k| (k, 1)).collect(),
            ModelOperator::WeightedDbar { weight } => (0..=cutoff).map(|m| (Weight::scalar(weight * (m + 1)), -1)).collect(),
            ModelOperator::BottOscillator { weights, modulus } => {
                let d = weights.len();
                let mut out = vec![];
                for energy in 0..=cutoff {
                    for mask in 0u32..1 << d {
                        let odd = mask.count_ones() as i64;
                        if odd > energy {
                            continue;
                        }
                        for alpha in multi_indices(d, energy - odd) {
                            let mut w: i64 = alpha.iter().zip(weights).map(|(a, x)| a * x).sum();
                            w += (0..d).filter(|j| mask & (1 << j) != 0).map(|j| weights[j]).sum::<i64>();
                            let sign = if odd % 2 == 0 { 1 } else { -1 };
                            let k = match modulus {
                                None => Weight::scalar(w),
                                Some(_) => Weight::new(&g, vec![], vec![w]).expect("cyclic weight"),
                            };
                            out.push((k, sign));
                        }
                    }
                }
                out
            }
            ModelOperator::HardyBoundary { n, weight } => {
                let vars = n + 1;
                let mut out = vec![];
                for deg in 0..=cutoff {
                    for _ in multi_indices(vars, deg) {
                        out.push((Weight::scalar(weight * deg), 1));
                    }
                    // z̄^β·z̄_0⋯z̄_n has degree |β| + n + 1
                    let beta = deg - vars as i64;
                    if beta >= 0 {
                        let sign = if n % 2 == 0 { 1 } else { -1 };
                        for _ in multi_indices(vars, beta) {
                            out.push((Weight::scalar(-weight * deg), sign));
                        }
                    }
                }
                out
            }
            ModelOperator::Tensor(ops) => {
                let mut acc: Vec<(Weight, i64)> = vec![(Weight::torus(vec![]), 1)];
                for o in ops {
                    let st = o.states(cutoff);
                    acc = acc.iter().flat_map(|(w1, s1)| st.iter().map(move |(w2, s2)| (w1.concat(w2), s1 * s2))).collect();
                }
                acc
            }
        }
    }

    pub fn table(&self, cutoff: i64) -> Result<MultiplicityTable> {
        self.validate()?;
        let mut map = BTreeMap::new();
        for (k, s) in self.states(cutoff) {
            *map.entry(k).or_insert(0) += s;
        }
        map.retain(|_, v| *v != 0);
        Ok(MultiplicityTable { cutoff, group: self.group(), map })
    }
}

/// Growth bound `|c_k| ≤ C(1+|k|)^N` required of every index.
pub const GROWTH_C: i64 = 4;
pub const GROWTH_N: u32 = 2;

/// Default cutoff for weights up to `window`.
pub fn default_cutoff(window: i64) -> i64 {
    2 * window.max(1)
}

/// `ker − coker` multiplicity at `k`, stable between `cutoff` and `2·cutoff`.
pub fn multiplicity(op: &ModelOperator, k: &Weight, cutoff: i64) -> Result<i64> {
    k.check(&op.group())?;
    let a = op.table(cutoff)?.get(k);
    let b = op.table(2 * cutoff)?.get(k);
    if a != b {
        return Err(IndexError::CutoffTooSmall(format!("{op} at {k}: {a} at cutoff {cutoff}, {b} at {}", 2 * cutoff)));
    }
    Ok(a)
}

/// Truncated atoms on `|k| ≤ window`, checked for cutoff stability.
pub fn oracle_distribution(op: &ModelOperator, window_r: i64) -> Result<FourierDistribution> {
    oracle_distribution_with(op, window_r, default_cutoff(window_r))
}

pub fn oracle_distribution_with(op: &ModelOperator, window_r: i64, cutoff: i64) -> Result<FourierDistribution> {
    let g = op.group();
    let lo = op.table(cutoff)?;
    let hi = op.table(2 * cutoff)?;
    let mut atoms = vec![];
    for k in window(&g, window_r) {
        let (a, b) = (lo.get(&k), hi.get(&k));
        if a != b {
            return Err(IndexError::CutoffTooSmall(format!("{op} at {k}: {a} at cutoff {cutoff}, {b} at {}", 2 * cutoff)));
        }
        if a != 0 {
            atoms.push((k, GaussQ::int(a)));
        }
    }
    let d = FourierDistribution::atoms(&g, atoms);
    if !d.check_growth(&crate::scalar::Q::from_integer(GROWTH_C.into()), GROWTH_N, window_r) {
        return Err(IndexError::Invalid(format!("{op}: oracle values grow too fast")));
    }
    Ok(d)
}

/// The model operator whose analytic index the catalog symbol stands for.
pub fn model_for(sigma: &SymbolDescriptor) -> Result<ModelOperator> {
    Ok(match &sigma.kind {
        SymbolKind::ZeroOnTorus { n } => ModelOperator::FunctionSpaceOnTorus { n: *n },
        SymbolKind::Atiyah { weight } | SymbolKind::PushedSpin { weight, kappa: KappaSpec::Generator } => ModelOperator::WeightedDbar { weight: *weight },
        SymbolKind::Pushed { base, kappa: KappaSpec::Generator } => match &base.kind {
            SymbolKind::CotangentClifford { weight } => ModelOperator::WeightedDbar { weight: *weight },
            _ => return Err(IndexError::Invalid(format!("no model operator for {sigma}"))),
        },
        SymbolKind::BottPlane { weight } => ModelOperator::BottOscillator { weights: vec![*weight], modulus: None },
        SymbolKind::BottLine => ModelOperator::BottOscillator { weights: vec![1], modulus: Some(2) },
        SymbolKind::Exterior { left, right } => ModelOperator::Tensor(vec![model_for(left)?, model_for(right)?]),
        // L²(K) ⊗ (base model) for a flat bundle
        SymbolKind::FreePullback { base, .. } => ModelOperator::Tensor(vec![ModelOperator::FunctionSpaceOnTorus { n: 1 }, model_for(base)?]),
        SymbolKind::ContactSphere { n, weights } => {
            let w = weights[0];
            if weights.iter().any(|&x| x != w) {
                return Err(IndexError::Invalid(format!("Hardy model needs equal weights, got {weights:?}")));
            }
            ModelOperator::HardyBoundary { n: *n, weight: w }
        }
        _ => return Err(IndexError::Invalid(format!("no model operator for {sigma}"))),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompareReport {
    pub pass: bool,
    pub window: i64,
    pub tol: f64,
    pub residuals: Vec<(Weight, f64)>,
    pub max_residual: f64,
    pub first_mismatch: Option<Weight>,
    pub detail: String,
}

/// Coefficientwise comparison on `|k| ≤ window`.
pub fn compare(a: &FourierDistribution, b: &FourierDistribution, window_r: i64, tol: f64) -> CompareReport {
    let mut rep = CompareReport { pass: true, window: window_r, tol, residuals: vec![], max_residual: 0.0, first_mismatch: None, detail: String::new() };
    if a.group != b.group {
        rep.pass = false;
        rep.max_residual = f64::INFINITY;
        rep.detail = format!("groups differ: {} vs {}", a.group, b.group);
        return rep;
    }
    for k in window(&a.group, window_r) {
        let r = match (a.coeff(&k), b.coeff(&k)) {
            (Ok(x), Ok(y)) => (x - y).to_c64().norm(),
            _ => f64::INFINITY,
        };
        rep.max_residual = rep.max_residual.max(r);
        if r > tol && rep.first_mismatch.is_none() {
            rep.pass = false;
            rep.detail = format!("first mismatch at k = {k}");
            rep.first_mismatch = Some(k.clone());
        }
        rep.residuals.push((k, r));
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(k: i64) -> Weight {
        Weight::scalar(k)
    }

    #[test]
    fn model_multiplicities() {
        assert_eq!(multiplicity(&ModelOperator::FunctionSpaceOnTorus { n: 1 }, &s(5), 16).unwrap(), 1);
        let a = ModelOperator::WeightedDbar { weight: 1 };
        assert_eq!(multiplicity(&a, &s(3), 16).unwrap(), -1);
        assert_eq!(multiplicity(&a, &s(0), 16).unwrap(), 0);
        let h = ModelOperator::HardyBoundary { n: 1, weight: 1 };
        for k in 0..8 {
            assert_eq!(multiplicity(&h, &s(k), 16).unwrap(), k + 1);
        }
        assert_eq!(multiplicity(&h, &s(-3), 16).unwrap(), -2);
    }

    #[test]
    fn cutoff_too_small() {
        let z = ModelOperator::FunctionSpaceOnTorus { n: 1 };
        assert!(matches!(multiplicity(&z, &s(10), 8), Err(IndexError::CutoffTooSmall(_))));
    }

    #[test]
    fn oracle_examples() {
        let g = GroupDescriptor::torus(1);
        let z = oracle_distribution(&ModelOperator::FunctionSpaceOnTorus { n: 1 }, 8).unwrap();
        assert_eq!(z.coefficients(8).len(), 17);
        let a = oracle_distribution(&ModelOperator::WeightedDbar { weight: 1 }, 8).unwrap();
        assert_eq!(a, FourierDistribution::atoms(&g, (1..=8).map(|k| (s(k), GaussQ::int(-1)))));
        let b = oracle_distribution(&ModelOperator::BottOscillator { weights: vec![1], modulus: None }, 8).unwrap();
        assert_eq!(b, FourierDistribution::constant(&g, GaussQ::one()));
        let b2 = oracle_distribution(&ModelOperator::BottOscillator { weights: vec![1], modulus: Some(2) }, 1).unwrap();
        assert_eq!(b2, FourierDistribution::constant(&GroupDescriptor::cyclic_group(2), GaussQ::one()));
    }

    #[test]
    fn compare_examples() {
        let g = GroupDescriptor::torus(1);
        let a = FourierDistribution::atiyah(1);
        let r = compare(&FourierDistribution::delta(&g), &a, 8, 0.0);
        assert!(!r.pass);
        assert_eq!(r.first_mismatch, Some(s(-8)));
        assert!(compare(&a, &a, 64, 0.0).pass);
    }

    #[test]
    fn catalog_matches_oracle() {
        use crate::cohindex::{assemble_index, sample_points};
        for (name, s) in crate::symbols::catalog() {
            let op = model_for(&s).unwrap();
            assert_eq!(op.group(), s.group(), "{name}");
            let o = oracle_distribution(&op, 12).unwrap();
            let v = assemble_index(&s, &sample_points(&s.group()), crate::distributions::DEFAULT_ORDER).unwrap();
            let r = compare(v.distribution.as_ref().unwrap(), &o, 12, 0.0);
            assert!(r.pass, "{name}: {}", r.detail);
        }
    }
}
