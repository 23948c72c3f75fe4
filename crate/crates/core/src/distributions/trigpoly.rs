use super::group::{GroupDescriptor, Weight};
use crate::error::Result;
use crate::scalar::GaussQ;
use std::collections::BTreeMap;

/// Finite character sum `Σ c_w z^w`, an element of `R(K) ⊗ Q(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrigPolynomial {
    pub group: GroupDescriptor,
    pub terms: BTreeMap<Weight, GaussQ>,
}

impl TrigPolynomial {
    pub fn zero(g: &GroupDescriptor) -> Self {
        TrigPolynomial { group: g.clone(), terms: BTreeMap::new() }
    }
    pub fn one(g: &GroupDescriptor) -> Self {
        Self::monomial(g, Weight::zero(g), GaussQ::one())
    }
    pub fn monomial(g: &GroupDescriptor, w: Weight, c: GaussQ) -> Self {
        let mut p = Self::zero(g);
        p.add_term(w, c);
        p
    }
    /// Build from `(weight, coefficient)` pairs; weights are validated.
    pub fn from_terms(g: &GroupDescriptor, terms: &[(Weight, GaussQ)]) -> Result<Self> {
        let mut p = Self::zero(g);
        for (w, c) in terms {
            w.check(g)?;
            p.add_term(w.clone(), c.clone());
        }
        Ok(p)
    }
    pub fn add_term(&mut self, w: Weight, c: GaussQ) {
        let e = self.terms.entry(w.clone()).or_default();
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }
    pub fn add(&self, o: &TrigPolynomial) -> TrigPolynomial {
        let mut r = self.clone();
        for (w, c) in &o.terms {
            r.add_term(w.clone(), c.clone());
        }
        r
    }
    pub fn mul(&self, o: &TrigPolynomial) -> TrigPolynomial {
        let mut r = Self::zero(&self.group);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                r.add_term(w1.add(w2, &self.group), c1 * c2);
            }
        }
        r
    }
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Weight::zero(&self.group)).is_some_and(|c| c.is_one())
    }
}
