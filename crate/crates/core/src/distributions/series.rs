//! Truncated multivariate power series over a coefficient field.

use crate::scalar::{Coef, GaussQ};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct Series<C: Coef> {
    pub nvars: usize,
    pub order: u32,
    pub terms: BTreeMap<Vec<u32>, C>,
}

impl<C: Coef> Series<C> {
    pub fn zero(nvars: usize, order: u32) -> Self {
        Series { nvars, order, terms: BTreeMap::new() }
    }
    pub fn constant(nvars: usize, order: u32, c: C) -> Self {
        let mut s = Self::zero(nvars, order);
        s.insert(vec![0; nvars], c);
        s
    }
    pub fn one(nvars: usize, order: u32) -> Self {
        Self::constant(nvars, order, C::one())
    }
    /// The linear form `Σ_j a_j Y_j`.
    pub fn linear(order: u32, a: &[C]) -> Self {
        let n = a.len();
        let mut s = Self::zero(n, order);
        if order == 0 {
            return s;
        }
        for (j, c) in a.iter().enumerate() {
            let mut e = vec![0; n];
            e[j] = 1;
            s.insert(e, c.clone());
        }
        s
    }
    pub fn insert(&mut self, e: Vec<u32>, c: C) {
        if e.iter().sum::<u32>() > self.order {
            return;
        }
        let next = match self.terms.get(&e) {
            Some(old) => old.add(&c),
            None => c,
        };
        if next.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, next);
        }
    }
    pub fn coeff(&self, e: &[u32]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }
    pub fn constant_term(&self) -> C {
        self.coeff(&vec![0; self.nvars])
    }
    pub fn add(&self, o: &Self) -> Self {
        let mut r = Series::zero(self.nvars, self.order.min(o.order));
        for (e, c) in self.terms.iter().chain(o.terms.iter()) {
            r.insert(e.clone(), c.clone());
        }
        r
    }
    pub fn neg(&self) -> Self {
        Series { nvars: self.nvars, order: self.order, terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect() }
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn scale(&self, k: &C) -> Self {
        let mut r = Series::zero(self.nvars, self.order);
        for (e, c) in &self.terms {
            r.insert(e.clone(), c.mul(k));
        }
        r
    }
    pub fn mul(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let mut r = Series::zero(self.nvars, order);
        for (e1, c1) in &self.terms {
            let d1: u32 = e1.iter().sum();
            for (e2, c2) in &o.terms {
                if d1 + e2.iter().sum::<u32>() > order {
                    continue;
                }
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.insert(e, c1.mul(c2));
            }
        }
        r
    }
    /// Multiplicative inverse; `None` if the constant term is not invertible.
    pub fn inv(&self) -> Option<Self> {
        let c0 = self.constant_term().inv()?;
        // 1/(c0^{-1}·(1 + h)) with h of positive order.
        let unit = self.scale(&c0);
        let h = unit.sub(&Series::one(self.nvars, self.order));
        let mut acc = Series::one(self.nvars, self.order);
        let mut pw = Series::one(self.nvars, self.order);
        for _ in 0..self.order {
            pw = pw.mul(&h).neg();
            acc = acc.add(&pw);
        }
        Some(acc.scale(&c0))
    }
    /// `exp(h)` for `h` with zero constant term.
    pub fn exp_nilpotent(&self) -> Self {
        let mut acc = Series::one(self.nvars, self.order);
        let mut term = Series::one(self.nvars, self.order);
        for k in 1..=self.order {
            term = term.mul(self).scale(&C::from_gauss(&GaussQ::frac(1, k as i64)));
            acc = acc.add(&term);
        }
        acc
    }
    pub fn powi(&self, k: i64) -> Option<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = Series::one(self.nvars, self.order);
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Some(acc)
    }
    pub fn truncate(&self, order: u32) -> Self {
        let mut r = Series::zero(self.nvars, order.min(self.order));
        for (e, c) in &self.terms {
            r.insert(e.clone(), c.clone());
        }
        r
    }
    pub fn map<D: Coef>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        let mut r = Series::zero(self.nvars, self.order);
        for (e, c) in &self.terms {
            r.insert(e.clone(), f(c));
        }
        r
    }
    /// Product series in disjoint variable sets: `self(Y₁)·o(Y₂)`.
    pub fn tensor(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let mut r = Series::zero(self.nvars + o.nvars, order);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().chain(e2).copied().collect();
                r.insert(e, c1.mul(c2));
            }
        }
        r
    }
    /// Evaluate the truncated polynomial at a point.
    pub fn eval(&self, y: &[C]) -> C {
        let mut acc = C::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (yi, &k) in y.iter().zip(e) {
                for _ in 0..k {
                    t = t.mul(yi);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }
}

/// `e^{i⟨d,Y⟩}` as an exact series.
pub fn exp_i_linear(d: &[i64], order: u32) -> Series<GaussQ> {
    let lin: Vec<GaussQ> = d.iter().map(|&k| GaussQ::i() * GaussQ::int(k)).collect();
    Series::linear(order, &lin).exp_nilpotent()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_geometric() {
        // 1 - Y inverts to Σ Y^k.
        let s = Series::one(1, 6).sub(&Series::linear(6, &[GaussQ::one()]));
        let inv = s.inv().unwrap();
        for k in 0..=6 {
            assert_eq!(inv.coeff(&[k]), GaussQ::one());
        }
    }

    #[test]
    fn exp_of_i_y_is_periodic_coefficients() {
        let e = exp_i_linear(&[1], 4);
        assert_eq!(e.coeff(&[2]), GaussQ::frac(-1, 2));
        assert_eq!(e.coeff(&[3]), -GaussQ::i() * GaussQ::frac(1, 6));
    }
}
