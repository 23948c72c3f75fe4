//! Grassmann algebra over the coefficient ring: `Σ c_I dx_I` with `dx_I` a
//! bitmask of odd generators in increasing order.

use super::expr::Expr;
use crate::poly::MPoly;
use crate::scalar::GaussQ;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form {
    pub nvars: usize,
    pub nodd: usize,
    pub terms: BTreeMap<u64, Expr>,
}

/// Sign of `dx_a ∧ dx_b` reordered into increasing order; `None` if they overlap.
pub fn wedge_sign(a: u64, b: u64) -> Option<i64> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        // generators of `a` above j must move past dx_j
        swaps += (a >> (j + 1)).count_ones();
        bb &= bb - 1;
    }
    Some(if swaps % 2 == 0 { 1 } else { -1 })
}

impl Form {
    pub fn zero(nvars: usize, nodd: usize) -> Self {
        Form { nvars, nodd, terms: BTreeMap::new() }
    }
    pub fn scalar(nodd: usize, e: Expr) -> Self {
        let mut f = Self::zero(e.nvars, nodd);
        f.add_term(0, e);
        f
    }
    pub fn one(nvars: usize, nodd: usize) -> Self {
        Self::scalar(nodd, Expr::one(nvars))
    }
    pub fn monomial(nodd: usize, mask: u64, e: Expr) -> Self {
        let mut f = Self::zero(e.nvars, nodd);
        f.add_term(mask, e);
        f
    }
    /// `dx_i`.
    pub fn gen(nvars: usize, nodd: usize, i: usize) -> Self {
        Self::monomial(nodd, 1 << i, Expr::one(nvars))
    }
    pub fn add_term(&mut self, mask: u64, e: Expr) {
        if e.is_zero() {
            return;
        }
        let cur = self.terms.remove(&mask).unwrap_or_else(|| Expr::zero(self.nvars));
        let s = cur.add(&e);
        if !s.is_zero() {
            self.terms.insert(mask, s);
        }
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn add(&self, o: &Form) -> Form {
        let mut r = self.clone();
        for (m, e) in &o.terms {
            r.add_term(*m, e.clone());
        }
        r
    }
    pub fn neg(&self) -> Form {
        self.scale(&GaussQ::int(-1))
    }
    pub fn sub(&self, o: &Form) -> Form {
        self.add(&o.neg())
    }
    pub fn scale(&self, c: &GaussQ) -> Form {
        self.map(|e| e.scale(c))
    }
    pub fn mul_expr(&self, x: &Expr) -> Form {
        self.map(|e| e.mul(x))
    }
    pub fn mul_poly(&self, p: &MPoly) -> Form {
        self.map(|e| e.mul_poly(p))
    }
    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> Form {
        let mut r = Form::zero(self.nvars, self.nodd);
        for (m, e) in &self.terms {
            r.add_term(*m, f(e));
        }
        r
    }
    pub fn wedge(&self, o: &Form) -> Form {
        let mut r = Form::zero(self.nvars, self.nodd);
        for (a, ea) in &self.terms {
            for (b, eb) in &o.terms {
                if let Some(s) = wedge_sign(*a, *b) {
                    r.add_term(a | b, ea.mul(eb).scale(&GaussQ::int(s)));
                }
            }
        }
        r
    }
    pub fn pow(&self, k: u32) -> Form {
        (0..k).fold(Form::one(self.nvars, self.nodd), |acc, _| acc.wedge(self))
    }
    /// Component of exterior degree `k`.
    pub fn degree_part(&self, k: u32) -> Form {
        let mut r = Form::zero(self.nvars, self.nodd);
        for (m, e) in &self.terms {
            if m.count_ones() == k {
                r.add_term(*m, e.clone());
            }
        }
        r
    }
    /// Homogeneous parity, if any.
    pub fn parity(&self) -> Option<u32> {
        let mut ps = self.terms.keys().map(|m| m.count_ones() % 2);
        let first = ps.next()?;
        ps.all(|p| p == first).then_some(first)
    }
    pub fn scalar_part(&self) -> Expr {
        self.terms.get(&0).cloned().unwrap_or_else(|| Expr::zero(self.nvars))
    }
    pub fn coefficient(&self, mask: u64) -> Expr {
        self.terms.get(&mask).cloned().unwrap_or_else(|| Expr::zero(self.nvars))
    }
    pub fn reduce_osc(&self) -> Form {
        self.map(|e| e.reduce_osc())
    }
    pub fn truncate(&self, vars: &[usize], order: u32) -> Form {
        self.map(|e| e.truncate(vars, order))
    }
    /// Interior product with `∂_i`.
    pub fn contract(&self, i: usize) -> Form {
        let mut r = Form::zero(self.nvars, self.nodd);
        for (m, e) in &self.terms {
            if m & (1 << i) != 0 {
                let before = (m & ((1u64 << i) - 1)).count_ones();
                let s = if before % 2 == 0 { 1 } else { -1 };
                r.add_term(m & !(1 << i), e.scale(&GaussQ::int(s)));
            }
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anticommuting_generators() {
        let a = Form::gen(1, 3, 0);
        let b = Form::gen(1, 3, 2);
        assert_eq!(a.wedge(&b), b.wedge(&a).neg());
        assert!(a.wedge(&a).is_zero());
        assert_eq!(a.wedge(&b).contract(2), a.neg());
        assert_eq!(a.wedge(&b).contract(0), b);
    }
}
