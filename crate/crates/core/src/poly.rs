//! Univariate and multivariate polynomials over the Gaussian rationals.

use crate::scalar::{binomial, GaussQ, Q};
use num::{BigInt, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Dense univariate polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UPoly(pub Vec<GaussQ>);

impl UPoly {
    pub fn new(mut c: Vec<GaussQ>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly(c)
    }
    pub fn zero() -> Self {
        UPoly(vec![])
    }
    pub fn constant(c: GaussQ) -> Self {
        Self::new(vec![c])
    }
    pub fn x() -> Self {
        Self::new(vec![GaussQ::zero(), GaussQ::one()])
    }
    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&k| GaussQ::int(k)).collect())
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }
    pub fn coeff(&self, k: usize) -> GaussQ {
        self.0.get(k).cloned().unwrap_or_default()
    }
    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }
    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        UPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
    pub fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.neg())
    }
    pub fn neg(&self) -> UPoly {
        UPoly(self.0.iter().map(|c| -c).collect())
    }
    pub fn scale(&self, c: &GaussQ) -> UPoly {
        UPoly::new(self.0.iter().map(|x| x * c).collect())
    }
    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![GaussQ::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }
    pub fn eval(&self, x: &GaussQ) -> GaussQ {
        self.0.iter().rev().fold(GaussQ::zero(), |acc, c| &(&acc * x) + c)
    }
    pub fn eval_q(&self, x: &Q) -> GaussQ {
        self.eval(&GaussQ::real(x.clone()))
    }
    pub fn eval_c64(&self, x: crate::scalar::C64) -> crate::scalar::C64 {
        self.0.iter().rev().fold(crate::scalar::C64::new(0.0, 0.0), |acc, c| acc * x + c.to_c64())
    }
    /// `p(a·x + b)`.
    pub fn compose_affine(&self, a: &GaussQ, b: &GaussQ) -> UPoly {
        let lin = UPoly::new(vec![b.clone(), a.clone()]);
        let mut acc = UPoly::zero();
        for c in self.0.iter().rev() {
            acc = acc.mul(&lin).add(&UPoly::constant(c.clone()));
        }
        acc
    }
    /// `p(x + b)`.
    pub fn shift(&self, b: &GaussQ) -> UPoly {
        self.compose_affine(&GaussQ::one(), b)
    }
    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &GaussQ::int(k as i64))
                .collect(),
        )
    }
    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> UPoly {
        let mut out = vec![GaussQ::zero()];
        for (k, c) in self.0.iter().enumerate() {
            out.push(c / &GaussQ::int(k as i64 + 1));
        }
        UPoly::new(out)
    }
    pub fn max_abs_coeff(&self) -> f64 {
        self.0.iter().map(|c| c.abs_bound()).fold(0.0, f64::max)
    }
    /// Coefficients `c_j` with `p(n) = Σ_j c_j·C(n+j, j)`, so that
    /// `Σ_{n≥0} p(n) x^n = Σ_j c_j (1−x)^{−(j+1)}`.
    pub fn to_binomial_basis(&self) -> Vec<GaussQ> {
        let d = match self.degree() {
            None => return vec![],
            Some(d) => d,
        };
        // C(n+j, j) is a polynomial in n of degree j; solve top-down.
        let basis: Vec<UPoly> = (0..=d).map(binomial_poly).collect();
        let mut rest = self.clone();
        let mut out = vec![GaussQ::zero(); d + 1];
        for j in (0..=d).rev() {
            let lead = basis[j].coeff(j);
            let c = &rest.coeff(j) / &lead;
            rest = rest.sub(&basis[j].scale(&c));
            out[j] = c;
        }
        debug_assert!(rest.is_zero());
        out
    }
}

/// Polynomial through `(n, values[n])` for `n = 0..values.len()`, via
/// forward differences in the falling binomial basis.
pub fn interpolate_at_naturals(values: &[GaussQ]) -> UPoly {
    let mut diffs = values.to_vec();
    let mut acc = UPoly::zero();
    // C(n, j) = n(n-1)...(n-j+1)/j!
    let mut basis = UPoly::constant(GaussQ::one());
    for j in 0..values.len() {
        acc = acc.add(&basis.scale(&diffs[0]));
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
        let f = UPoly::new(vec![GaussQ::int(-(j as i64)), GaussQ::one()]).scale(&GaussQ::frac(1, j as i64 + 1));
        basis = basis.mul(&f);
    }
    acc
}

/// `n ↦ C(n+j, j)` as a polynomial in `n`.
pub fn binomial_poly(j: usize) -> UPoly {
    let mut acc = UPoly::constant(GaussQ::one());
    for k in 1..=j {
        // (n + k) / k
        let f = UPoly::new(vec![GaussQ::int(k as i64), GaussQ::one()]).scale(&GaussQ::frac(1, k as i64));
        acc = acc.mul(&f);
    }
    acc
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})n"),
                _ => format!("({c})n^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Sparse multivariate polynomial with a fixed number of variables.
/// Monomials are ordered lexicographically on exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, GaussQ>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }
    pub fn constant(nvars: usize, c: GaussQ) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }
    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, GaussQ::one())
    }
    pub fn var(nvars: usize, k: usize) -> Self {
        let mut e = vec![0; nvars];
        e[k] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, GaussQ::one());
        p
    }
    pub fn monomial(exps: Vec<u32>, c: GaussQ) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }
    pub fn add_term(&mut self, exps: Vec<u32>, c: GaussQ) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(exps.clone()).or_default();
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&exps);
        }
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }
    pub fn constant_term(&self) -> GaussQ {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_default()
    }
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }
    pub fn degree_in(&self, k: usize) -> u32 {
        self.terms.keys().map(|e| e[k]).max().unwrap_or(0)
    }
    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }
    pub fn sub(&self, o: &MPoly) -> MPoly {
        self.add(&o.neg())
    }
    pub fn neg(&self) -> MPoly {
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
    pub fn scale(&self, k: &GaussQ) -> MPoly {
        if k.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect() }
    }
    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1 * c2);
            }
        }
        r
    }
    pub fn pow(&self, k: u32) -> MPoly {
        (0..k).fold(MPoly::one(self.nvars), |acc, _| acc.mul(self))
    }
    pub fn derivative(&self, k: usize) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[k] > 0 {
                let mut e2 = e.clone();
                e2[k] -= 1;
                r.add_term(e2, c * &GaussQ::int(e[k] as i64));
            }
        }
        r
    }
    /// Substitute variable `k` by the polynomial `p`.
    pub fn substitute(&self, k: usize, p: &MPoly) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[k] = 0;
            r = r.add(&MPoly::monomial(e2, c.clone()).mul(&p.pow(e[k])));
        }
        r
    }
    pub fn eval(&self, x: &[GaussQ]) -> GaussQ {
        let mut acc = GaussQ::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                t = &t * &xi.pow(k as i64);
            }
            acc += t;
        }
        acc
    }
    pub fn eval_c64(&self, x: &[crate::scalar::C64]) -> crate::scalar::C64 {
        let mut acc = crate::scalar::C64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = c.to_c64();
            for (xi, &k) in x.iter().zip(e) {
                t *= xi.powi(k as i32);
            }
            acc += t;
        }
        acc
    }
    /// Variables that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&k| self.degree_in(k) > 0).collect()
    }
    pub fn leading(&self) -> Option<(&Vec<u32>, &GaussQ)> {
        self.terms.iter().next_back()
    }
    /// Division with remainder by a single polynomial (lex order):
    /// `self = q·d + r` with no term of `r` divisible by `lt(d)`.
    pub fn div_rem(&self, d: &MPoly) -> (MPoly, MPoly) {
        let (le, lc) = match d.leading() {
            None => return (MPoly::zero(self.nvars), self.clone()),
            Some((e, c)) => (e.clone(), c.clone()),
        };
        let mut quo = MPoly::zero(self.nvars);
        let mut rem = MPoly::zero(self.nvars);
        let mut p = self.clone();
        while let Some((e, c)) = p.leading().map(|(e, c)| (e.clone(), c.clone())) {
            if e.iter().zip(&le).all(|(a, b)| a >= b) {
                let qe: Vec<u32> = e.iter().zip(&le).map(|(a, b)| a - b).collect();
                let qt = MPoly::monomial(qe, &c / &lc);
                p = p.sub(&qt.mul(d));
                quo = quo.add(&qt);
            } else {
                p.terms.remove(&e);
                rem.add_term(e, c);
            }
        }
        (quo, rem)
    }
    /// Exact quotient, if `d` divides `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }
    /// Re-embed into a polynomial ring with `n` variables via an index map.
    pub fn remap(&self, n: usize, map: &[usize]) -> MPoly {
        let mut r = MPoly::zero(n);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; n];
            for (k, &x) in e.iter().enumerate() {
                e2[map[k]] += x;
            }
            r.add_term(e2, c.clone());
        }
        r
    }
    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = vec![];
        for (e, c) in &self.terms {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{}", names[i], k) })
                .collect();
            if mono.is_empty() {
                parts.push(format!("({c})"));
            } else if c.is_one() {
                parts.push(mono.join("*"));
            } else {
                parts.push(format!("({c})*{}", mono.join("*")));
            }
        }
        parts.join(" + ")
    }
}

/// `Σ_k x_k^2` over the listed variables.
pub fn sum_of_squares(nvars: usize, vars: &[usize]) -> MPoly {
    vars.iter().fold(MPoly::zero(nvars), |acc, &k| acc.add(&MPoly::var(nvars, k).pow(2)))
}

pub fn bigint_to_gauss(b: BigInt) -> GaussQ {
    GaussQ::real(Q::from_integer(b))
}

pub fn binomial_gauss(n: u64, k: u64) -> GaussQ {
    bigint_to_gauss(binomial(n, k))
}

pub fn is_zero_q(x: &Q) -> bool {
    x.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_basis_reconstructs() {
        let p = UPoly::from_ints(&[3, -1, 2, 5]);
        let c = p.to_binomial_basis();
        let mut acc = UPoly::zero();
        for (j, cj) in c.iter().enumerate() {
            acc = acc.add(&binomial_poly(j).scale(cj));
        }
        assert_eq!(acc, p);
    }

    #[test]
    fn division_by_quadratic() {
        let n = 3;
        let x = MPoly::var(n, 0);
        let y = MPoly::var(n, 1);
        let t = MPoly::var(n, 2);
        let r2 = x.pow(2).add(&y.pow(2));
        let f = t.mul(&r2);
        let p = f.mul(&x.add(&MPoly::one(n))).add(&y);
        let (q, r) = p.div_rem(&f);
        assert_eq!(q.mul(&f).add(&r), p);
        assert_eq!(r, y);
    }
}
