//! Endomorphisms of a `Z/2`-graded bundle with form-valued entries.
//!
//! An element `α ⊗ E_ik` is stored as the entry `α` at `(i, k)`; products
//! carry the Koszul sign `(−1)^{(p_i + p_k)|β|}` when moving `E_ik` past `β`.

use super::form::Form;
use crate::scalar::{GaussQ, Q};

pub trait SuperEntry: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// `(−1)^{deg}` on homogeneous components.
    fn twist(&self) -> Self;
    fn scale_ratio(&self, n: i64, d: i64) -> Self;
    fn is_negligible(&self) -> bool;
}

impl SuperEntry for Form {
    fn zero_like(&self) -> Self {
        Form::zero(self.nvars, self.nodd)
    }
    fn one_like(&self) -> Self {
        Form::one(self.nvars, self.nodd)
    }
    fn add(&self, o: &Self) -> Self {
        Form::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        self.wedge(o)
    }
    fn twist(&self) -> Self {
        let mut r = self.zero_like();
        for (m, e) in &self.terms {
            r.add_term(*m, if m.count_ones() % 2 == 1 { e.neg() } else { e.clone() });
        }
        r
    }
    fn scale_ratio(&self, n: i64, d: i64) -> Self {
        self.scale(&GaussQ::real(Q::new(n.into(), d.into())))
    }
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuperMatrix<T> {
    pub n: usize,
    pub parity: Vec<u32>,
    pub e: Vec<T>,
}

impl<T: SuperEntry> SuperMatrix<T> {
    pub fn zero(parity: Vec<u32>, proto: &T) -> Self {
        let n = parity.len();
        SuperMatrix { n, parity, e: vec![proto.zero_like(); n * n] }
    }
    pub fn identity(parity: Vec<u32>, proto: &T) -> Self {
        let mut m = Self::zero(parity, proto);
        for i in 0..m.n {
            m.e[i * m.n + i] = proto.one_like();
        }
        m
    }
    pub fn get(&self, i: usize, k: usize) -> &T {
        &self.e[i * self.n + k]
    }
    pub fn set(&mut self, i: usize, k: usize, v: T) {
        self.e[i * self.n + k] = v;
    }
    pub fn map(&self, f: impl Fn(&T) -> T) -> Self {
        SuperMatrix { n: self.n, parity: self.parity.clone(), e: self.e.iter().map(f).collect() }
    }
    pub fn add(&self, o: &Self) -> Self {
        SuperMatrix { n: self.n, parity: self.parity.clone(), e: self.e.iter().zip(&o.e).map(|(a, b)| a.add(b)).collect() }
    }
    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n;
        let mut r = Self::zero(self.parity.clone(), &self.e[0]);
        for i in 0..n {
            for j in 0..n {
                let mut acc = self.e[0].zero_like();
                for k in 0..n {
                    let a = self.get(i, k);
                    let b = o.get(k, j);
                    let b = if (self.parity[i] + self.parity[k]) % 2 == 1 { b.twist() } else { b.clone() };
                    acc = acc.add(&a.mul(&b));
                }
                r.set(i, j, acc);
            }
        }
        r
    }
    /// `Σ_i (−1)^{p_i} M_ii`.
    pub fn supertrace(&self) -> T {
        let mut acc = self.e[0].zero_like();
        for i in 0..self.n {
            let d = self.get(i, i);
            acc = acc.add(&if self.parity[i] % 2 == 0 { d.clone() } else { d.scale_ratio(-1, 1) });
        }
        acc
    }
    /// `Σ_k M^k/k!`, truncating each power; stops once a power is negligible.
    pub fn exp(&self, trunc: impl Fn(&T) -> T, max_terms: usize) -> Self {
        let mut sum = Self::identity(self.parity.clone(), &self.e[0]);
        let mut term = sum.clone();
        for k in 1..=max_terms {
            term = term.mul(self).map(|x| trunc(x).scale_ratio(1, k as i64));
            if term.e.iter().all(|x| x.is_negligible()) {
                break;
            }
            sum = sum.add(&term);
        }
        sum
    }
}

/// Parities of the basis `e_I` of `ΛC^m`, `I` a bitmask.
pub fn exterior_parity(m: usize) -> Vec<u32> {
    (0..1u64 << m).map(|i| i.count_ones() % 2).collect()
}

/// Sign of `e_j ∧ e_I` (or of removing `e_j` from `e_I`) relative to the ordered basis.
pub fn insertion_sign(i: u64, j: usize) -> i64 {
    if (i & ((1u64 << j) - 1)).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}
