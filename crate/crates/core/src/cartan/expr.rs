//! Coefficient ring of the Cartan model on a chart: polynomials in the
//! coordinates, the equivariant parameters and the time `t`, times products
//! of formal transcendental atoms.

use crate::poly::MPoly;
use crate::scalar::GaussQ;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// `g^{(k)}(arg)` for the formal cutoff `g`: `g = 1` near 0, `g = 0` near ∞.
    Bump { arg: MPoly, k: u32 },
    /// `e^{−arg}`. At most one per monomial; products are merged.
    Gauss { arg: MPoly },
    /// `∫_0^∞ t^k e^{i t·arg} dt`, a generalized function of `arg`.
    Osc { arg: MPoly, k: u32 },
}

/// Sorted atoms with positive powers.
pub type Key = Vec<(Atom, u32)>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Expr {
    pub nvars: usize,
    pub terms: BTreeMap<Key, MPoly>,
}

fn key_mul(a: &Key, b: &Key) -> Key {
    let mut m: BTreeMap<Atom, u32> = BTreeMap::new();
    let mut gauss: Option<MPoly> = None;
    for (atom, p) in a.iter().chain(b) {
        match atom {
            Atom::Gauss { arg } => {
                let s = arg.scale(&GaussQ::int(*p as i64));
                gauss = Some(match gauss {
                    None => s,
                    Some(g) => g.add(&s),
                });
            }
            _ => *m.entry(atom.clone()).or_insert(0) += p,
        }
    }
    if let Some(g) = gauss {
        if !g.is_zero() {
            m.insert(Atom::Gauss { arg: g }, 1);
        }
    }
    m.into_iter().collect()
}

impl Expr {
    pub fn zero(nvars: usize) -> Self {
        Expr { nvars, terms: BTreeMap::new() }
    }
    pub fn poly(p: MPoly) -> Self {
        let mut e = Self::zero(p.nvars);
        e.add_term(vec![], p);
        e
    }
    pub fn constant(nvars: usize, c: GaussQ) -> Self {
        Self::poly(MPoly::constant(nvars, c))
    }
    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, GaussQ::one())
    }
    pub fn var(nvars: usize, k: usize) -> Self {
        Self::poly(MPoly::var(nvars, k))
    }
    pub fn atom(nvars: usize, a: Atom) -> Self {
        let mut e = Self::zero(nvars);
        e.add_term(vec![(a, 1)], MPoly::one(nvars));
        e
    }
    pub fn bump(arg: MPoly, k: u32) -> Self {
        Self::atom(arg.nvars, Atom::Bump { arg, k })
    }
    pub fn gauss(arg: MPoly) -> Self {
        if arg.is_zero() {
            return Self::one(arg.nvars);
        }
        Self::atom(arg.nvars, Atom::Gauss { arg })
    }
    pub fn osc(arg: MPoly, k: u32) -> Self {
        Self::atom(arg.nvars, Atom::Osc { arg, k })
    }

    pub fn add_term(&mut self, key: Key, p: MPoly) {
        if p.is_zero() {
            return;
        }
        let e = self.terms.entry(key.clone()).or_insert_with(|| MPoly::zero(p.nvars));
        *e = e.add(&p);
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn add(&self, o: &Expr) -> Expr {
        let mut r = self.clone();
        for (k, p) in &o.terms {
            r.add_term(k.clone(), p.clone());
        }
        r
    }
    pub fn neg(&self) -> Expr {
        self.scale(&GaussQ::int(-1))
    }
    pub fn sub(&self, o: &Expr) -> Expr {
        self.add(&o.neg())
    }
    pub fn scale(&self, c: &GaussQ) -> Expr {
        let mut r = Expr::zero(self.nvars);
        for (k, p) in &self.terms {
            r.add_term(k.clone(), p.scale(c));
        }
        r
    }
    pub fn mul_poly(&self, q: &MPoly) -> Expr {
        let mut r = Expr::zero(self.nvars);
        for (k, p) in &self.terms {
            r.add_term(k.clone(), p.mul(q));
        }
        r
    }
    pub fn mul(&self, o: &Expr) -> Expr {
        let mut r = Expr::zero(self.nvars);
        for (k1, p1) in &self.terms {
            for (k2, p2) in &o.terms {
                r.add_term(key_mul(k1, k2), p1.mul(p2));
            }
        }
        r
    }
    /// The polynomial part, if there are no atoms.
    pub fn as_poly(&self) -> Option<MPoly> {
        match self.terms.len() {
            0 => Some(MPoly::zero(self.nvars)),
            1 => self.terms.get(&vec![]).cloned(),
            _ => None,
        }
    }

    /// `∂/∂v`, with the chain rule on atoms.
    pub fn derivative(&self, v: usize) -> Expr {
        let mut r = Expr::zero(self.nvars);
        for (key, p) in &self.terms {
            r.add_term(key.clone(), p.derivative(v));
            for (idx, (atom, pow)) in key.iter().enumerate() {
                let (arg, new_atom, c) = match atom {
                    Atom::Bump { arg, k } => (arg, Atom::Bump { arg: arg.clone(), k: k + 1 }, GaussQ::one()),
                    Atom::Gauss { arg } => (arg, atom.clone(), GaussQ::int(-1)),
                    Atom::Osc { arg, k } => (arg, Atom::Osc { arg: arg.clone(), k: k + 1 }, GaussQ::i()),
                };
                let da = arg.derivative(v);
                if da.is_zero() {
                    continue;
                }
                let mut rest: Key = key.clone();
                if *pow == 1 {
                    rest.remove(idx);
                } else {
                    rest[idx].1 -= 1;
                }
                let nk = key_mul(&rest, &vec![(new_atom, 1)]);
                r.add_term(nk, p.mul(&da).scale(&(c * GaussQ::int(*pow as i64))));
            }
        }
        r
    }

    /// Drop monomials whose total degree in `vars` exceeds `order`.
    pub fn truncate(&self, vars: &[usize], order: u32) -> Expr {
        let mut r = Expr::zero(self.nvars);
        for (k, p) in &self.terms {
            let mut q = MPoly::zero(self.nvars);
            for (e, c) in &p.terms {
                if vars.iter().map(|&v| e[v]).sum::<u32>() <= order {
                    q.add_term(e.clone(), c.clone());
                }
            }
            r.add_term(k.clone(), q);
        }
        r
    }

    /// Normal form under `arg·Osc(arg, 0) = i` and
    /// `arg·Osc(arg, k) = i k·Osc(arg, k−1)`.
    pub fn reduce_osc(&self) -> Expr {
        let mut cur = self.clone();
        loop {
            let mut next = Expr::zero(self.nvars);
            let mut changed = false;
            for (key, p) in &cur.terms {
                let pos = key.iter().position(|(a, pw)| matches!(a, Atom::Osc { .. }) && *pw == 1);
                let Some(pos) = pos else {
                    next.add_term(key.clone(), p.clone());
                    continue;
                };
                let Atom::Osc { arg, k } = &key[pos].0 else { unreachable!() };
                let (q, rem) = p.div_rem(arg);
                next.add_term(key.clone(), rem);
                if q.is_zero() {
                    continue;
                }
                changed = true;
                let mut rest = key.clone();
                rest.remove(pos);
                if *k == 0 {
                    next.add_term(rest, q.scale(&GaussQ::i()));
                } else {
                    let nk = key_mul(&rest, &vec![(Atom::Osc { arg: arg.clone(), k: k - 1 }, 1)]);
                    next.add_term(nk, q.scale(&(GaussQ::i() * GaussQ::int(*k as i64))));
                }
            }
            cur = next;
            if !changed {
                return cur;
            }
        }
    }

    /// Substitute a polynomial for variable `v`, inside atoms too.
    pub fn substitute(&self, v: usize, by: &MPoly) -> Expr {
        let mut r = Expr::zero(self.nvars);
        for (key, p) in &self.terms {
            let mut nk: Key = vec![];
            for (a, pw) in key {
                let a2 = match a {
                    Atom::Bump { arg, k } => Atom::Bump { arg: arg.substitute(v, by), k: *k },
                    Atom::Gauss { arg } => Atom::Gauss { arg: arg.substitute(v, by) },
                    Atom::Osc { arg, k } => Atom::Osc { arg: arg.substitute(v, by), k: *k },
                };
                nk = key_mul(&nk, &vec![(a2, *pw)]);
            }
            r.add_term(nk, p.substitute(v, by));
        }
        r
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = vec![];
        for (key, p) in &self.terms {
            let mut s = format!("[{}]", p.fmt_with(names));
            for (a, pw) in key {
                let body = match a {
                    Atom::Bump { arg, k } => format!("g{}({})", "'".repeat(*k as usize), arg.fmt_with(names)),
                    Atom::Gauss { arg } => format!("exp(-({}))", arg.fmt_with(names)),
                    Atom::Osc { arg, k } => format!("Osc{k}({})", arg.fmt_with(names)),
                };
                s.push('*');
                s.push_str(&body);
                if *pw > 1 {
                    s.push_str(&format!("^{pw}"));
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("v{i}")).collect();
        write!(f, "{}", self.fmt_with(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn osc_reduction() {
        // arg = x·X in two variables; x·X·Osc0 = i, x·X·Osc1 = i·Osc0.
        let arg = MPoly::var(2, 0).mul(&MPoly::var(2, 1));
        let e = Expr::osc(arg.clone(), 0).mul_poly(&arg);
        assert_eq!(e.reduce_osc(), Expr::constant(2, GaussQ::i()));
        let e1 = Expr::osc(arg.clone(), 1).mul_poly(&arg.pow(2));
        assert_eq!(e1.reduce_osc(), Expr::constant(2, GaussQ::int(-1)));
    }

    #[test]
    fn gauss_atoms_merge() {
        let a = Expr::gauss(MPoly::var(1, 0));
        let b = a.mul(&a);
        assert_eq!(b, Expr::gauss(MPoly::var(1, 0).scale(&GaussQ::int(2))));
        let d = b.derivative(0);
        assert_eq!(d, b.scale(&GaussQ::int(-2)));
    }
}
