//! Groups `T^n × Π Z/N_j`, their weight lattices and rational group elements.

use crate::ball::Ball;
use crate::error::{IndexError, Result};
use crate::scalar::{fmt_q, parse_q, q, GaussQ, Q};
use num::{Integer, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub rank: usize,
    #[serde(default)]
    pub cyclic: Vec<u64>,
}

impl GroupDescriptor {
    pub fn torus(rank: usize) -> Self {
        GroupDescriptor { rank, cyclic: vec![] }
    }
    pub fn cyclic_group(n: u64) -> Self {
        GroupDescriptor { rank: 0, cyclic: vec![n] }
    }
    pub fn trivial() -> Self {
        GroupDescriptor { rank: 0, cyclic: vec![] }
    }
    pub fn product(&self, o: &GroupDescriptor) -> GroupDescriptor {
        GroupDescriptor {
            rank: self.rank + o.rank,
            cyclic: self.cyclic.iter().chain(&o.cyclic).copied().collect(),
        }
    }
    pub fn validate(&self) -> Result<()> {
        if self.cyclic.iter().any(|&n| n < 2) {
            return Err(IndexError::Invalid("cyclic orders must be at least 2".into()));
        }
        Ok(())
    }
    /// Length of a flattened weight vector.
    pub fn weight_len(&self) -> usize {
        self.rank + self.cyclic.len()
    }
    pub fn identity(&self) -> GroupElement {
        GroupElement { torus: vec![Q::zero(); self.rank], cyclic: vec![0; self.cyclic.len()], orders: self.cyclic.clone() }
    }
    /// The element with every torus angle equal to `turn`, and cyclic parts
    /// `turn·N` when that is an integer.
    pub fn diagonal(&self, turn: &Q) -> Option<GroupElement> {
        let mut cyc = vec![];
        for &n in &self.cyclic {
            let r = turn * Q::from_integer(n.into());
            if !r.is_integer() {
                return None;
            }
            let r = r.to_integer().mod_floor(&(n as i64).into());
            cyc.push(u64::try_from(r).ok()?);
        }
        Some(GroupElement { torus: vec![turn.clone(); self.rank], cyclic: cyc, orders: self.cyclic.clone() })
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![];
        if self.rank > 0 {
            parts.push(if self.rank == 1 { "S1".to_string() } else { format!("T{}", self.rank) });
        }
        for n in &self.cyclic {
            parts.push(format!("Z{n}"));
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        write!(f, "{}", parts.join("×"))
    }
}

/// Character label: integer torus components and cyclic residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    pub torus: Vec<i64>,
    pub cyclic: Vec<u64>,
}

impl Weight {
    pub fn new(g: &GroupDescriptor, torus: Vec<i64>, cyclic: Vec<i64>) -> Result<Self> {
        if torus.len() != g.rank || cyclic.len() != g.cyclic.len() {
            return Err(IndexError::InvalidWeight(format!(
                "expected {} torus and {} cyclic components, got {} and {}",
                g.rank,
                g.cyclic.len(),
                torus.len(),
                cyclic.len()
            )));
        }
        let cyclic = cyclic.iter().zip(&g.cyclic).map(|(&c, &n)| c.rem_euclid(n as i64) as u64).collect();
        Ok(Weight { torus, cyclic })
    }
    pub fn torus(k: Vec<i64>) -> Self {
        Weight { torus: k, cyclic: vec![] }
    }
    pub fn scalar(k: i64) -> Self {
        Weight { torus: vec![k], cyclic: vec![] }
    }
    pub fn zero(g: &GroupDescriptor) -> Self {
        Weight { torus: vec![0; g.rank], cyclic: vec![0; g.cyclic.len()] }
    }
    /// Parse a flattened vector (torus components, then cyclic residues).
    pub fn from_flat(g: &GroupDescriptor, flat: &[i64]) -> Result<Self> {
        if flat.len() != g.weight_len() {
            return Err(IndexError::InvalidWeight(format!("expected {} components, got {}", g.weight_len(), flat.len())));
        }
        Weight::new(g, flat[..g.rank].to_vec(), flat[g.rank..].to_vec())
    }
    pub fn flat(&self) -> Vec<i64> {
        self.torus.iter().copied().chain(self.cyclic.iter().map(|&c| c as i64)).collect()
    }
    pub fn check(&self, g: &GroupDescriptor) -> Result<()> {
        if self.torus.len() != g.rank || self.cyclic.len() != g.cyclic.len() {
            return Err(IndexError::InvalidWeight(format!("weight {self} does not fit group {g}")));
        }
        if self.cyclic.iter().zip(&g.cyclic).any(|(c, n)| c >= n) {
            return Err(IndexError::InvalidWeight(format!("residues of {self} not reduced for {g}")));
        }
        Ok(())
    }
    pub fn add(&self, o: &Weight, g: &GroupDescriptor) -> Weight {
        Weight {
            torus: self.torus.iter().zip(&o.torus).map(|(a, b)| a + b).collect(),
            cyclic: self.cyclic.iter().zip(&o.cyclic).zip(&g.cyclic).map(|((a, b), n)| (a + b) % n).collect(),
        }
    }
    pub fn neg(&self, g: &GroupDescriptor) -> Weight {
        Weight {
            torus: self.torus.iter().map(|a| -a).collect(),
            cyclic: self.cyclic.iter().zip(&g.cyclic).map(|(a, n)| (n - a) % n).collect(),
        }
    }
    pub fn sub(&self, o: &Weight, g: &GroupDescriptor) -> Weight {
        self.add(&o.neg(g), g)
    }
    pub fn scale(&self, k: i64, g: &GroupDescriptor) -> Weight {
        Weight {
            torus: self.torus.iter().map(|a| a * k).collect(),
            cyclic: self
                .cyclic
                .iter()
                .zip(&g.cyclic)
                .map(|(a, n)| ((*a as i64 * k).rem_euclid(*n as i64)) as u64)
                .collect(),
        }
    }
    pub fn is_zero(&self) -> bool {
        self.torus.iter().all(|&a| a == 0) && self.cyclic.iter().all(|&a| a == 0)
    }
    pub fn torus_is_zero(&self) -> bool {
        self.torus.iter().all(|&a| a == 0)
    }
    /// Max-norm of the torus part.
    pub fn norm(&self) -> i64 {
        self.torus.iter().map(|a| a.abs()).max().unwrap_or(0)
    }
    pub fn concat(&self, o: &Weight) -> Weight {
        Weight {
            torus: self.torus.iter().chain(&o.torus).copied().collect(),
            cyclic: self.cyclic.iter().chain(&o.cyclic).copied().collect(),
        }
    }
    /// Split according to the first factor of a product group.
    pub fn split(&self, first: &GroupDescriptor) -> (Weight, Weight) {
        let (t1, t2) = self.torus.split_at(first.rank);
        let (c1, c2) = self.cyclic.split_at(first.cyclic.len());
        (Weight { torus: t1.to_vec(), cyclic: c1.to_vec() }, Weight { torus: t2.to_vec(), cyclic: c2.to_vec() })
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.flat().iter().map(|x| x.to_string()).collect();
        write!(f, "({})", v.join(","))
    }
}

/// Every weight with torus max-norm at most `r`, in lexicographic order.
pub fn window(g: &GroupDescriptor, r: i64) -> Vec<Weight> {
    let mut out = vec![Weight { torus: vec![], cyclic: vec![] }];
    for _ in 0..g.rank {
        let mut next = vec![];
        for w in &out {
            for k in -r..=r {
                let mut t = w.torus.clone();
                t.push(k);
                next.push(Weight { torus: t, cyclic: vec![] });
            }
        }
        out = next;
    }
    for &n in &g.cyclic {
        let mut next = vec![];
        for w in &out {
            for c in 0..n {
                let mut cy = w.cyclic.clone();
                cy.push(c);
                next.push(Weight { torus: w.torus.clone(), cyclic: cy });
            }
        }
        out = next;
    }
    out
}

/// Group element with rational rotation angles, measured in turns, so the
/// torus component `t` is `e^{2πi t}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub torus: Vec<Q>,
    pub cyclic: Vec<u64>,
    pub orders: Vec<u64>,
}

impl GroupElement {
    pub fn circle(turn: Q) -> Self {
        GroupElement { torus: vec![reduce_turn(&turn)], cyclic: vec![], orders: vec![] }
    }
    pub fn is_identity(&self) -> bool {
        self.torus.iter().all(|t| t.is_zero()) && self.cyclic.iter().all(|&c| c == 0)
    }
    pub fn torus_is_identity(&self) -> bool {
        self.torus.iter().all(|t| t.is_zero())
    }
    pub fn group(&self) -> GroupDescriptor {
        GroupDescriptor { rank: self.torus.len(), cyclic: self.orders.clone() }
    }
    /// Total phase of the character `k` at this element, in turns.
    pub fn phase(&self, k: &Weight) -> Q {
        let mut t = Q::zero();
        for (a, b) in self.torus.iter().zip(&k.torus) {
            t += a * Q::from_integer((*b).into());
        }
        for ((c, r), n) in k.cyclic.iter().zip(&self.cyclic).zip(&self.orders) {
            t += q((*c * *r) as i64, *n as i64);
        }
        reduce_turn(&t)
    }
    /// `χ_k(s)` exactly when the phase is a multiple of a quarter turn.
    pub fn character_exact(&self, k: &Weight) -> Option<GaussQ> {
        turn_exact(&self.phase(k))
    }
    pub fn character_ball(&self, k: &Weight) -> Ball {
        Ball::from_turn(&self.phase(k))
    }
    /// All characters at this element are Gaussian rationals.
    pub fn is_exact(&self) -> bool {
        let four = Q::from_integer(4.into());
        self.torus.iter().all(|t| (t * &four).is_integer())
            && self.cyclic.iter().zip(&self.orders).all(|(c, n)| (q(4 * *c as i64, *n as i64)).is_integer())
    }
    pub fn split(&self, first: &GroupDescriptor) -> (GroupElement, GroupElement) {
        let (t1, t2) = self.torus.split_at(first.rank);
        let (c1, c2) = self.cyclic.split_at(first.cyclic.len());
        let (o1, o2) = self.orders.split_at(first.cyclic.len());
        (
            GroupElement { torus: t1.to_vec(), cyclic: c1.to_vec(), orders: o1.to_vec() },
            GroupElement { torus: t2.to_vec(), cyclic: c2.to_vec(), orders: o2.to_vec() },
        )
    }
    pub fn concat(&self, o: &GroupElement) -> GroupElement {
        GroupElement {
            torus: self.torus.iter().chain(&o.torus).cloned().collect(),
            cyclic: self.cyclic.iter().chain(&o.cyclic).copied().collect(),
            orders: self.orders.iter().chain(&o.orders).copied().collect(),
        }
    }
    /// `s·e^{2πi δ}` on every torus component.
    pub fn rotate(&self, delta: &Q) -> GroupElement {
        let mut g = self.clone();
        for t in &mut g.torus {
            *t = reduce_turn(&(&*t + delta));
        }
        g
    }
    /// Parse `1`, `-1`, `i`, `-i` or `turn=p/q`, comma separated per torus
    /// component, followed by `c=r` entries for cyclic residues.
    pub fn parse(g: &GroupDescriptor, s: &str) -> Result<Self> {
        let mut torus = vec![];
        let mut cyclic = vec![];
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if let Some(r) = part.strip_prefix("c=") {
                let r: i64 = r.parse().map_err(|_| IndexError::Invalid(format!("bad cyclic residue `{part}`")))?;
                cyclic.push(r);
                continue;
            }
            let t = match part {
                "1" => Q::zero(),
                "-1" => q(1, 2),
                "i" => q(1, 4),
                "-i" => q(3, 4),
                _ => match part.strip_prefix("turn=") {
                    Some(v) => parse_q(v).map_err(|_| IndexError::Invalid(format!("point `{part}` is not a rational rotation")))?,
                    None => return Err(IndexError::Invalid(format!("point `{part}` is not a rational rotation"))),
                },
            };
            torus.push(reduce_turn(&t));
        }
        // A bare `-1` on a group with no torus means the generator of Z/2.
        if g.rank == 0 && torus.len() == 1 && cyclic.is_empty() && g.cyclic.len() == 1 {
            let r = &torus[0] * Q::from_integer((g.cyclic[0] as i64).into());
            if !r.is_integer() {
                return Err(IndexError::Invalid(format!("point `{s}` is not in the cyclic group")));
            }
            cyclic.push(r.to_integer().try_into().unwrap_or(0));
            torus.clear();
        }
        if torus.len() == 1 && g.rank > 1 {
            torus = vec![torus[0].clone(); g.rank];
        }
        if torus.len() != g.rank || cyclic.len() != g.cyclic.len() {
            return Err(IndexError::Invalid(format!("point `{s}` does not fit group {g}")));
        }
        let cyclic = cyclic.iter().zip(&g.cyclic).map(|(&r, &n)| r.rem_euclid(n as i64) as u64).collect();
        Ok(GroupElement { torus, cyclic, orders: g.cyclic.clone() })
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torus.iter().map(fmt_point).collect();
        for (c, n) in self.cyclic.iter().zip(&self.orders) {
            parts.push(format!("{c} mod {n}"));
        }
        if parts.is_empty() {
            parts.push("e".into());
        }
        write!(f, "{}", parts.join(","))
    }
}

fn fmt_point(t: &Q) -> String {
    if t.is_zero() {
        "1".into()
    } else if *t == q(1, 2) {
        "-1".into()
    } else if *t == q(1, 4) {
        "i".into()
    } else if *t == q(3, 4) {
        "-i".into()
    } else {
        format!("turn={}", fmt_q(t))
    }
}

/// Reduce a turn count to `[0, 1)`.
pub fn reduce_turn(t: &Q) -> Q {
    t - Q::from_integer(t.floor().to_integer())
}

/// `e^{2πi t}` when `4t` is an integer.
pub fn turn_exact(t: &Q) -> Option<GaussQ> {
    let four = t * Q::from_integer(4.into());
    if !four.is_integer() {
        return None;
    }
    let k: i64 = four.to_integer().mod_floor(&4.into()).try_into().ok()?;
    Some(GaussQ::i_pow(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_size() {
        let g = GroupDescriptor { rank: 2, cyclic: vec![3] };
        assert_eq!(window(&g, 2).len(), 25 * 3);
        assert_eq!(window(&GroupDescriptor::cyclic_group(2), 5).len(), 2);
    }

    #[test]
    fn parse_points() {
        let g = GroupDescriptor::torus(1);
        assert_eq!(GroupElement::parse(&g, "-1").unwrap().torus[0], q(1, 2));
        assert!(GroupElement::parse(&g, "0.3").is_err());
        let z2 = GroupDescriptor::cyclic_group(2);
        assert_eq!(GroupElement::parse(&z2, "-1").unwrap().cyclic, vec![1]);
    }

    #[test]
    fn exact_characters() {
        let g = GroupDescriptor::torus(1);
        let s = GroupElement::parse(&g, "i").unwrap();
        assert_eq!(s.character_exact(&Weight::scalar(3)), Some(-GaussQ::i()));
        let w = GroupElement::circle(q(1, 3));
        assert!(w.character_exact(&Weight::scalar(1)).is_none());
        assert!(w.character_exact(&Weight::scalar(3)).is_some());
    }
}
