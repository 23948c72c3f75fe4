//! Invariant generalized functions on `T^n × Π Z/N_j`, stored as closed-form
//! generators whose Fourier coefficients add up.

use super::density::{Comb, GeneralizedDensity};
use super::group::{window, GroupDescriptor, Weight};
use super::trigpoly::TrigPolynomial;
use crate::error::{IndexError, Result};
use crate::poly::{MPoly, UPoly};
use crate::scalar::{GaussQ, Q};
use num::{One, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub enum Part {
    /// Finitely many coefficients.
    Atoms(BTreeMap<Weight, GaussQ>),
    /// `Σ_{n≥0} p(n) z^{offset + n·step}`; the torus part of `step` is nonzero.
    Ray { offset: Weight, step: Weight, poly: UPoly },
    /// `Σ_k p(k) z^k` over the full lattice; `p = 1` is the delta distribution
    /// at the identity (times the Haar volume).
    Lattice(MPoly),
    /// External product of distributions on the factor groups.
    Tensor(Vec<FourierDistribution>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FourierDistribution {
    pub group: GroupDescriptor,
    pub parts: Vec<Part>,
}

impl FourierDistribution {
    pub fn zero(g: &GroupDescriptor) -> Self {
        FourierDistribution { group: g.clone(), parts: vec![] }
    }
    pub fn delta(g: &GroupDescriptor) -> Self {
        Self::lattice(g, MPoly::one(g.rank))
    }
    pub fn lattice(g: &GroupDescriptor, p: MPoly) -> Self {
        FourierDistribution { group: g.clone(), parts: vec![Part::Lattice(p)] }.simplify()
    }
    pub fn constant(g: &GroupDescriptor, c: GaussQ) -> Self {
        Self::atoms(g, [(Weight::zero(g), c)])
    }
    pub fn atoms(g: &GroupDescriptor, items: impl IntoIterator<Item = (Weight, GaussQ)>) -> Self {
        let mut m = BTreeMap::new();
        for (w, c) in items {
            add_atom(&mut m, w, c, g);
        }
        FourierDistribution { group: g.clone(), parts: vec![Part::Atoms(m)] }.simplify()
    }
    pub fn ray(g: &GroupDescriptor, offset: Weight, step: Weight, poly: UPoly) -> Result<Self> {
        offset.check(g)?;
        step.check(g)?;
        if step.torus_is_zero() {
            return Err(IndexError::InvalidWeight("ray step must have a nonzero torus part".into()));
        }
        Ok(FourierDistribution { group: g.clone(), parts: vec![Part::Ray { offset, step, poly }] }.simplify())
    }
    /// `-Σ_{n≥1} z^{a n}` on the circle.
    pub fn atiyah(a: i64) -> Self {
        let g = GroupDescriptor::torus(1);
        Self::ray(&g, Weight::scalar(a), Weight::scalar(a), UPoly::constant(GaussQ::int(-1))).expect("nonzero step")
    }
    pub fn from_trigpoly(p: &TrigPolynomial) -> Self {
        Self::atoms(&p.group, p.terms.iter().map(|(w, c)| (w.clone(), c.clone())))
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn coeff(&self, k: &Weight) -> Result<GaussQ> {
        k.check(&self.group)?;
        Ok(self.coeff_unchecked(k))
    }

    fn coeff_unchecked(&self, k: &Weight) -> GaussQ {
        let mut acc = GaussQ::zero();
        for p in &self.parts {
            match p {
                Part::Atoms(m) => {
                    if let Some(c) = m.get(k) {
                        acc += c;
                    }
                }
                Part::Ray { offset, step, poly } => {
                    if let Some(n) = ray_index(offset, step, k, &self.group) {
                        acc += poly.eval(&GaussQ::int(n));
                    }
                }
                Part::Lattice(p) => {
                    let x: Vec<GaussQ> = k.torus.iter().map(|&a| GaussQ::int(a)).collect();
                    acc += p.eval(&x);
                }
                Part::Tensor(fs) => {
                    let mut rest = k.clone();
                    let mut prod = GaussQ::one();
                    for f in fs {
                        let (a, b) = rest.split(&f.group);
                        prod = &prod * &f.coeff_unchecked(&a);
                        rest = b;
                        if prod.is_zero() {
                            break;
                        }
                    }
                    acc += prod;
                }
            }
        }
        acc
    }

    /// Nonzero coefficients on the window `|k| ≤ r`.
    pub fn coefficients(&self, r: i64) -> Vec<(Weight, GaussQ)> {
        window(&self.group, r)
            .into_iter()
            .map(|k| {
                let c = self.coeff_unchecked(&k);
                (k, c)
            })
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    pub fn add(&self, o: &FourierDistribution) -> Result<FourierDistribution> {
        same_group(&self.group, &o.group)?;
        let mut parts = self.parts.clone();
        parts.extend(o.parts.iter().cloned());
        Ok(FourierDistribution { group: self.group.clone(), parts }.simplify())
    }

    pub fn scale(&self, c: &GaussQ) -> FourierDistribution {
        if c.is_zero() {
            return Self::zero(&self.group);
        }
        let parts = self
            .parts
            .iter()
            .map(|p| match p {
                Part::Atoms(m) => Part::Atoms(m.iter().map(|(w, x)| (w.clone(), x * c)).collect()),
                Part::Ray { offset, step, poly } => Part::Ray { offset: offset.clone(), step: step.clone(), poly: poly.scale(c) },
                Part::Lattice(p) => Part::Lattice(p.scale(c)),
                Part::Tensor(fs) => {
                    let mut fs = fs.clone();
                    fs[0] = fs[0].scale(c);
                    Part::Tensor(fs)
                }
            })
            .collect();
        FourierDistribution { group: self.group.clone(), parts }.simplify()
    }

    pub fn neg(&self) -> FourierDistribution {
        self.scale(&GaussQ::int(-1))
    }

    /// Multiply by `c·z^w`.
    pub fn shift(&self, w: &Weight, c: &GaussQ) -> FourierDistribution {
        let g = &self.group;
        let parts = self
            .parts
            .iter()
            .map(|p| match p {
                Part::Atoms(m) => Part::Atoms(m.iter().map(|(k, x)| (k.add(w, g), x * c)).collect()),
                Part::Ray { offset, step, poly } => Part::Ray { offset: offset.add(w, g), step: step.clone(), poly: poly.scale(c) },
                Part::Lattice(p) => {
                    // Σ p(k) z^{k+w} = Σ p(k-w) z^k
                    let mut q = p.clone();
                    for (j, &wj) in w.torus.iter().enumerate() {
                        let sub = MPoly::var(g.rank, j).sub(&MPoly::constant(g.rank, GaussQ::int(wj)));
                        q = q.substitute(j, &sub);
                    }
                    Part::Lattice(q.scale(c))
                }
                Part::Tensor(fs) => {
                    let mut rest = w.clone();
                    let mut out = vec![];
                    for (i, f) in fs.iter().enumerate() {
                        let (a, b) = rest.split(&f.group);
                        let ci = if i == 0 { c.clone() } else { GaussQ::one() };
                        out.push(f.shift(&a, &ci));
                        rest = b;
                    }
                    Part::Tensor(out)
                }
            })
            .collect();
        FourierDistribution { group: g.clone(), parts }.simplify()
    }

    pub fn mul_by_trigpoly(&self, p: &TrigPolynomial) -> Result<FourierDistribution> {
        same_group(&self.group, &p.group)?;
        let mut parts = vec![];
        for (w, c) in &p.terms {
            parts.extend(self.shift(w, c).parts);
        }
        Ok(FourierDistribution { group: self.group.clone(), parts }.simplify())
    }

    /// Distribution on the product group with `c(k₁,k₂) = c₁(k₁)·c₂(k₂)`.
    pub fn external_product(&self, o: &FourierDistribution) -> FourierDistribution {
        let g = self.group.product(&o.group);
        let mut parts = vec![];
        for p in &self.parts {
            for q in &o.parts {
                parts.push(part_product(&self.group, p, &o.group, q));
            }
        }
        FourierDistribution { group: g, parts }.simplify()
    }

    /// Bring generators to a canonical shape: one atom table, one lattice
    /// polynomial, merged rays, simplified tensor factors.
    pub fn simplify(&self) -> FourierDistribution {
        let g = &self.group;
        let mut atoms: BTreeMap<Weight, GaussQ> = BTreeMap::new();
        let mut lattice = MPoly::zero(g.rank);
        let mut rays: Vec<(Weight, Weight, UPoly)> = vec![];
        let mut tensors: Vec<Vec<FourierDistribution>> = vec![];
        let mut queue: Vec<Part> = self.parts.clone();
        while let Some(p) = queue.pop() {
            match p {
                Part::Atoms(m) => {
                    for (w, c) in m {
                        add_atom(&mut atoms, w, c, g);
                    }
                }
                Part::Lattice(p) => lattice = lattice.add(&p),
                Part::Ray { offset, step, poly } => {
                    if !poly.is_zero() {
                        rays.push((offset, step, poly));
                    }
                }
                Part::Tensor(fs) => {
                    let fs: Vec<FourierDistribution> = fs.iter().map(|f| f.simplify()).collect();
                    if fs.iter().any(|f| f.is_zero()) {
                        continue;
                    }
                    if fs.len() == 1 {
                        queue.extend(fs[0].parts.clone());
                        continue;
                    }
                    // Distribute over multi-part factors so that each tensor
                    // carries single-part factors.
                    if let Some(i) = fs.iter().position(|f| f.parts.len() > 1) {
                        for p in &fs[i].parts {
                            let mut copy = fs.clone();
                            copy[i] = FourierDistribution { group: fs[i].group.clone(), parts: vec![p.clone()] };
                            queue.push(Part::Tensor(copy));
                        }
                        continue;
                    }
                    if let Some(p) = collapse_tensor(&fs) {
                        queue.push(p);
                    } else {
                        tensors.push(fs);
                    }
                }
            }
        }
        merge_rays(&mut rays, &mut atoms, g);
        atoms.retain(|_, c| !c.is_zero());
        let mut parts = vec![];
        if !atoms.is_empty() {
            parts.push(Part::Atoms(atoms));
        }
        if !lattice.is_zero() {
            parts.push(Part::Lattice(lattice));
        }
        rays.sort_by(|a, b| (&a.1, &a.0).cmp(&(&b.1, &b.0)));
        for (offset, step, poly) in rays {
            parts.push(Part::Ray { offset, step, poly });
        }
        for fs in tensors {
            parts.push(Part::Tensor(fs));
        }
        FourierDistribution { group: g.clone(), parts }
    }

    /// Degree `N` of a polynomial bound on the coefficients implied by the
    /// generators.
    pub fn degree_bound(&self) -> u32 {
        self.parts
            .iter()
            .map(|p| match p {
                Part::Atoms(_) => 0,
                Part::Ray { poly, .. } => poly.degree().unwrap_or(0) as u32,
                Part::Lattice(p) => p.total_degree().unwrap_or(0),
                Part::Tensor(fs) => fs.iter().map(|f| f.degree_bound()).sum(),
            })
            .max()
            .unwrap_or(0)
    }

    /// `|coeff(k)| ≤ C(1+|k|)^N` on the probe window, and the symbolic tails
    /// have degree at most `N`.
    pub fn check_growth(&self, c: &Q, n: u32, probe_radius: i64) -> bool {
        if self.degree_bound() > n {
            return false;
        }
        let c2 = c * c;
        window(&self.group, probe_radius).into_iter().all(|k| {
            let v = self.coeff_unchecked(&k).norm_sqr();
            let base = Q::from_integer((1 + k.norm()).into());
            let mut bound = c2.clone();
            for _ in 0..(2 * n) {
                bound *= &base;
            }
            v <= bound
        })
    }

    /// Density on the Lie algebra of the circle whose Fourier transform is
    /// `θ ↦ Θ(e^{iθ})`: the comb `Σ_k c_k δ_k`.
    pub fn to_density_germ(&self) -> Result<GeneralizedDensity> {
        if self.group.rank != 1 || !self.group.cyclic.is_empty() {
            return Err(IndexError::GroupMismatch(format!("density germs need the circle group, got {}", self.group)));
        }
        let mut out = GeneralizedDensity::zero();
        for p in &self.parts {
            match p {
                Part::Atoms(m) => {
                    for (w, c) in m {
                        out.add_atom(Q::from_integer(w.torus[0].into()), c.clone());
                    }
                }
                Part::Ray { offset, step, poly } => {
                    let d = step.torus[0];
                    out.combs.push(Comb {
                        anchor: Q::from_integer(offset.torus[0].into()),
                        spacing: Q::from_integer(d.abs().into()),
                        start: 0,
                        dir: d.signum() as i8,
                        mass: poly.clone(),
                    });
                }
                Part::Lattice(p) => {
                    let up = mpoly_to_upoly(p);
                    out.combs.push(Comb { anchor: Q::zero(), spacing: Q::one(), start: 0, dir: 1, mass: up.clone() });
                    out.combs.push(Comb {
                        anchor: Q::zero(),
                        spacing: Q::one(),
                        start: 1,
                        dir: -1,
                        mass: up.compose_affine(&GaussQ::int(-1), &GaussQ::zero()),
                    });
                }
                Part::Tensor(_) => unreachable!("rank-1 distributions have no tensor parts"),
            }
        }
        Ok(out.canonical())
    }
}

impl FourierDistribution {
    /// Read a density with integer support back as a distribution on the
    /// circle: integer atoms, integer combs, and polynomials on the whole
    /// line (which agree with their lattice sums on the validity window).
    pub fn from_density(u: &GeneralizedDensity) -> Result<FourierDistribution> {
        let g = GroupDescriptor::torus(1);
        let to_int = |x: &Q| -> Result<i64> {
            if !x.is_integer() {
                return Err(IndexError::NotRepresentable(format!("support point {} is not an integer", crate::scalar::fmt_q(x))));
            }
            x.to_integer().try_into().map_err(|_| IndexError::NotRepresentable("support point too large".into()))
        };
        let mut parts = vec![];
        let mut atoms = BTreeMap::new();
        for (x, m) in &u.atoms {
            add_atom(&mut atoms, Weight::scalar(to_int(x)?), m.clone(), &g);
        }
        parts.push(Part::Atoms(atoms));
        for c in &u.combs {
            let d = to_int(&c.spacing)? * c.dir as i64;
            let o = to_int(&c.position(c.start))?;
            parts.push(Part::Ray { offset: Weight::scalar(o), step: Weight::scalar(d), poly: c.mass.shift(&GaussQ::int(c.start)) });
        }
        for p in &u.pieces {
            if p.lo.is_some() || p.hi.is_some() {
                return Err(IndexError::NotRepresentable("density is not a comb or a polynomial on the whole line".into()));
            }
            parts.push(Part::Lattice(upoly_to_mpoly(&p.poly)));
        }
        Ok(FourierDistribution { group: g, parts }.simplify())
    }
}

pub fn mpoly_to_upoly(p: &MPoly) -> UPoly {
    let deg = p.degree_in(0) as usize;
    let mut c = vec![GaussQ::zero(); deg + 1];
    for (e, x) in &p.terms {
        c[e[0] as usize] += x;
    }
    UPoly::new(c)
}

pub fn upoly_to_mpoly(p: &UPoly) -> MPoly {
    let mut m = MPoly::zero(1);
    for (k, c) in p.0.iter().enumerate() {
        m.add_term(vec![k as u32], c.clone());
    }
    m
}

fn same_group(a: &GroupDescriptor, b: &GroupDescriptor) -> Result<()> {
    if a != b {
        return Err(IndexError::GroupMismatch(format!("{a} vs {b}")));
    }
    Ok(())
}

fn add_atom(m: &mut BTreeMap<Weight, GaussQ>, w: Weight, c: GaussQ, _g: &GroupDescriptor) {
    let e = m.entry(w.clone()).or_default();
    *e += &c;
    if e.is_zero() {
        m.remove(&w);
    }
}

/// `n ≥ 0` with `offset + n·step = k`, if any.
pub fn ray_index(offset: &Weight, step: &Weight, k: &Weight, g: &GroupDescriptor) -> Option<i64> {
    let j = step.torus.iter().position(|&s| s != 0)?;
    let diff = k.torus[j] - offset.torus[j];
    if diff % step.torus[j] != 0 {
        return None;
    }
    let n = diff / step.torus[j];
    if n < 0 {
        return None;
    }
    (offset.add(&step.scale(n, g), g) == *k).then_some(n)
}

fn merge_rays(rays: &mut Vec<(Weight, Weight, UPoly)>, atoms: &mut BTreeMap<Weight, GaussQ>, g: &GroupDescriptor) {
    'outer: loop {
        for i in 0..rays.len() {
            for j in 0..rays.len() {
                if i == j || rays[i].1 != rays[j].1 {
                    continue;
                }
                let (o1, step, p1) = rays[i].clone();
                let (o2, _, p2) = rays[j].clone();
                let Some(m) = ray_index(&o1, &step, &o2, g) else { continue };
                // p1(n) + [n ≥ m] p2(n - m), written as one ray plus the
                // correction atoms for n < m.
                let p2s = p2.shift(&GaussQ::int(-m));
                for n in 0..m {
                    let w = o1.add(&step.scale(n, g), g);
                    add_atom(atoms, w, -p2s.eval(&GaussQ::int(n)), g);
                }
                let merged = p1.add(&p2s);
                let (hi, lo) = if i > j { (i, j) } else { (j, i) };
                rays.remove(hi);
                rays.remove(lo);
                if !merged.is_zero() {
                    rays.push((o1, step, merged));
                }
                continue 'outer;
            }
        }
        break;
    }
    // Absorb atoms sitting on the lattice points just before a ray so that
    // equal distributions share one shape.
    for r in rays.iter_mut() {
        loop {
            let prev = r.0.sub(&r.1, g);
            let want = r.2.eval(&GaussQ::int(-1));
            match atoms.get(&prev) {
                Some(c) if *c == want => {
                    atoms.remove(&prev);
                    r.2 = r.2.shift(&GaussQ::int(-1));
                    r.0 = prev;
                }
                _ => break,
            }
        }
    }
}

fn part_product(g1: &GroupDescriptor, p: &Part, g2: &GroupDescriptor, q: &Part) -> Part {
    match (p, q) {
        (Part::Atoms(a), Part::Atoms(b)) => {
            let mut m = BTreeMap::new();
            for (w1, c1) in a {
                for (w2, c2) in b {
                    m.insert(w1.concat(w2), c1 * c2);
                }
            }
            Part::Atoms(m)
        }
        (Part::Lattice(a), Part::Lattice(b)) => {
            let n = g1.rank + g2.rank;
            let ma: Vec<usize> = (0..g1.rank).collect();
            let mb: Vec<usize> = (g1.rank..n).collect();
            Part::Lattice(a.remap(n, &ma).mul(&b.remap(n, &mb)))
        }
        _ => {
            let mut fs = vec![];
            for (g, part) in [(g1, p), (g2, q)] {
                match part {
                    Part::Tensor(inner) => fs.extend(inner.iter().cloned()),
                    _ => fs.push(FourierDistribution { group: g.clone(), parts: vec![part.clone()] }),
                }
            }
            Part::Tensor(fs)
        }
    }
}

/// Rewrite a tensor of single-part factors as a plain part when the factors
/// are all atoms or all lattices.
fn collapse_tensor(fs: &[FourierDistribution]) -> Option<Part> {
    let mut acc = fs[0].clone();
    for f in &fs[1..] {
        match (&acc.parts[0], &f.parts[0]) {
            (Part::Atoms(_), Part::Atoms(_)) | (Part::Lattice(_), Part::Lattice(_)) => {
                let p = part_product(&acc.group, &acc.parts[0], &f.group, &f.parts[0]);
                acc = FourierDistribution { group: acc.group.product(&f.group), parts: vec![p] };
            }
            _ => return None,
        }
    }
    Some(acc.parts[0].clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s1() -> GroupDescriptor {
        GroupDescriptor::torus(1)
    }

    #[test]
    fn atiyah_coefficients() {
        let a = FourierDistribution::atiyah(1);
        assert_eq!(a.coeff(&Weight::scalar(5)).unwrap(), GaussQ::int(-1));
        assert_eq!(a.coeff(&Weight::scalar(0)).unwrap(), GaussQ::zero());
        assert!(a.coeff(&Weight::torus(vec![1, 2])).is_err());
    }

    #[test]
    fn one_minus_z_times_atiyah_is_single_atom() {
        let g = s1();
        let p = TrigPolynomial::one(&g).add(&TrigPolynomial::monomial(&g, Weight::scalar(1), GaussQ::int(-1)));
        let r = FourierDistribution::atiyah(1).mul_by_trigpoly(&p).unwrap();
        assert_eq!(r, FourierDistribution::atoms(&g, [(Weight::scalar(1), GaussQ::int(-1))]));
    }

    #[test]
    fn delta_annihilated_by_z_minus_one() {
        let g = s1();
        let p = TrigPolynomial::monomial(&g, Weight::scalar(1), GaussQ::one()).add(&TrigPolynomial::monomial(
            &g,
            Weight::scalar(0),
            GaussQ::int(-1),
        ));
        assert!(FourierDistribution::delta(&g).mul_by_trigpoly(&p).unwrap().is_zero());
    }

    #[test]
    fn delta_tensor_delta_is_delta() {
        let g = s1();
        let d = FourierDistribution::delta(&g).external_product(&FourierDistribution::delta(&g));
        assert_eq!(d, FourierDistribution::delta(&GroupDescriptor::torus(2)));
    }

    #[test]
    fn growth_of_quadratic_ray() {
        let g = s1();
        let r = FourierDistribution::ray(&g, Weight::scalar(0), Weight::scalar(1), UPoly::from_ints(&[0, 0, 1])).unwrap();
        assert!(r.check_growth(&Q::one(), 2, 64));
        assert!(!r.check_growth(&Q::one(), 1, 64));
    }
}
