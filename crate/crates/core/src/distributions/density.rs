//! Distributions on the Lie algebra `R` of the circle: Dirac atoms, one-sided
//! combs and piecewise-polynomial densities. Multiplying Fourier transforms
//! on the group side is convolution here.

use crate::error::{IndexError, Result};
use crate::poly::{interpolate_at_naturals, UPoly};
use crate::scalar::{fmt_q, GaussQ, Q};
use num::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// `Σ_{n ≥ start} mass(n)·δ(anchor + dir·n·spacing)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Comb {
    pub anchor: Q,
    pub spacing: Q,
    pub start: i64,
    pub dir: i8,
    pub mass: UPoly,
}

impl Comb {
    pub fn position(&self, n: i64) -> Q {
        &self.anchor + &self.spacing * Q::from_integer((self.dir as i64 * n).into())
    }
    fn normalized(&self) -> Comb {
        Comb {
            anchor: self.position(self.start),
            spacing: self.spacing.clone(),
            start: 0,
            dir: self.dir,
            mass: self.mass.shift(&GaussQ::int(self.start)),
        }
    }
    /// Index `n ≥ 0` of `x` on a normalized comb.
    fn index_of(&self, x: &Q) -> Option<i64> {
        let t = (x - &self.anchor) / &self.spacing * Q::from_integer((self.dir as i64).into());
        (t.is_integer() && !t.is_negative()).then(|| t.to_integer().try_into().ok()).flatten()
    }
}

/// Density `poly(x)` on the open interval `(lo, hi)`; `None` is infinite.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Piece {
    pub lo: Option<Q>,
    pub hi: Option<Q>,
    pub poly: UPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GeneralizedDensity {
    pub atoms: BTreeMap<Q, GaussQ>,
    pub combs: Vec<Comb>,
    pub pieces: Vec<Piece>,
}

impl GeneralizedDensity {
    pub fn zero() -> Self {
        Self::default()
    }
    pub fn atom(pos: Q, mass: GaussQ) -> Self {
        let mut d = Self::zero();
        d.add_atom(pos, mass);
        d
    }
    pub fn delta0() -> Self {
        Self::atom(Q::zero(), GaussQ::one())
    }
    pub fn piece(lo: Option<Q>, hi: Option<Q>, poly: UPoly) -> Self {
        GeneralizedDensity { pieces: vec![Piece { lo, hi, poly }], ..Self::default() }.canonical()
    }
    /// `1_{[lo, hi]}`.
    pub fn indicator(lo: Q, hi: Q) -> Self {
        Self::piece(Some(lo), Some(hi), UPoly::constant(GaussQ::one()))
    }
    /// Constant-mass comb `Σ_{n≥0} c·δ(anchor + dir·n·spacing)`.
    pub fn comb(anchor: Q, spacing: Q, dir: i8, mass: UPoly) -> Self {
        GeneralizedDensity { combs: vec![Comb { anchor, spacing, start: 0, dir, mass }], ..Self::default() }.canonical()
    }
    pub fn add_atom(&mut self, pos: Q, mass: GaussQ) {
        let e = self.atoms.entry(pos.clone()).or_default();
        *e += &mass;
        if e.is_zero() {
            self.atoms.remove(&pos);
        }
    }
    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.combs.is_empty() && self.pieces.is_empty()
    }
    pub fn is_atomic(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn add(&self, o: &GeneralizedDensity) -> GeneralizedDensity {
        let mut r = self.clone();
        for (p, m) in &o.atoms {
            r.add_atom(p.clone(), m.clone());
        }
        r.combs.extend(o.combs.iter().cloned());
        r.pieces.extend(o.pieces.iter().cloned());
        r.canonical()
    }
    pub fn scale(&self, c: &GaussQ) -> GeneralizedDensity {
        GeneralizedDensity {
            atoms: self.atoms.iter().map(|(p, m)| (p.clone(), m * c)).collect(),
            combs: self.combs.iter().map(|k| Comb { mass: k.mass.scale(c), ..k.clone() }).collect(),
            pieces: self.pieces.iter().map(|p| Piece { poly: p.poly.scale(c), ..p.clone() }).collect(),
        }
        .canonical()
    }
    pub fn neg(&self) -> GeneralizedDensity {
        self.scale(&GaussQ::int(-1))
    }
    pub fn sub(&self, o: &GeneralizedDensity) -> GeneralizedDensity {
        self.add(&o.neg())
    }

    /// `u(x - b)`.
    pub fn translate(&self, b: &Q) -> GeneralizedDensity {
        let gb = GaussQ::real(b.clone());
        GeneralizedDensity {
            atoms: self.atoms.iter().map(|(p, m)| (p + b, m.clone())).collect(),
            combs: self.combs.iter().map(|k| Comb { anchor: &k.anchor + b, ..k.clone() }).collect(),
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece { lo: p.lo.as_ref().map(|x| x + b), hi: p.hi.as_ref().map(|x| x + b), poly: p.poly.shift(&-&gb) })
                .collect(),
        }
    }

    /// `u(-x)`.
    pub fn reflect(&self) -> GeneralizedDensity {
        GeneralizedDensity {
            atoms: self.atoms.iter().map(|(p, m)| (-p, m.clone())).collect(),
            combs: self.combs.iter().map(|k| Comb { anchor: -&k.anchor, dir: -k.dir, ..k.clone() }).collect(),
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece {
                    lo: p.hi.as_ref().map(|x| -x),
                    hi: p.lo.as_ref().map(|x| -x),
                    poly: p.poly.compose_affine(&GaussQ::int(-1), &GaussQ::zero()),
                })
                .collect(),
        }
        .canonical()
    }

    pub fn bounded_below(&self) -> bool {
        self.combs.iter().all(|c| c.dir > 0) && self.pieces.iter().all(|p| p.lo.is_some())
    }
    pub fn bounded_above(&self) -> bool {
        self.combs.iter().all(|c| c.dir < 0) && self.pieces.iter().all(|p| p.hi.is_some())
    }

    /// Distributional derivative; atoms and combs would need `δ'`.
    pub fn derivative(&self) -> Result<GeneralizedDensity> {
        if !self.atoms.is_empty() || !self.combs.is_empty() {
            return Err(IndexError::NotRepresentable("derivative of a Dirac mass".into()));
        }
        let mut out = GeneralizedDensity::zero();
        for p in &self.pieces {
            if let Some(lo) = &p.lo {
                out.add_atom(lo.clone(), p.poly.eval_q(lo));
            }
            if let Some(hi) = &p.hi {
                out.add_atom(hi.clone(), -p.poly.eval_q(hi));
            }
            out.pieces.push(Piece { lo: p.lo.clone(), hi: p.hi.clone(), poly: p.poly.derivative() });
        }
        Ok(out.canonical())
    }

    /// `(iθ)^k·FT(u) = FT((−∂)^k u)`.
    pub fn times_itheta_pow(&self, k: u32) -> Result<GeneralizedDensity> {
        let mut d = self.clone();
        for _ in 0..k {
            d = d.derivative()?.neg();
        }
        Ok(d)
    }

    pub fn canonical(&self) -> GeneralizedDensity {
        let mut atoms = self.atoms.clone();
        atoms.retain(|_, m| !m.is_zero());
        let mut combs: Vec<Comb> = self.combs.iter().filter(|c| !c.mass.is_zero()).map(|c| c.normalized()).collect();
        merge_combs(&mut combs, &mut atoms);
        atoms.retain(|_, m| !m.is_zero());
        combs.sort();
        GeneralizedDensity { atoms, combs, pieces: canonical_pieces(&self.pieces) }
    }

    /// Pointwise value of the absolutely continuous part (interior points).
    pub fn density_at(&self, x: &Q) -> GaussQ {
        let mut acc = GaussQ::zero();
        for p in &self.pieces {
            if p.lo.as_ref().is_none_or(|l| l < x) && p.hi.as_ref().is_none_or(|h| x < h) {
                acc += p.poly.eval_q(x);
            }
        }
        acc
    }

    /// Total Dirac mass at `x`.
    pub fn mass_at(&self, x: &Q) -> GaussQ {
        let mut acc = self.atoms.get(x).cloned().unwrap_or_default();
        for c in &self.combs {
            if let Some(n) = c.index_of(x) {
                acc += c.mass.eval(&GaussQ::int(n));
            }
        }
        acc
    }

    /// The polynomial of a density supported on the whole line, if that is
    /// all there is.
    pub fn as_full_line_poly(&self) -> Option<UPoly> {
        match (self.atoms.is_empty() && self.combs.is_empty(), self.pieces.as_slice()) {
            (true, []) => Some(UPoly::zero()),
            (true, [p]) if p.lo.is_none() && p.hi.is_none() => Some(p.poly.clone()),
            _ => None,
        }
    }
}

fn merge_combs(combs: &mut Vec<Comb>, atoms: &mut BTreeMap<Q, GaussQ>) {
    'outer: loop {
        for i in 0..combs.len() {
            for j in 0..combs.len() {
                if i == j || combs[i].spacing != combs[j].spacing || combs[i].dir != combs[j].dir {
                    continue;
                }
                let Some(m) = combs[i].index_of(&combs[j].anchor) else { continue };
                let a = combs[i].clone();
                let p2 = combs[j].mass.shift(&GaussQ::int(-m));
                for n in 0..m {
                    let e = atoms.entry(a.position(n)).or_default();
                    *e -= &p2.eval(&GaussQ::int(n));
                }
                let merged = Comb { mass: a.mass.add(&p2), ..a };
                let (hi, lo) = if i > j { (i, j) } else { (j, i) };
                combs.remove(hi);
                combs.remove(lo);
                if !merged.mass.is_zero() {
                    combs.push(merged);
                }
                continue 'outer;
            }
        }
        break;
    }
    for c in combs.iter_mut() {
        loop {
            let prev = c.position(-1);
            let want = c.mass.eval(&GaussQ::int(-1));
            match atoms.get(&prev) {
                Some(m) if *m == want => {
                    atoms.remove(&prev);
                    c.mass = c.mass.shift(&GaussQ::int(-1));
                    c.anchor = prev;
                }
                _ => break,
            }
        }
    }
}

fn lo_cmp(a: &Option<Q>, b: &Option<Q>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, _) => Ordering::Less,
        (_, None) => Ordering::Greater,
        (Some(x), Some(y)) => x.cmp(y),
    }
}

fn hi_cmp(a: &Option<Q>, b: &Option<Q>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, _) => Ordering::Greater,
        (_, None) => Ordering::Less,
        (Some(x), Some(y)) => x.cmp(y),
    }
}

/// Split at every breakpoint, add overlapping polynomials, merge equal
/// neighbours and drop zeros.
fn canonical_pieces(pieces: &[Piece]) -> Vec<Piece> {
    let pieces: Vec<&Piece> = pieces.iter().filter(|p| !p.poly.is_zero()).filter(|p| match (&p.lo, &p.hi) {
        (Some(l), Some(h)) => l < h,
        _ => true,
    }).collect();
    if pieces.is_empty() {
        return vec![];
    }
    let mut bps: Vec<Q> = pieces.iter().flat_map(|p| p.lo.iter().chain(p.hi.iter()).cloned()).collect();
    bps.sort();
    bps.dedup();
    let mut cells: Vec<(Option<Q>, Option<Q>)> = vec![];
    cells.push((None, bps.first().cloned()));
    for w in bps.windows(2) {
        cells.push((Some(w[0].clone()), Some(w[1].clone())));
    }
    if let Some(last) = bps.last() {
        cells.push((Some(last.clone()), None));
    }
    let mut out: Vec<Piece> = vec![];
    for (lo, hi) in cells {
        let mut poly = UPoly::zero();
        for p in &pieces {
            if lo_cmp(&p.lo, &lo) != Ordering::Greater && hi_cmp(&p.hi, &hi) != Ordering::Less {
                poly = poly.add(&p.poly);
            }
        }
        if poly.is_zero() {
            continue;
        }
        if let Some(last) = out.last_mut() {
            if last.hi.is_some() && last.hi == lo && last.poly == poly {
                last.hi = hi;
                continue;
            }
        }
        out.push(Piece { lo, hi, poly });
    }
    out
}

/// Exact convolution within the atom / comb / piecewise-polynomial class.
pub fn convolve(f: &GeneralizedDensity, g: &GeneralizedDensity) -> Result<GeneralizedDensity> {
    let mut out = GeneralizedDensity::zero();
    // Atoms act by translation on everything.
    for (a, m) in &f.atoms {
        out = out.add(&g.translate(a).scale(m));
    }
    for (a, m) in &g.atoms {
        let rest = GeneralizedDensity { atoms: BTreeMap::new(), ..f.clone() };
        out = out.add(&rest.translate(a).scale(m));
    }
    for c in &f.combs {
        for d in &g.combs {
            out = out.add(&comb_comb(c, d)?);
        }
        for p in &g.pieces {
            out = out.add(&comb_piece(c, p)?);
        }
    }
    for p in &f.pieces {
        for d in &g.combs {
            out = out.add(&comb_piece(d, p)?);
        }
        for q in &g.pieces {
            out = out.add(&piece_piece(p, q)?);
        }
    }
    Ok(out.canonical())
}

fn comb_comb(c: &Comb, d: &Comb) -> Result<GeneralizedDensity> {
    if c.dir != d.dir {
        return Err(IndexError::ConvolutionDiverges("combs running in opposite directions".into()));
    }
    if c.spacing != d.spacing {
        return Err(IndexError::NotRepresentable("combs with different spacings".into()));
    }
    // mass(k) = Σ_{j=0}^{k} p(j) q(k-j), a polynomial of degree deg p + deg q + 1.
    let deg = c.mass.degree().unwrap_or(0) + d.mass.degree().unwrap_or(0) + 1;
    let vals: Vec<GaussQ> = (0..=deg as i64)
        .map(|k| {
            (0..=k).fold(GaussQ::zero(), |acc, j| acc + c.mass.eval(&GaussQ::int(j)) * d.mass.eval(&GaussQ::int(k - j)))
        })
        .collect();
    Ok(GeneralizedDensity {
        combs: vec![Comb {
            anchor: &c.anchor + &d.anchor,
            spacing: c.spacing.clone(),
            start: 0,
            dir: c.dir,
            mass: interpolate_at_naturals(&vals),
        }],
        ..GeneralizedDensity::zero()
    })
}

/// Constant comb against a constant bounded piece whose length is a
/// multiple of the spacing: a staircase that settles on a ray.
fn comb_piece(c: &Comb, p: &Piece) -> Result<GeneralizedDensity> {
    if c.dir < 0 {
        let rc = GeneralizedDensity { combs: vec![c.clone()], ..GeneralizedDensity::zero() }.reflect();
        let rp = GeneralizedDensity { pieces: vec![p.clone()], ..GeneralizedDensity::zero() }.reflect();
        return Ok(comb_piece(&rc.combs[0], &rp.pieces[0])?.reflect());
    }
    if p.hi.is_none() {
        return Err(IndexError::NotRepresentable("comb against a ray gives an unbounded staircase".into()));
    }
    if p.lo.is_none() {
        return Err(IndexError::ConvolutionDiverges("comb and density unbounded on opposite sides".into()));
    }
    let (lo, hi) = (p.lo.clone().unwrap(), p.hi.clone().unwrap());
    let ratio = (&hi - &lo) / &c.spacing;
    if !c.mass.is_constant() || !p.poly.is_constant() || !ratio.is_integer() {
        return Err(IndexError::NotRepresentable("comb against a non-constant or incommensurate piece".into()));
    }
    let l: i64 = ratio.to_integer().try_into().map_err(|_| IndexError::NotRepresentable("interval too long".into()))?;
    let level = &c.mass.coeff(0) * &p.poly.coeff(0);
    let base = &c.anchor + &lo;
    let at = |j: i64| &base + &c.spacing * Q::from_integer(j.into());
    let mut out = GeneralizedDensity::zero();
    for j in 0..l {
        out.pieces.push(Piece { lo: Some(at(j)), hi: Some(at(j + 1)), poly: UPoly::constant(level.scale(&Q::from_integer((j + 1).into()))) });
    }
    out.pieces.push(Piece { lo: Some(at(l)), hi: None, poly: UPoly::constant(level.scale(&Q::from_integer(l.into()))) });
    Ok(out)
}

/// Bound of the `y`-range as a function of `x`: `y = x·a + b`, or infinite.
#[derive(Clone, Debug)]
enum Lim {
    Inf,
    Affine(bool, Q),
}

fn piece_piece(p: &Piece, q: &Piece) -> Result<GeneralizedDensity> {
    // (p∗q)(x) = ∫ p(y) q(x−y) dy over y ∈ [max(lo1, x−hi2), min(hi1, x−lo2)].
    let mut bps: Vec<Q> = vec![];
    for a in [&p.lo, &p.hi] {
        for b in [&q.lo, &q.hi] {
            if let (Some(a), Some(b)) = (a, b) {
                bps.push(a + b);
            }
        }
    }
    bps.sort();
    bps.dedup();
    let mut cells: Vec<(Option<Q>, Option<Q>)> = vec![];
    if bps.is_empty() {
        cells.push((None, None));
    } else {
        cells.push((None, Some(bps[0].clone())));
        for w in bps.windows(2) {
            cells.push((Some(w[0].clone()), Some(w[1].clone())));
        }
        cells.push((Some(bps.last().unwrap().clone()), None));
    }
    let kernel = integrand(&p.poly, &q.poly);
    let mut out = GeneralizedDensity::zero();
    for (lo, hi) in cells {
        let x = match (&lo, &hi) {
            (Some(a), Some(b)) => (a + b) / Q::from_integer(2.into()),
            (Some(a), None) => a + Q::one(),
            (None, Some(b)) => b - Q::one(),
            (None, None) => Q::zero(),
        };
        // Candidates for the lower limit: lo1 and x - hi2; upper: hi1 and x - lo2.
        let lower = pick(&x, [p.lo.as_ref().map(|v| Lim::Affine(false, v.clone())), q.hi.as_ref().map(|v| Lim::Affine(true, -v))], true);
        let upper = pick(&x, [p.hi.as_ref().map(|v| Lim::Affine(false, v.clone())), q.lo.as_ref().map(|v| Lim::Affine(true, -v))], false);
        match (&lower, &upper) {
            (Lim::Affine(a1, b1), Lim::Affine(a2, b2)) => {
                if eval_lim(*a1, b1, &x) >= eval_lim(*a2, b2, &x) {
                    continue;
                }
                let val = antider_at(&kernel, *a2, b2).sub(&antider_at(&kernel, *a1, b1));
                out.pieces.push(Piece { lo, hi, poly: val });
            }
            _ => {
                if !p.poly.is_zero() && !q.poly.is_zero() {
                    return Err(IndexError::ConvolutionDiverges("both supports unbounded on opposite sides".into()));
                }
            }
        }
    }
    Ok(out)
}

fn eval_lim(a: bool, b: &Q, x: &Q) -> Q {
    if a {
        x + b
    } else {
        b.clone()
    }
}

/// The binding limit at sample `x`: largest lower bound or smallest upper bound.
fn pick(x: &Q, cands: [Option<Lim>; 2], lower: bool) -> Lim {
    let mut best: Option<(Q, Lim)> = None;
    for c in cands.into_iter().flatten() {
        let Lim::Affine(a, b) = &c else { continue };
        let v = eval_lim(*a, b, x);
        let better = match &best {
            None => true,
            Some((bv, _)) => (lower && v > *bv) || (!lower && v < *bv),
        };
        if better {
            best = Some((v, c));
        }
    }
    best.map(|(_, l)| l).unwrap_or(Lim::Inf)
}

/// `p(y)·q(x−y)` as coefficients in `y` (index) of polynomials in `x`.
fn integrand(p: &UPoly, q: &UPoly) -> Vec<UPoly> {
    let mut qxy: Vec<UPoly> = vec![];
    // q(x−y) = Σ_k q_k Σ_j C(k,j) x^{k−j} (−y)^j
    for (k, qk) in q.0.iter().enumerate() {
        for j in 0..=k {
            let c = qk * &crate::poly::binomial_gauss(k as u64, j as u64) * GaussQ::int(if j % 2 == 0 { 1 } else { -1 });
            let mut xs = vec![GaussQ::zero(); k - j + 1];
            xs[k - j] = c;
            if qxy.len() <= j {
                qxy.resize(j + 1, UPoly::zero());
            }
            qxy[j] = qxy[j].add(&UPoly::new(xs));
        }
    }
    let mut out = vec![UPoly::zero(); p.0.len() + qxy.len()];
    for (i, pi) in p.0.iter().enumerate() {
        for (j, cj) in qxy.iter().enumerate() {
            out[i + j] = out[i + j].add(&cj.scale(pi));
        }
    }
    out
}

/// `∫^{y} kernel dy` evaluated at `y = a·x + b`, as a polynomial in `x`.
fn antider_at(kernel: &[UPoly], a: bool, b: &Q) -> UPoly {
    let y = UPoly::new(vec![GaussQ::real(b.clone()), if a { GaussQ::one() } else { GaussQ::zero() }]);
    let mut acc = UPoly::zero();
    let mut ypow = y.clone();
    for (j, cj) in kernel.iter().enumerate() {
        acc = acc.add(&cj.mul(&ypow).scale(&GaussQ::frac(1, j as i64 + 1)));
        ypow = ypow.mul(&y);
    }
    acc
}

/// Comb `u` with `u ∗ 1_{[a,b]} = target`, for targets bounded on one side.
pub fn deconvolve_interval(target: &GeneralizedDensity, a: &Q, b: &Q) -> Result<GeneralizedDensity> {
    if a >= b {
        return Err(IndexError::Invalid("deconvolution interval must have positive length".into()));
    }
    if target.is_zero() {
        return Ok(GeneralizedDensity::zero());
    }
    if !target.bounded_below() {
        if target.bounded_above() {
            return Ok(deconvolve_interval(&target.reflect(), &-b, &-a)?.reflect());
        }
        return Err(IndexError::NoCombSolution("target unbounded on both sides".into()));
    }
    let fail = |e: IndexError| IndexError::NoCombSolution(e.to_string());
    // (δ_a − δ_b) ∗ u = target′ and (δ_a − δ_b)^{−1} = Σ_{k≥0} δ_{k(b−a) − a}.
    let dt = target.derivative().map_err(fail)?;
    let inv = GeneralizedDensity::comb(-a, b - a, 1, UPoly::constant(GaussQ::one()));
    let u = convolve(&inv, &dt).map_err(fail)?;
    let back = convolve(&u, &GeneralizedDensity::indicator(a.clone(), b.clone())).map_err(fail)?;
    if back != target.canonical() {
        return Err(IndexError::NoCombSolution("round trip does not reproduce the target".into()));
    }
    Ok(u)
}

impl fmt::Display for GeneralizedDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![];
        for (p, m) in &self.atoms {
            parts.push(format!("({m})δ[{}]", fmt_q(p)));
        }
        for c in &self.combs {
            let sign = if c.dir > 0 { "+" } else { "-" };
            parts.push(format!("Σ_n ({})δ[{} {sign} {}n]", c.mass, fmt_q(&c.anchor), fmt_q(&c.spacing)));
        }
        for p in &self.pieces {
            let lo = p.lo.as_ref().map(fmt_q).unwrap_or_else(|| "-inf".into());
            let hi = p.hi.as_ref().map(fmt_q).unwrap_or_else(|| "inf".into());
            parts.push(format!("[{}](x)·1({lo},{hi})", p.poly));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    fn ones_from(a: i64) -> GeneralizedDensity {
        GeneralizedDensity::comb(qi(a), qi(1), 1, UPoly::constant(GaussQ::one()))
    }
    fn ray_indicator() -> GeneralizedDensity {
        GeneralizedDensity::piece(Some(qi(0)), None, UPoly::constant(GaussQ::one()))
    }

    #[test]
    fn interval_against_comb_is_ray() {
        let r = convolve(&GeneralizedDensity::indicator(qi(-1), qi(0)), &ones_from(1)).unwrap();
        assert_eq!(r, ray_indicator());
    }

    #[test]
    fn ray_against_interval_is_ramp() {
        let r = convolve(&ray_indicator(), &GeneralizedDensity::indicator(qi(-1), qi(0))).unwrap();
        let want = GeneralizedDensity::piece(Some(qi(-1)), Some(qi(0)), UPoly::from_ints(&[1, 1])).add(&ray_indicator());
        assert_eq!(r, want);
    }

    #[test]
    fn deconvolve_ray() {
        let u = deconvolve_interval(&ray_indicator(), &qi(-1), &qi(0)).unwrap();
        assert_eq!(u, ones_from(1));
    }

    #[test]
    fn deconvolve_ramp_gives_ray() {
        let ramp = convolve(&ray_indicator(), &GeneralizedDensity::indicator(qi(-1), qi(0))).unwrap();
        assert_eq!(deconvolve_interval(&ramp, &qi(-1), &qi(0)).unwrap(), ray_indicator());
    }

    #[test]
    fn two_sided_supports_diverge() {
        let left = GeneralizedDensity::piece(None, Some(qi(0)), UPoly::constant(GaussQ::one()));
        assert!(matches!(convolve(&left, &ray_indicator()), Err(IndexError::ConvolutionDiverges(_))));
    }

    #[test]
    fn comb_absorbs_atoms_in_front() {
        let d = ones_from(1).add(&GeneralizedDensity::atom(qi(0), GaussQ::one()));
        assert_eq!(d, ones_from(0));
    }

    #[test]
    fn comb_squared_counts() {
        let c = convolve(&ones_from(0), &ones_from(0)).unwrap();
        assert_eq!(c.mass_at(&qi(4)), GaussQ::int(5));
    }
}
