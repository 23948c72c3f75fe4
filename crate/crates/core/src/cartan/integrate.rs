//! Fiber integration by rules.
//!
//! Circle coordinates contribute `2π` (coefficients must not depend on them),
//! interval coordinates integrate polynomially, and a Euclidean block of one
//! or two coordinates integrates only against the cutoff `g(u)`, `u` the
//! squared norm of the block, through
//! `∫_0^∞ u^p g^{(p+1)}(u) du = (−1)^{p+1} p!`, which follows from `g(0) = 1`
//! and `g(∞) = 0` alone. An oscillatory atom `Osc(λX, k)` is consumed into the
//! density `x^k/(λ^k|λ|)` on `sign(λ)·[0, ∞)`.

use super::chart::{Chart, Domain};
use super::expr::{Atom, Expr, Key};
use super::form::{wedge_sign, Form};
use crate::distributions::density::GeneralizedDensity;
use crate::error::{IndexError, Result};
use crate::poly::{sum_of_squares, MPoly, UPoly};
use crate::scalar::{factorial, q, GaussQ, Q};
use num::{One, Signed, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub enum FiberValue {
    Smooth(Expr),
    /// A generalized function of the single parameter, as a density.
    Density(GeneralizedDensity),
}

/// `π^pi_pow · value · dx_mask` on the base.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberTerm {
    pub mask: u64,
    pub pi_pow: i32,
    pub value: FiberValue,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct FiberIntegral {
    pub terms: Vec<FiberTerm>,
}

impl FiberIntegral {
    /// Sum of the density parts of the function component with the given power of π.
    pub fn density(&self, pi_pow: i32) -> Result<GeneralizedDensity> {
        let mut u = GeneralizedDensity::zero();
        for t in &self.terms {
            match &t.value {
                FiberValue::Density(d) if t.mask == 0 && t.pi_pow == pi_pow => u = u.add(d),
                FiberValue::Smooth(e) if e.is_zero() => {}
                _ if t.mask == 0 && t.pi_pow != pi_pow => {
                    return Err(IndexError::NonIntegrable(format!("unexpected power π^{}", t.pi_pow)));
                }
                FiberValue::Smooth(_) if t.mask == 0 => {
                    return Err(IndexError::NonIntegrable("smooth part in a density-valued integral".into()));
                }
                _ => {}
            }
        }
        Ok(u.canonical())
    }
    /// The smooth function part, as `Σ π^p·e_p`.
    pub fn smooth(&self) -> BTreeMap<i32, Expr> {
        let mut m: BTreeMap<i32, Expr> = BTreeMap::new();
        for t in &self.terms {
            if let (0, FiberValue::Smooth(e)) = (t.mask, &t.value) {
                let cur = m.remove(&t.pi_pow).unwrap_or_else(|| Expr::zero(e.nvars));
                let s = cur.add(e);
                if !s.is_zero() {
                    m.insert(t.pi_pow, s);
                }
            }
        }
        m
    }
    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| match &t.value {
            FiberValue::Smooth(e) => e.is_zero(),
            FiberValue::Density(d) => d.is_zero(),
        })
    }
}

fn double_factorial(n: i64) -> Q {
    let mut r = Q::one();
    let mut k = n;
    while k > 1 {
        r *= Q::from_integer(k.into());
        k -= 2;
    }
    r
}

/// `∫_0^∞ u^p g^{(j)}(u) du`.
fn bump_moment(p: i64, j: u32) -> Result<Q> {
    if p >= 0 && j as i64 == p + 1 {
        let s = if (p + 1) % 2 == 0 { 1 } else { -1 };
        return Ok(Q::from_integer(factorial(p as u64)) * Q::from_integer(s.into()));
    }
    Err(IndexError::NonIntegrable(format!("∫ u^{p} g^({j})(u) du depends on the cutoff")))
}

/// `∫_{R²} x^a y^b F(x²+y²) = π·(a−1)!!(b−1)!!/(a+b)!!·∫_0^∞ u^{(a+b)/2} F(u) du`.
fn angular_factor(a: u32, b: u32) -> Option<Q> {
    if a % 2 == 1 || b % 2 == 1 {
        return None;
    }
    Some(double_factorial(a as i64 - 1) * double_factorial(b as i64 - 1) / double_factorial((a + b) as i64))
}

struct Block {
    vars: Vec<usize>,
    /// Only `ξ ≥ 0` (one coordinate of Ray type).
    half: bool,
}

/// Integrate the top fiber-degree part of `a` over the listed coordinates,
/// with the fiber written first (`dx_F ∧ dx_B`) and oriented by `orientation`.
pub fn fiber_integrate(c: &Chart, a: &Form, fiber: &[usize], orientation: i64) -> Result<FiberIntegral> {
    let fmask: u64 = fiber.iter().map(|&i| 1u64 << i).sum();
    let mut circles = vec![];
    let mut intervals = vec![];
    let mut euclid = vec![];
    for &i in fiber {
        match &c.coords[i].domain {
            Domain::Circle => circles.push(i),
            Domain::Interval(lo, hi) => intervals.push((i, lo.clone(), hi.clone())),
            Domain::Line => euclid.push(i),
            Domain::Ray => euclid.push(i),
        }
    }
    let block = match euclid.len() {
        0 => None,
        1 => Some(Block { vars: euclid.clone(), half: c.coords[euclid[0]].domain == Domain::Ray }),
        2 if euclid.iter().all(|&i| c.coords[i].domain == Domain::Line) => Some(Block { vars: euclid.clone(), half: false }),
        _ => return Err(IndexError::NonIntegrable("unsupported Euclidean fiber".into())),
    };
    let mut out = FiberIntegral::default();
    for (m, e) in &a.terms {
        if m & fmask != fmask {
            continue;
        }
        let base = m & !fmask;
        // dx_m = ±dx_F ∧ dx_base
        let sign = wedge_sign(fmask, base).expect("disjoint") * orientation;
        for (key, p) in &e.terms {
            let mut p = p.scale(&GaussQ::int(sign));
            let mut pi_pow = 0;
            for &i in &circles {
                if p.degree_in(i) > 0 || key_depends(key, i) {
                    return Err(IndexError::NonIntegrable(format!("coefficient depends on the angle {}", c.coords[i].name)));
                }
                p = p.scale(&GaussQ::int(2));
                pi_pow += 1;
            }
            for (i, lo, hi) in &intervals {
                if key_depends(key, *i) {
                    return Err(IndexError::NonIntegrable(format!("transcendental dependence on {}", c.coords[*i].name)));
                }
                p = integrate_poly(&p, *i, lo, hi);
            }
            let values = match &block {
                None => vec![(0, smooth_or_density(c, key, p)?)],
                Some(b) => integrate_block(c, b, key, &p)?,
            };
            for (dp, v) in values {
                out.terms.push(FiberTerm { mask: base, pi_pow: pi_pow + dp, value: v });
            }
        }
    }
    Ok(out)
}

fn key_depends(key: &Key, v: usize) -> bool {
    key.iter().any(|(a, _)| match a {
        Atom::Bump { arg, .. } | Atom::Gauss { arg } | Atom::Osc { arg, .. } => arg.degree_in(v) > 0,
    })
}

fn integrate_poly(p: &MPoly, v: usize, lo: &Q, hi: &Q) -> MPoly {
    let mut r = MPoly::zero(p.nvars);
    for (e, c) in &p.terms {
        let k = e[v] as i64 + 1;
        let val = (pow_q(hi, k) - pow_q(lo, k)) / Q::from_integer(k.into());
        let mut e2 = e.clone();
        e2[v] = 0;
        r.add_term(e2, c.scale(&val));
    }
    r
}

fn pow_q(x: &Q, k: i64) -> Q {
    (0..k).fold(Q::one(), |acc, _| acc * x)
}

fn smooth_or_density(_c: &Chart, key: &Key, p: MPoly) -> Result<FiberValue> {
    if key.iter().any(|(a, _)| matches!(a, Atom::Osc { .. })) {
        return Err(IndexError::NonIntegrable("oscillatory factor with no Euclidean fiber to consume it".into()));
    }
    let mut e = Expr::zero(p.nvars);
    e.add_term(key.clone(), p);
    Ok(FiberValue::Smooth(e))
}

/// `λ = coeff·base^m` with `base` the block variable or its squared norm.
fn monomial_in(lam: &MPoly, base: &MPoly) -> Option<(GaussQ, u32)> {
    let deg = lam.total_degree()?;
    let bdeg = base.total_degree()?;
    if deg % bdeg != 0 {
        return None;
    }
    let m = deg / bdeg;
    let lead = base.pow(m);
    let (lc, _) = lam.terms.iter().next_back().map(|(_, c)| (c.clone(), ()))?;
    let (bc, _) = lead.terms.iter().next_back().map(|(_, c)| (c.clone(), ()))?;
    let coeff = &lc / &bc;
    (lead.scale(&coeff) == *lam).then_some((coeff, m))
}

fn integrate_block(c: &Chart, b: &Block, key: &Key, p: &MPoly) -> Result<Vec<(i32, FiberValue)>> {
    let nv = c.nvars();
    let u = sum_of_squares(nv, &b.vars);
    let mut bump: Option<u32> = None;
    let mut osc: Option<(MPoly, u32)> = None;
    let mut rest: Key = vec![];
    for (a, pw) in key {
        match a {
            Atom::Bump { arg, k } if b.vars.iter().any(|&v| arg.degree_in(v) > 0) => {
                if *arg != u || *pw != 1 || bump.is_some() {
                    return Err(IndexError::NonIntegrable(format!("cutoff argument must be the squared norm of the fiber, got {}", arg.fmt_with(&c.names()))));
                }
                bump = Some(*k);
            }
            Atom::Osc { arg, k } if b.vars.iter().any(|&v| arg.degree_in(v) > 0) => {
                if *pw != 1 || osc.is_some() {
                    return Err(IndexError::NonIntegrable("several oscillatory factors".into()));
                }
                osc = Some((arg.clone(), *k));
            }
            _ if b.vars.iter().any(|&v| key_depends(&vec![(a.clone(), *pw)], v)) => {
                return Err(IndexError::NonIntegrable("transcendental factor in the fiber variables".into()));
            }
            _ => rest.push((a.clone(), *pw)),
        }
    }
    let Some(j) = bump else {
        if p.is_zero() {
            return Ok(vec![]);
        }
        return Err(IndexError::NonIntegrable("no cutoff on a noncompact fiber".into()));
    };
    // Split p into fiber monomials with base coefficients.
    let mut by_fiber: BTreeMap<Vec<u32>, MPoly> = BTreeMap::new();
    for (e, cf) in &p.terms {
        let fe: Vec<u32> = b.vars.iter().map(|&v| e[v]).collect();
        let mut be = e.clone();
        for &v in &b.vars {
            be[v] = 0;
        }
        by_fiber.entry(fe).or_insert_with(|| MPoly::zero(nv)).add_term(be, cf.clone());
    }
    match osc {
        None => {
            let mut total = MPoly::zero(nv);
            let mut pi = 0;
            for (fe, coef) in &by_fiber {
                let (val, dp) = block_moment(b, fe, 0, 1, j)?;
                pi = dp;
                total = total.add(&coef.scale(&GaussQ::real(val)));
            }
            let mut e = Expr::zero(nv);
            e.add_term(rest, total);
            Ok(vec![(pi, FiberValue::Smooth(e))])
        }
        Some((arg, k)) => {
            let pv = c.param_vars();
            if pv.len() != 1 || rest.iter().any(|(a, _)| matches!(a, Atom::Osc { .. })) {
                return Err(IndexError::NonIntegrable("density output needs a single parameter".into()));
            }
            let xv = pv[0];
            let x = MPoly::var(nv, xv);
            let lam = arg.div_exact(&x).filter(|l| l.degree_in(xv) == 0).ok_or_else(|| IndexError::NonIntegrable("phase is not λ·X".into()))?;
            if !rest.is_empty() {
                return Err(IndexError::NonIntegrable("extra atoms next to a density".into()));
            }
            let base_poly = if b.vars.len() == 2 { u.clone() } else { MPoly::var(nv, b.vars[0]) };
            let (lc, m) = monomial_in(&lam, &base_poly).ok_or_else(|| IndexError::NonIntegrable("λ is not a monomial in the fiber".into()))?;
            if !lc.is_real() || lc.is_zero() {
                return Err(IndexError::NonIntegrable("λ must have a real coefficient".into()));
            }
            let lcq = lc.re.clone();
            // density on [0,∞) and on (−∞,0]
            let mut pos = GaussQ::zero();
            let mut neg = GaussQ::zero();
            let mut pi = 0;
            for (fe, coef) in &by_fiber {
                if coef.terms.keys().any(|e| e.iter().enumerate().any(|(v, &d)| d > 0 && v != xv && !b.vars.contains(&v) && v < c.dim())) {
                    return Err(IndexError::NonIntegrable("density coefficient depends on base coordinates".into()));
                }
                if coef.degree_in(xv) > 0 || coef.degree_in(c.t_var()) > 0 {
                    return Err(IndexError::NonIntegrable("density coefficient depends on X or t".into()));
                }
                let cf = coef.constant_term();
                // 1/(λ^k |λ|) = 1/(lc^k |lc|) · base^{−m(k+1)} with the sign of base^{mk}
                let norm = pow_q(&lcq, k as i64) * lcq.abs();
                if b.vars.len() == 2 {
                    let (val, dp) = block_moment(b, fe, (m * (k + 1)) as i64, 2, j)?;
                    pi = dp;
                    let v = cf.scale(&(val / &norm));
                    if lcq.is_positive() {
                        pos += v;
                    } else {
                        neg += v;
                    }
                } else {
                    // ξ = ±s on each half line
                    for side in [1i64, -1] {
                        if b.half && side < 0 {
                            continue;
                        }
                        let a = fe[0] as i64;
                        let e = a - (m * (k + 1)) as i64;
                        let sgn_num = if side < 0 && a % 2 == 1 { -1 } else { 1 };
                        let sgn_den = if side < 0 && (m * k) % 2 == 1 { -1 } else { 1 };
                        let lam_sign = if side < 0 && m % 2 == 1 { -lcq.signum() } else { lcq.signum() };
                        if e < 1 || e % 2 == 0 {
                            return Err(IndexError::NonIntegrable(format!("∫ s^{e} g(s²) ds depends on the cutoff")));
                        }
                        let mom = bump_moment((e - 1) / 2, j)? * q(1, 2);
                        let v = cf.scale(&(mom * Q::from_integer((sgn_num * sgn_den).into()) / &norm));
                        if lam_sign.is_positive() {
                            pos += v;
                        } else {
                            neg += v;
                        }
                    }
                }
            }
            let mut xk = vec![GaussQ::zero(); k as usize + 1];
            let mut u_out = GeneralizedDensity::zero();
            if !pos.is_zero() {
                xk[k as usize] = pos;
                u_out = u_out.add(&GeneralizedDensity::piece(Some(Q::zero()), None, UPoly::new(xk.clone())));
            }
            if !neg.is_zero() {
                xk[k as usize] = neg;
                u_out = u_out.add(&GeneralizedDensity::piece(None, Some(Q::zero()), UPoly::new(xk)));
            }
            Ok(vec![(pi, FiberValue::Density(u_out.canonical()))])
        }
    }
}

/// `∫ fiber-monomial · base^{−shift_pow} · g^{(j)}(u)` over the block, where
/// `base` is `u` (two coordinates, `per = 2`) or the coordinate itself.
/// Returns the rational value and the power of π.
fn block_moment(b: &Block, fe: &[u32], shift_pow: i64, per: i64, j: u32) -> Result<(Q, i32)> {
    if b.vars.len() == 2 {
        let Some(ang) = angular_factor(fe[0], fe[1]) else {
            return Ok((Q::zero(), 1));
        };
        let p = (fe[0] + fe[1]) as i64 / 2 - if per == 2 { shift_pow } else { 0 };
        Ok((ang * bump_moment(p, j)?, 1))
    } else {
        let a = fe[0] as i64;
        // ∫_R ξ^a g^{(j)}(ξ²) dξ: odd a vanishes on the full line
        if !b.half && a % 2 == 1 {
            return Ok((Q::zero(), 0));
        }
        let sides = if b.half { Q::one() } else { Q::from_integer(2.into()) };
        if a % 2 == 0 {
            // ∫_0^∞ s^{2p} g^{(j)}(s²) ds is not determined by the rules
            return Err(IndexError::NonIntegrable(format!("∫ ξ^{a} g(ξ²) dξ depends on the cutoff")));
        }
        Ok((sides * bump_moment((a - 1) / 2, j)? * q(1, 2), 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::chart::{cotangent_circle, liouville, plane, rotation_one_form};
    use crate::cartan::par::{par_form, ParMode};

    #[test]
    fn minus_d_of_cutoff_on_a_ray() {
        let mut c = Chart::new("ray", vec![("xi", Domain::Ray)], vec!["X"]);
        c.orientation = 1;
        let chi = c.function(Expr::bump(sum_of_squares(c.nvars(), &[0]), 0));
        let f = c.d(&chi).neg();
        let r = fiber_integrate(&c, &f, &[0], 1).unwrap();
        assert_eq!(r.smooth().get(&0).cloned(), Some(Expr::one(c.nvars())));
    }

    #[test]
    fn par_of_rotation_form_gives_half_line() {
        let c = plane(1);
        let k = rotation_one_form(&c, 1);
        let p = par_form(&c, &k, &sum_of_squares(c.nvars(), &[0, 1]), ParMode::SymbolicLimit).unwrap();
        let r = fiber_integrate(&c, &p.par, &[0, 1], 1).unwrap();
        // (1/2iπ)∫ Par(κ) = 1_[0,∞): the integral is 2iπ·1_[0,∞)
        let u = r.density(1).unwrap();
        assert_eq!(u, GeneralizedDensity::piece(Some(Q::zero()), None, UPoly::constant(GaussQ::new(Q::zero(), Q::from_integer(2.into())))));
    }

    #[test]
    fn par_of_liouville_gives_full_line() {
        let c = cotangent_circle(1);
        let w = liouville(&c);
        let p = par_form(&c, &w, &sum_of_squares(c.nvars(), &[1]), ParMode::SymbolicLimit).unwrap();
        let r = fiber_integrate(&c, &p.par, &[0, 1], 1).unwrap();
        let u = r.density(1).unwrap();
        assert_eq!(u.as_full_line_poly(), Some(UPoly::constant(GaussQ::new(Q::zero(), Q::from_integer(2.into())))));
    }

    #[test]
    fn no_top_degree_integrates_to_zero() {
        let c = plane(1);
        let f = c.dx(0).mul_poly(&c.coord(1));
        assert!(fiber_integrate(&c, &f, &[0, 1], 1).unwrap().is_zero());
    }
}
