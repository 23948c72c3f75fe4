//! Chern characters with support for Clifford-type symbols on `C^m`.
//!
//! The bundle is `ΛC^m` with basis `e_I`, the symbol is
//! `v = Σ_j m(z_j) − ι(z̄_j)` (so `v² = −|z|²`), the superconnection is
//! `A_t = d + t·v` and the equivariant curvature is
//! `F(t) = −t²|z|² + t·dv + μ` with `μ e_I = i·w_I·X e_I`.
//! Then `Ch(t) = Str e^{F(t)}`, `η(t) = −Str(v e^{F(t)})` and
//! `∂_t Ch + Dη = 0`.

use super::chart::{planes, Chart};
use super::expr::{Atom, Expr};
use super::form::Form;
use super::supermatrix::{exterior_parity, insertion_sign, SuperEntry, SuperMatrix};
use crate::distributions::germ::{exact_or_ball, Taylor};
use crate::distributions::group::{GroupElement, Weight};
use crate::distributions::series::Series;
use crate::distributions::smooth::SmoothFactor;
use crate::error::{IndexError, Result};
use crate::poly::MPoly;
use crate::scalar::{factorial, GaussQ, Q};
use num::{Signed, Zero};

#[derive(Clone, Debug, PartialEq)]
pub struct CliffordSymbolData {
    pub weights: Vec<i64>,
    /// Odd endomorphism of `ΛC^m` as a `2^m × 2^m` table (row = target),
    /// over the variables of `chart()`. `None` is Clifford multiplication.
    pub odd: Option<Vec<Vec<MPoly>>>,
}

impl CliffordSymbolData {
    pub fn new(weights: Vec<i64>) -> Self {
        CliffordSymbolData { weights, odd: None }
    }
    pub fn chart(&self) -> Chart {
        planes(&self.weights)
    }
    pub fn rank(&self) -> usize {
        1 << self.weights.len()
    }
}

fn z(c: &Chart, j: usize, conj: bool) -> MPoly {
    let y = c.coord(2 * j + 1).scale(&GaussQ::i());
    if conj {
        c.coord(2 * j).sub(&y)
    } else {
        c.coord(2 * j).add(&y)
    }
}

pub fn clifford_entries(c: &Chart, m: usize) -> Vec<Vec<MPoly>> {
    let n = 1usize << m;
    let mut e = vec![vec![MPoly::zero(c.nvars()); n]; n];
    for i in 0..n as u64 {
        for j in 0..m {
            let bit = 1u64 << j;
            let s = GaussQ::int(insertion_sign(i, j));
            let (target, coef) = if i & bit == 0 { (i | bit, z(c, j, false).scale(&s)) } else { (i ^ bit, z(c, j, true).scale(&-s)) };
            let cell = &mut e[target as usize][i as usize];
            *cell = cell.add(&coef);
        }
    }
    e
}

/// `q` with `v² = −q·Id`, or `NotCliffordType`.
pub fn clifford_square(e: &[Vec<MPoly>], parity: &[u32]) -> Result<MPoly> {
    let n = parity.len();
    if e.len() != n || e.iter().any(|r| r.len() != n) {
        return Err(IndexError::NotCliffordType(format!("expected a {n}×{n} table")));
    }
    let nv = e[0][0].nvars;
    for i in 0..n {
        for k in 0..n {
            if parity[i] == parity[k] && !e[i][k].is_zero() {
                return Err(IndexError::NotCliffordType(format!("entry ({i}, {k}) preserves the grading")));
            }
        }
    }
    let sq = |i: usize, k: usize| (0..n).fold(MPoly::zero(nv), |acc, j| acc.add(&e[i][j].mul(&e[j][k])));
    let q = sq(0, 0).neg();
    for i in 0..n {
        for k in 0..n {
            let want = if i == k { q.neg() } else { MPoly::zero(nv) };
            if sq(i, k) != want {
                return Err(IndexError::NotCliffordType(format!("v² is not scalar at ({i}, {k})")));
            }
        }
    }
    if q.is_zero() {
        return Err(IndexError::NotCliffordType("v² = 0".into()));
    }
    Ok(q)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChernFamily {
    pub chart: Chart,
    pub order: u32,
    pub q: MPoly,
    /// `Ch(t)`, with the Gaussian factor `e^{−t²q}` as an atom.
    pub ch: Form,
    pub eta: Form,
    /// `Ch(0) = Str e^{μ}`.
    pub ch0: Form,
    /// `β = ∫_0^∞ η dt = beta_numer / q^beta_pow`.
    pub beta_numer: Form,
    pub beta_pow: u32,
    /// `D Ch(t)` mod `X^{N+1}`.
    pub closedness: Form,
    /// `∂_t Ch + Dη` mod `X^{N+1}`.
    pub transgression: Form,
    /// `q^{P+1}(Dβ − Ch(0))` mod `X^{N+1}`; vanishing makes `χ Ch(0) + dχ β` closed.
    pub beta_residual: Form,
    /// `∫_{C^m} Ch(1)` in the complex orientation, as `π^integral_pi_pow·series(X)`.
    pub integral: Series<GaussQ>,
    pub integral_pi_pow: i32,
}

impl ChernFamily {
    pub fn verified(&self) -> bool {
        self.closedness.is_zero() && self.transgression.is_zero() && self.beta_residual.is_zero()
    }
}

fn gq(n: i64, d: i64) -> GaussQ {
    GaussQ::frac(n, d)
}

pub fn chern_transgression(data: &CliffordSymbolData, order: u32) -> Result<ChernFamily> {
    let c = data.chart();
    let m = data.weights.len();
    let parity = exterior_parity(m);
    let nv = c.nvars();
    let entries = match &data.odd {
        Some(e) => {
            if e.iter().flatten().any(|p| p.nvars != nv) {
                return Err(IndexError::NotCliffordType("entries use the wrong variable count".into()));
            }
            e.clone()
        }
        None => clifford_entries(&c, m),
    };
    let q = clifford_square(&entries, &parity)?;
    let proto = c.zero_form();
    let mut v = SuperMatrix::zero(parity.clone(), &proto);
    for (i, row) in entries.iter().enumerate() {
        for (k, p) in row.iter().enumerate() {
            v.set(i, k, c.poly_function(p.clone()));
        }
    }
    let mut mu = SuperMatrix::zero(parity.clone(), &proto);
    for i in 0..data.rank() {
        let wi: i64 = (0..m).filter(|j| i & (1 << j) != 0).map(|j| data.weights[j]).sum();
        mu.set(i, i, c.poly_function(c.param(0).scale(&(GaussQ::i() * GaussQ::int(wi)))));
    }
    let tv = c.t_var();
    let t = MPoly::var(nv, tv);
    let xs = c.param_vars();
    let trunc = |f: &Form| f.truncate(&xs, order);
    let mt = v.map(|f| c.d(f).mul_poly(&t)).add(&mu);
    let e = mt.exp(trunc, order as usize + 2 * m + 2);
    let gauss = Expr::gauss(q.mul(&t.pow(2)));
    let str_e = e.supertrace();
    let ch = str_e.mul_expr(&gauss);
    let eta_poly = v.mul(&e).supertrace().neg().truncate(&xs, order);
    let eta = eta_poly.mul_expr(&gauss);
    let ch0 = str_e.map(|x| x.substitute(tv, &MPoly::zero(nv)));

    let closedness = c.big_d(&ch).truncate(&xs, order);
    let transgression = ch.map(|x| x.derivative(tv)).add(&c.big_d(&eta)).truncate(&xs, order);

    // ∫_0^∞ t^k e^{−t²q} dt = ((k−1)/2)!/(2 q^{(k+1)/2}) for odd k
    let mut pieces: Vec<(u64, MPoly, u32)> = vec![];
    for (mask, ex) in &eta_poly.terms {
        let p = ex.as_poly().ok_or_else(|| IndexError::ReductionUnavailable("η has transcendental coefficients".into()))?;
        for (ex, coef) in &p.terms {
            let k = ex[tv];
            if k % 2 == 0 {
                return Err(IndexError::ReductionUnavailable(format!("even t-moment t^{k} in η")));
            }
            let mut ex0 = ex.clone();
            ex0[tv] = 0;
            let h = (k - 1) / 2;
            let f = GaussQ::real(Q::from_integer(factorial(h as u64))) * gq(1, 2);
            pieces.push((*mask, MPoly::monomial(ex0, coef * &f), h + 1));
        }
    }
    let beta_pow = pieces.iter().map(|p| p.2).max().unwrap_or(0);
    let mut beta_numer = c.zero_form();
    for (mask, p, pw) in pieces {
        beta_numer.add_term(mask, Expr::poly(p.mul(&q.pow(beta_pow - pw))));
    }
    let dq = c.d(&c.poly_function(q.clone()));
    let beta_residual = c
        .big_d(&beta_numer)
        .mul_poly(&q)
        .sub(&dq.wedge(&beta_numer).scale(&GaussQ::int(beta_pow as i64)))
        .sub(&ch0.mul_poly(&q.pow(beta_pow + 1)))
        .truncate(&xs, order);

    let ch1 = ch.map(|x| x.substitute(tv, &MPoly::one(nv)));
    let (val, pi) = gaussian_integral(&c, &ch1)?;
    let mut integral = Series::zero(1, order);
    let xv = c.param_var(0);
    for (ex, coef) in &val.terms {
        integral.insert(vec![ex[xv]], coef.clone());
    }

    Ok(ChernFamily {
        chart: c,
        order,
        q,
        ch,
        eta,
        ch0,
        beta_numer,
        beta_pow,
        closedness,
        transgression,
        beta_residual,
        integral,
        integral_pi_pow: pi,
    })
}

fn double_factorial_odd(a: u32) -> u64 {
    // (a−1)!! for even a
    (1..a as u64).step_by(2).product::<u64>().max(1)
}

/// Integral over all coordinates of a chart built by `planes`, for top
/// coefficients `P·e^{−Σ s_j |z_j|²}`: each plane contributes
/// `∫ x^a y^b e^{−s r²} = π (a−1)!!(b−1)!!/(2^p s^{p+1})`, `p = (a+b)/2`.
pub fn gaussian_integral(c: &Chart, f: &Form) -> Result<(MPoly, i32)> {
    let m = c.dim() / 2;
    let nv = c.nvars();
    let top = (1u64 << c.dim()) - 1;
    let coef = f.coefficient(top);
    let mut out = MPoly::zero(nv);
    for (key, p) in &coef.terms {
        let arg = match key.as_slice() {
            [(Atom::Gauss { arg }, 1)] => arg,
            _ => return Err(IndexError::NonIntegrable("top coefficient is not Gaussian".into())),
        };
        let mut s = vec![];
        for j in 0..m {
            let mut ex = vec![0; nv];
            ex[2 * j] = 2;
            let sx = arg.terms.get(&ex).cloned().unwrap_or_else(GaussQ::zero);
            ex[2 * j] = 0;
            ex[2 * j + 1] = 2;
            let sy = arg.terms.get(&ex).cloned().unwrap_or_else(GaussQ::zero);
            if sx != sy || !sx.is_real() || !sx.re.is_positive() {
                return Err(IndexError::NonIntegrable(format!("Gaussian is not radial and decaying in plane {j}")));
            }
            s.push(sx.re);
        }
        let radial = (0..m).fold(MPoly::zero(nv), |acc, j| {
            acc.add(&c.coord(2 * j).pow(2).add(&c.coord(2 * j + 1).pow(2)).scale(&GaussQ::real(s[j].clone())))
        });
        if &radial != arg {
            return Err(IndexError::NonIntegrable("Gaussian exponent has cross terms".into()));
        }
        for (ex, cf) in &p.terms {
            let mut val = cf.clone();
            let mut rest = ex.clone();
            let mut zero = false;
            for j in 0..m {
                let (a, b) = (ex[2 * j], ex[2 * j + 1]);
                if a % 2 == 1 || b % 2 == 1 {
                    zero = true;
                    break;
                }
                let pp = (a + b) / 2;
                let num = Q::from_integer((double_factorial_odd(a) * double_factorial_odd(b)).into());
                let den = Q::from_integer(num::BigInt::from(2).pow(pp)) * num::pow(s[j].clone(), pp as usize + 1);
                val = val.scale(&(num / den));
                rest[2 * j] = 0;
                rest[2 * j + 1] = 0;
            }
            if !zero {
                out.add_term(rest, val.scale(&Q::from_integer(c.orientation.into())));
            }
        }
    }
    Ok((out, m as i32))
}

/// `Π_j ∫_C c(σ_{w_j})`, the expected value of `ChernFamily::integral`.
pub fn expected_chern_integral(weights: &[i64], order: u32) -> Result<(Series<GaussQ>, i32)> {
    let mut f = SmoothFactor::one();
    for &w in weights {
        f = f.mul(&if w == 0 { SmoothFactor::two_i_pi(1) } else { SmoothFactor::chern_line(w) });
    }
    f.taylor(order)
}

impl SuperEntry for Taylor {
    fn zero_like(&self) -> Self {
        Taylor::zero(self.nvars(), self.order())
    }
    fn one_like(&self) -> Self {
        Taylor::constant(self.nvars(), self.order(), GaussQ::one())
    }
    fn add(&self, o: &Self) -> Self {
        Taylor::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Taylor::mul(self, o)
    }
    fn twist(&self) -> Self {
        self.clone()
    }
    fn scale_ratio(&self, n: i64, d: i64) -> Self {
        self.scale(&gq(n, d))
    }
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
}

fn character_value(s: &GroupElement, w: i64, order: u32) -> Taylor {
    let nv = s.torus.len();
    match exact_or_ball(s, &Weight::torus(vec![w; nv.min(1)])) {
        Ok(c) => Taylor::constant(nv, order, c),
        Err(b) => Taylor::Numeric(Series::constant(nv, order, b)),
    }
}

fn char_series(s: &GroupElement, w: i64, order: u32) -> Taylor {
    crate::distributions::germ::character_series(s, &Weight::torus(vec![w]), order)
}

fn check_circle(s: &GroupElement) -> Result<()> {
    if s.torus.len() != 1 || !s.orders.is_empty() {
        return Err(IndexError::GroupMismatch(format!("{s} is not a circle element")));
    }
    Ok(())
}

/// `Ch_s = Π_j (1 − s^{w_j} e^{i w_j Y})` at an isolated fixed point of `C^m`.
pub fn bouquet_chern(s: &GroupElement, weights: &[i64], order: u32) -> Result<Taylor> {
    check_circle(s)?;
    let one = Taylor::constant(1, order, GaussQ::one());
    Ok(weights.iter().fold(one.clone(), |acc, &w| acc.mul(&one.add(&char_series(s, w, order).scale(&GaussQ::int(-1))))))
}

/// The same germ as `Str(s^E e^{μ})` on `ΛC^m`.
pub fn bouquet_chern_supertrace(s: &GroupElement, weights: &[i64], order: u32) -> Result<Taylor> {
    check_circle(s)?;
    let m = weights.len();
    let proto = Taylor::zero(1, order);
    let parity = exterior_parity(m);
    let mut mu = SuperMatrix::zero(parity.clone(), &proto);
    let mut se = SuperMatrix::zero(parity, &proto);
    for i in 0..1usize << m {
        let wi: i64 = (0..m).filter(|j| i & (1 << j) != 0).map(|j| weights[j]).sum();
        mu.set(i, i, Taylor::Exact(Series::linear(order, &[GaussQ::i() * GaussQ::int(wi)])));
        se.set(i, i, character_value(s, wi, order));
    }
    Ok(se.mul(&mu.exp(|x| x.clone(), order as usize + 1)).supertrace())
}

/// Real determinant `D_s(N) = Π_j (1 − s^{w_j}e^{iw_jY})(1 − s^{−w_j}e^{−iw_jY})`.
pub fn normal_determinant(s: &GroupElement, weights: &[i64], order: u32) -> Result<Taylor> {
    let neg: Vec<i64> = weights.iter().map(|w| -w).collect();
    Ok(bouquet_chern(s, weights, order)?.mul(&bouquet_chern(s, &neg, order)?))
}

/// Largest coefficient gap between `Ch_{s·e^S}(Y)` and `Ch_s(S + Y)` for
/// `S = 2π·delta`, both truncated at `order`.
pub fn bouquet_compatibility(s: &GroupElement, delta: &Q, weights: &[i64], order: u32) -> Result<f64> {
    let shifted = bouquet_chern(&s.rotate(delta), weights, order)?.to_ball();
    // re-expand from a higher order so the truncation error stays below the comparison
    let base = bouquet_chern(s, weights, order + 24)?;
    let moved = base.reexpand(2.0 * std::f64::consts::PI * crate::scalar::q_to_f64(delta), order);
    let mut worst: f64 = 0.0;
    for k in 0..=order {
        let a = shifted.coeff(&[k]);
        let b = moved.coeff(&[k]);
        worst = worst.max((a.mid - b.mid).norm() - a.rad - b.rad);
    }
    Ok(worst.max(0.0))
}

/// Catalog models for the fixed set `M(s)` and its normal bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedSetModel {
    /// `S¹` with the free rotation action.
    Circle,
    /// `C^m` with circle weights.
    Complex { weights: Vec<i64> },
    /// `R^d` with `Z/2` acting by `−1`.
    RealSign { dim: usize },
}

impl FixedSetModel {
    pub fn parse(name: &str, weights: &[i64]) -> Result<Self> {
        match name {
            "circle" => Ok(FixedSetModel::Circle),
            "complex" => Ok(FixedSetModel::Complex { weights: weights.to_vec() }),
            "real-sign" => Ok(FixedSetModel::RealSign { dim: weights.first().copied().unwrap_or(1).max(0) as usize }),
            _ => Err(IndexError::UnknownFixedSetModel(name.into())),
        }
    }
}

/// `Λ_s = (2iπ)^{−dim M(s)}·Â(M(s))²/D_s(N)` as `π^pi_pow·taylor`.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaFactor {
    pub fixed_dim: usize,
    pub pi_pow: i32,
    pub taylor: Taylor,
}

fn two_i_pow(k: i64) -> GaussQ {
    (GaussQ::int(2) * GaussQ::i()).pow(k)
}

/// `None` when `M(s)` is empty.
pub fn lambda_factor(s: &GroupElement, model: &FixedSetModel, order: u32) -> Result<Option<LambdaFactor>> {
    match model {
        FixedSetModel::Circle => {
            check_circle(s)?;
            if !s.is_identity() {
                return Ok(None);
            }
            Ok(Some(LambdaFactor { fixed_dim: 1, pi_pow: -1, taylor: Taylor::constant(1, order, two_i_pow(-1)) }))
        }
        FixedSetModel::Complex { weights } => {
            check_circle(s)?;
            let (fixed, normal): (Vec<i64>, Vec<i64>) = weights.iter().partition(|&&w| s.phase(&Weight::torus(vec![w])).is_zero());
            let mut t = Taylor::constant(1, order, two_i_pow(-2 * fixed.len() as i64));
            for &w in &fixed {
                if w != 0 {
                    let (a2, _) = SmoothFactor::todd(w).mul(&SmoothFactor::todd(-w)).taylor(order)?;
                    t = t.mul(&Taylor::Exact(a2));
                }
            }
            if !normal.is_empty() {
                let d = normal_determinant(s, &normal, order)?;
                let inv = d.inv().ok_or_else(|| IndexError::GermSingular(format!("D_s vanishes at {s}")))?;
                t = t.mul(&inv);
            }
            Ok(Some(LambdaFactor { fixed_dim: 2 * fixed.len(), pi_pow: -2 * fixed.len() as i32, taylor: t }))
        }
        FixedSetModel::RealSign { dim } => {
            if !s.torus.is_empty() || s.orders != [2] {
                return Err(IndexError::GroupMismatch(format!("{s} is not an element of Z/2")));
            }
            if s.is_identity() {
                let d = *dim as i64;
                Ok(Some(LambdaFactor { fixed_dim: *dim, pi_pow: -(*dim as i32), taylor: Taylor::constant(0, order, two_i_pow(-d)) }))
            } else {
                let c = GaussQ::real(Q::new(1.into(), num::BigInt::from(2).pow(*dim as u32)));
                Ok(Some(LambdaFactor { fixed_dim: 0, pi_pow: 0, taylor: Taylor::constant(0, order, c) }))
            }
        }
    }
}

/// Exact `D_s` for the `Z/2` model: `2^d` at the nontrivial element.
pub fn real_sign_determinant(dim: usize) -> GaussQ {
    GaussQ::int(1 << dim)
}

pub fn ball_gap(a: &Taylor, b: &Taylor) -> f64 {
    let (a, b) = (a.to_ball(), b.to_ball());
    let mut keys: Vec<&Vec<u32>> = a.terms.keys().chain(b.terms.keys()).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .map(|k| {
            let (x, y) = (a.coeff(k), b.coeff(k));
            ((x.mid - y.mid).norm() - x.rad - y.rad).max(0.0)
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn clifford_square_is_scalar() {
        let d = CliffordSymbolData::new(vec![1, 2]);
        let c = d.chart();
        let e = clifford_entries(&c, 2);
        let qq = clifford_square(&e, &exterior_parity(2)).unwrap();
        let want = crate::poly::sum_of_squares(c.nvars(), &[0, 1, 2, 3]);
        assert_eq!(qq, want);
    }

    #[test]
    fn non_clifford_rejected() {
        // dropping one matrix entry breaks v² = −|z|²
        let mut d = CliffordSymbolData::new(vec![1, 1]);
        let c = d.chart();
        let mut e = clifford_entries(&c, 2);
        e[1][0] = MPoly::zero(c.nvars());
        d.odd = Some(e);
        assert!(matches!(chern_transgression(&d, 2), Err(IndexError::NotCliffordType(_))));
    }

    #[test]
    fn transgression_identities_one_line() {
        let f = chern_transgression(&CliffordSymbolData::new(vec![1]), 4).unwrap();
        assert!(f.closedness.is_zero(), "{}", f.chart.fmt_form(&f.closedness));
        assert!(f.transgression.is_zero(), "{}", f.chart.fmt_form(&f.transgression));
        assert!(f.beta_residual.is_zero(), "{}", f.chart.fmt_form(&f.beta_residual));
    }

    #[test]
    fn gaussian_integral_matches_line_factor() {
        for w in [1, 2, -1] {
            let f = chern_transgression(&CliffordSymbolData::new(vec![w]), 5).unwrap();
            let (want, pi) = expected_chern_integral(&[w], 5).unwrap();
            assert_eq!(f.integral_pi_pow, pi);
            assert_eq!(f.integral, want, "w = {w}");
        }
    }

    #[test]
    fn two_lines() {
        let f = chern_transgression(&CliffordSymbolData::new(vec![1, -2]), 3).unwrap();
        assert!(f.verified());
        let (want, _) = expected_chern_integral(&[1, -2], 3).unwrap();
        assert_eq!(f.integral, want);
    }

    #[test]
    fn bouquet_routes_agree() {
        for turn in [q(1, 2), q(1, 4), q(1, 3), q(2, 5)] {
            let s = GroupElement::circle(turn);
            let a = bouquet_chern(&s, &[1, 3], 6).unwrap();
            let b = bouquet_chern_supertrace(&s, &[1, 3], 6).unwrap();
            assert!(ball_gap(&a, &b) < 1e-12);
        }
    }

    #[test]
    fn point_bouquet_constant_terms() {
        let s = GroupElement::circle(q(1, 2));
        let ch = bouquet_chern(&s, &[1], 3).unwrap();
        assert_eq!(ch.constant_term().mid.re, 2.0);
        let d = normal_determinant(&s, &[1], 3).unwrap();
        assert_eq!(d.constant_term().mid.re, 4.0);
    }

    #[test]
    fn compatibility_under_rotation() {
        let s = GroupElement::circle(q(1, 3));
        assert!(bouquet_compatibility(&s, &q(1, 64), &[1, 2], 8).unwrap() < 1e-9);
    }

    #[test]
    fn lambda_catalog() {
        let id = GroupElement::circle(q(0, 1));
        let l = lambda_factor(&id, &FixedSetModel::Circle, 4).unwrap().unwrap();
        assert_eq!(l.pi_pow, -1);
        assert!(lambda_factor(&GroupElement::circle(q(1, 2)), &FixedSetModel::Circle, 4).unwrap().is_none());
        let l = lambda_factor(&id, &FixedSetModel::Complex { weights: vec![1] }, 4).unwrap().unwrap();
        assert_eq!(l.fixed_dim, 2);
        let minus = crate::distributions::group::GroupDescriptor::cyclic_group(2).diagonal(&q(1, 2)).unwrap();
        let l = lambda_factor(&minus, &FixedSetModel::RealSign { dim: 2 }, 4).unwrap().unwrap();
        assert_eq!(l.taylor, Taylor::constant(0, 4, GaussQ::frac(1, 4)));
        assert!(matches!(FixedSetModel::parse("torus", &[]), Err(IndexError::UnknownFixedSetModel(_))));
    }
}
