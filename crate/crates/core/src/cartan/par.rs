//! The forms `Par(ℓ) = χ + dχ·β(ℓ)` with generalized coefficients.
//!
//! With `Dℓ = Ω + a`, `Ω` a two-form and `a` a function linear in the
//! parameters, `e^{itDℓ} = e^{ita}·Σ_k (it)^k Ω^k/k!` and
//! `β = ∫_0^∞ −iℓ e^{itDℓ} dt = Σ_k c_k ℓ∧Ω^k·Osc(a, k)`, `c_k = −i·i^k/k!`.

use super::chart::Chart;
use super::expr::Expr;
use super::form::Form;
use crate::error::{IndexError, Result};
use crate::poly::MPoly;
use crate::scalar::{factorial, GaussQ, Q};

#[derive(Clone, Debug, PartialEq)]
pub enum ParMode {
    SymbolicLimit,
    Cutoff(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParResult {
    pub chi: Form,
    /// Scalar part `a` of `Dℓ`.
    pub phase: MPoly,
    /// Two-form part `Ω` of `Dℓ`.
    pub omega: Form,
    /// `c_k ℓ∧Ω^k`: `β` is `Σ_k moments[k]·∫ t^k e^{ita} dt`.
    pub moments: Vec<Form>,
    pub beta: Form,
    pub par: Form,
    pub mode: ParMode,
}

/// Normal form of `Dℓ` required by the symbolic reduction.
fn split_dl(c: &Chart, l: &Form) -> Result<(Form, MPoly)> {
    if l.parity() != Some(1) || l.terms.keys().any(|m| m.count_ones() != 1) {
        return Err(IndexError::ReductionUnavailable("ℓ must be a one-form".into()));
    }
    if !c.is_invariant(l) {
        return Err(IndexError::ReductionUnavailable("ℓ is not invariant".into()));
    }
    let dl = c.big_d(l);
    let omega = dl.degree_part(2);
    let a = dl.scalar_part().as_poly().ok_or_else(|| IndexError::ReductionUnavailable("Dℓ has transcendental coefficients".into()))?;
    let pv = c.param_vars();
    for e in omega.terms.values() {
        let p = e.as_poly().ok_or_else(|| IndexError::ReductionUnavailable("dℓ has transcendental coefficients".into()))?;
        if p.terms.keys().any(|ex| pv.iter().any(|&v| ex[v] > 0)) {
            return Err(IndexError::ReductionUnavailable("dℓ depends on the parameters".into()));
        }
    }
    if a.terms.keys().any(|ex| pv.iter().map(|&v| ex[v]).sum::<u32>() != 1) {
        return Err(IndexError::ReductionUnavailable("ℓ(VX) is not linear in X".into()));
    }
    Ok((omega, a))
}

fn c_k(k: usize) -> GaussQ {
    let f = Q::from_integer(factorial(k as u64));
    -(GaussQ::i() * GaussQ::i_pow(k as i64)).scale(&(Q::from_integer(1.into()) / f))
}

/// `Par(ℓ)` for the cutoff `χ = g(chi_arg)`.
pub fn par_form(c: &Chart, l: &Form, chi_arg: &MPoly, mode: ParMode) -> Result<ParResult> {
    let (omega, a) = split_dl(c, l)?;
    let chi = c.function(Expr::bump(chi_arg.clone(), 0));
    let mut moments = vec![];
    let mut beta = c.zero_form();
    let mut lk = l.clone();
    let mut k = 0;
    while !lk.is_zero() {
        let m = lk.scale(&c_k(k));
        beta = beta.add(&m.mul_expr(&Expr::osc(a.clone(), k as u32)));
        moments.push(m);
        lk = lk.wedge(&omega);
        k += 1;
    }
    let par = chi.add(&c.d(&chi).wedge(&beta));
    Ok(ParResult { chi, phase: a, omega, moments, beta, par, mode })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParCertificate {
    pub primitive: Form,
    pub residual: Form,
}

impl ParCertificate {
    pub fn verified(&self) -> bool {
        self.residual.is_zero()
    }
}

/// `Par(ℓ) − 1 = D[(χ − 1)β]`, checked in the normal form of the
/// oscillatory atoms.
pub fn par_equals_one_certificate(c: &Chart, l: &Form, chi_arg: &MPoly) -> Result<ParCertificate> {
    let p = par_form(c, l, chi_arg, ParMode::SymbolicLimit)?;
    let one = Form::one(c.nvars(), c.dim());
    let primitive = p.chi.sub(&one).wedge(&p.beta);
    let residual = p.par.sub(&one).sub(&c.big_d(&primitive)).reduce_osc();
    Ok(ParCertificate { primitive, residual })
}

/// `Par(ℓ, χ₁) − Par(ℓ, χ₂) = D[(χ₁ − χ₂)β]`.
pub fn bump_independence(c: &Chart, l: &Form, chi1: &MPoly, chi2: &MPoly) -> Result<ParCertificate> {
    let p1 = par_form(c, l, chi1, ParMode::SymbolicLimit)?;
    let p2 = par_form(c, l, chi2, ParMode::SymbolicLimit)?;
    let primitive = p1.chi.sub(&p2.chi).wedge(&p1.beta);
    let residual = p1.par.sub(&p2.par).sub(&c.big_d(&primitive)).reduce_osc();
    Ok(ParCertificate { primitive, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::chart::{cotangent_circle, liouville, plane, rotation_one_form};
    use crate::poly::sum_of_squares;

    #[test]
    fn par_of_liouville_is_one_up_to_boundary() {
        let c = cotangent_circle(1);
        let w = liouville(&c);
        let cert = par_equals_one_certificate(&c, &w, &sum_of_squares(c.nvars(), &[1])).unwrap();
        assert!(cert.verified(), "{}", c.fmt_form(&cert.residual));
    }

    #[test]
    fn par_of_rotation_form_is_one_up_to_boundary() {
        let c = plane(1);
        let k = rotation_one_form(&c, 1);
        let cert = par_equals_one_certificate(&c, &k, &sum_of_squares(c.nvars(), &[0, 1])).unwrap();
        assert!(cert.verified(), "{}", c.fmt_form(&cert.residual));
    }

    #[test]
    fn constant_cutoff_gives_one() {
        // χ = g(0) has dχ = 0, so Par = χ.
        let c = plane(1);
        let k = rotation_one_form(&c, 1);
        let p = par_form(&c, &k, &MPoly::zero(c.nvars()), ParMode::SymbolicLimit).unwrap();
        assert_eq!(p.par, p.chi);
    }
}
