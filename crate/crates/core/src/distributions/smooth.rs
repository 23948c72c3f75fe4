//! Analytic multipliers `c·π^p·(iθ)^a·Π_m (1−e^{imθ})^{e_m}·e^{ibθ}` on the
//! circle's Lie algebra, and their action on densities.

use super::density::{convolve, deconvolve_interval, GeneralizedDensity};
use super::series::{exp_i_linear, Series};
use crate::error::{IndexError, Result};
use crate::poly::UPoly;
use crate::scalar::{GaussQ, Q};
use num::{Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothFactor {
    pub coeff: GaussQ,
    pub pi_pow: i32,
    pub itheta_pow: i32,
    pub exps: BTreeMap<i64, i32>,
    pub shift: Q,
}

impl SmoothFactor {
    pub fn one() -> Self {
        Self::constant(GaussQ::one(), 0)
    }
    pub fn constant(c: GaussQ, pi_pow: i32) -> Self {
        SmoothFactor { coeff: c, pi_pow, itheta_pow: 0, exps: BTreeMap::new(), shift: Q::zero() }
    }
    /// `(2iπ)^k`.
    pub fn two_i_pi(k: i32) -> Self {
        Self::constant(GaussQ::int(2).pow(k as i64) * GaussQ::i_pow(k as i64), k)
    }
    pub fn itheta(k: i32) -> Self {
        SmoothFactor { itheta_pow: k, ..Self::one() }
    }
    /// `(1 − e^{imθ})^e`, stored with `m > 0` through
    /// `1 − e^{−imθ} = −e^{−imθ}(1 − e^{imθ})`.
    pub fn one_minus_exp(m: i64, e: i32) -> Self {
        assert!(m != 0);
        let mut s = Self::one();
        s.exps.insert(m.abs(), e);
        if m < 0 {
            s.coeff = GaussQ::int(-1).pow(e as i64);
            s.shift = Q::from_integer((m * e as i64).into());
        }
        s
    }
    /// `e^{ibθ}`.
    pub fn exp_shift(b: Q) -> Self {
        SmoothFactor { shift: b, ..Self::one() }
    }
    /// Todd class of a line with weight `w`: `iwθ/(e^{iwθ} − 1)`.
    pub fn todd(w: i64) -> Self {
        assert!(w != 0);
        SmoothFactor::constant(GaussQ::int(-w), 0).mul(&Self::itheta(1)).mul(&Self::one_minus_exp(w, -1))
    }
    /// `Â(C_w) = Todd_{−w}·e^{−iwθ/2}`.
    pub fn a_hat(w: i64) -> Self {
        Self::todd(-w).mul(&Self::exp_shift(Q::new((-w).into(), 2.into())))
    }
    /// `∫_C c(σ)` for the Bott symbol on a line of weight `w`:
    /// `2iπ (e^{iwθ} − 1)/(iwθ)`.
    pub fn chern_line(w: i64) -> Self {
        Self::two_i_pi(1).mul(&Self::todd(w).inv())
    }

    pub fn mul(&self, o: &SmoothFactor) -> SmoothFactor {
        let mut exps = self.exps.clone();
        for (m, e) in &o.exps {
            let v = exps.entry(*m).or_insert(0);
            *v += e;
            if *v == 0 {
                exps.remove(m);
            }
        }
        SmoothFactor {
            coeff: &self.coeff * &o.coeff,
            pi_pow: self.pi_pow + o.pi_pow,
            itheta_pow: self.itheta_pow + o.itheta_pow,
            exps,
            shift: &self.shift + &o.shift,
        }
    }
    pub fn inv(&self) -> SmoothFactor {
        SmoothFactor {
            coeff: self.coeff.inv().expect("nonzero smooth factor"),
            pi_pow: -self.pi_pow,
            itheta_pow: -self.itheta_pow,
            exps: self.exps.iter().map(|(m, e)| (*m, -e)).collect(),
            shift: -&self.shift,
        }
    }
    pub fn scale(&self, c: &GaussQ) -> SmoothFactor {
        SmoothFactor { coeff: &self.coeff * c, ..self.clone() }
    }

    /// Order of vanishing at `θ = 0`.
    pub fn theta_order(&self) -> i32 {
        self.itheta_pow + self.exps.values().sum::<i32>()
    }

    /// Taylor series in `θ` to `order`, without the `π^p` factor, which is
    /// returned alongside.
    pub fn taylor(&self, order: u32) -> Result<(Series<GaussQ>, i32)> {
        let a = self.theta_order();
        if a < 0 {
            return Err(IndexError::GermSingular(format!("pole of order {} at θ = 0", -a)));
        }
        let mut s = Series::constant(1, order, self.coeff.clone());
        // (iθ)^a
        let itheta = Series::linear(order, &[GaussQ::i()]);
        s = s.mul(&itheta.powi(a as i64).unwrap());
        // (1 − e^{imθ}) = (−m)(iθ)·E_m(θ), E_m = Σ (imθ)^k/(k+1)!
        for (m, e) in &self.exps {
            let em = e_series(*m, order);
            s = s.mul(&em.powi(*e as i64).unwrap()).scale(&GaussQ::int(-m).pow(*e as i64));
        }
        if !self.shift.is_zero() {
            let lin = Series::linear(order, &[GaussQ::i() * GaussQ::real(self.shift.clone())]);
            s = s.mul(&lin.exp_nilpotent());
        }
        Ok((s, self.pi_pow))
    }

    /// `v` with `FT(v) = self·FT(u)` near `θ = 0`.
    pub fn apply(&self, u: &GeneralizedDensity) -> Result<GeneralizedDensity> {
        if self.pi_pow != 0 {
            return Err(IndexError::NotRepresentable(format!("multiplier carries π^{}", self.pi_pow)));
        }
        if let Some(p) = u.as_full_line_poly() {
            return self.apply_taylor(&p);
        }
        let mut v = u.translate(&self.shift).canonical();
        let mut a = self.itheta_pow;
        let mut exps = self.exps.clone();
        // (1 − e^{imθ})/(iθ) = −FT(1_[0,m]) with m > 0.
        let interval = |m: i64| -> (Q, Q, GaussQ) { (Q::zero(), Q::from_integer(m.into()), GaussQ::int(-1)) };
        for (m, e) in exps.iter_mut() {
            while *e > 0 && a < 0 {
                let (lo, hi, sign) = interval(*m);
                v = convolve(&v, &GeneralizedDensity::indicator(lo, hi))?.scale(&sign);
                *e -= 1;
                a += 1;
            }
            while *e < 0 && a > 0 {
                let (lo, hi, sign) = interval(*m);
                v = deconvolve_interval(&v, &lo, &hi)?.scale(&sign);
                *e += 1;
                a -= 1;
            }
        }
        for (m, e) in &exps {
            if *e < 0 {
                return Err(IndexError::NotRepresentable(format!("bare inverse of 1 − e^{{i{m}θ}}")));
            }
            for _ in 0..*e {
                let diff = GeneralizedDensity::delta0().add(&GeneralizedDensity::atom(Q::from_integer((*m).into()), GaussQ::int(-1)));
                v = convolve(&v, &diff)?;
            }
        }
        if a < 0 {
            return Err(IndexError::NotRepresentable("antiderivative of a density".into()));
        }
        v = v.times_itheta_pow(a as u32)?;
        Ok(v.scale(&self.coeff))
    }

    /// `P(θ)·FT(p) = FT(P(i∂)p)` for a polynomial density on the whole line.
    fn apply_taylor(&self, p: &UPoly) -> Result<GeneralizedDensity> {
        let deg = p.degree().unwrap_or(0) as u32;
        let (s, _) = self.taylor(deg)?;
        let mut out = UPoly::zero();
        let mut dk = p.clone();
        for k in 0..=deg {
            let c = s.coeff(&[k]);
            out = out.add(&dk.scale(&(c * GaussQ::i_pow(k as i64))));
            dk = dk.derivative();
        }
        Ok(GeneralizedDensity::piece(None, None, out))
    }
}

/// `E_m(θ) = (e^{imθ} − 1)/(imθ)`.
fn e_series(m: i64, order: u32) -> Series<GaussQ> {
    let full = exp_i_linear(&[m], order + 1);
    let mut s = Series::zero(1, order);
    let im = GaussQ::i() * GaussQ::int(m);
    for k in 0..=order {
        s.insert(vec![k], &full.coeff(&[k + 1]) / &im);
    }
    s
}

impl fmt::Display for SmoothFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coeff)?;
        if self.pi_pow != 0 {
            write!(f, "·π^{}", self.pi_pow)?;
        }
        if self.itheta_pow != 0 {
            write!(f, "·(iθ)^{}", self.itheta_pow)?;
        }
        for (m, e) in &self.exps {
            write!(f, "·(1-e^{{{m}iθ}})^{e}")?;
        }
        if !self.shift.is_zero() {
            let s = if self.shift.is_negative() { "" } else { "+" };
            write!(f, "·e^{{{s}{}iθ}}", crate::scalar::fmt_q(&self.shift))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    #[test]
    fn todd_taylor_starts_at_one() {
        let (s, p) = SmoothFactor::todd(1).taylor(3).unwrap();
        assert_eq!(p, 0);
        assert_eq!(s.coeff(&[0]), GaussQ::one());
        // iθ/(e^{iθ}−1) = 1 − iθ/2 − θ²/12 + ...
        assert_eq!(s.coeff(&[1]), GaussQ::new(qi(0), crate::scalar::q(-1, 2)));
        assert_eq!(s.coeff(&[2]), GaussQ::frac(-1, 12));
    }

    #[test]
    fn bott_plane_prefactor_is_one() {
        let f = SmoothFactor::a_hat(1)
            .mul(&SmoothFactor::a_hat(1))
            .mul(&SmoothFactor::chern_line(1))
            .mul(&SmoothFactor::chern_line(-1))
            .mul(&SmoothFactor::two_i_pi(-2));
        let (s, p) = f.taylor(6).unwrap();
        assert_eq!(p, 0);
        assert_eq!(s, Series::one(1, 6));
    }

    #[test]
    fn deconvolution_prefactor_on_ray() {
        // −iθ/(1 − e^{−iθ}) applied to 1_[0,∞) gives −Σ_{n≥1} δ_n.
        let f = SmoothFactor::constant(GaussQ::int(-1), 0).mul(&SmoothFactor::itheta(1)).mul(&SmoothFactor::one_minus_exp(-1, -1));
        let u = GeneralizedDensity::piece(Some(qi(0)), None, UPoly::constant(GaussQ::one()));
        let v = f.apply(&u).unwrap();
        assert_eq!(v, GeneralizedDensity::comb(qi(1), qi(1), 1, UPoly::constant(GaussQ::int(-1))));
    }
}
