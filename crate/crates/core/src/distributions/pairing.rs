//! Pairing of distributions with test functions.
//!
//! A test function `φ(θ)` lives on the Lie algebra of the circle, near 0.
//! Against a density `u` the pairing is `∫ u(x) φ̂(x) dx` with
//! `φ̂(x) = ∫ φ(θ) e^{ixθ} dθ`.

use super::density::GeneralizedDensity;
use super::fourier::FourierDistribution;
use super::group::Weight;
use super::trigpoly::TrigPolynomial;
use crate::error::{IndexError, Result};
use crate::poly::UPoly;
use crate::scalar::{q_to_f64, GaussQ, PiSum, Q, C64};
use gauss_quad::GaussLegendre;
use std::f64::consts::PI;
use std::num::NonZeroUsize;

pub const WINDOW: f64 = 2.0 * PI;

#[derive(Clone, Debug, PartialEq)]
pub enum TestFunction {
    /// `exp(−(θ − center)²/(2 width²))`.
    Gaussian { center: f64, width: f64 },
    /// Compactly supported piecewise polynomial: `(lo, hi, p)` pieces.
    PiecewisePoly(Vec<(Q, Q, UPoly)>),
    /// A character sum on the group itself.
    TrigPoly(TrigPolynomial),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairValue {
    pub exact: Option<PiSum>,
    pub approx: C64,
    pub err: f64,
}

impl PairValue {
    fn exact(v: PiSum) -> Self {
        PairValue { approx: v.to_c64(), exact: Some(v), err: 0.0 }
    }
    fn numeric(approx: C64, err: f64) -> Self {
        PairValue { exact: None, approx, err }
    }
    pub fn add(&self, o: &PairValue) -> PairValue {
        let exact = match (&self.exact, &o.exact) {
            (Some(a), Some(b)) => Some(a.add(b)),
            _ => None,
        };
        PairValue { exact, approx: self.approx + o.approx, err: self.err + o.err }
    }
}

impl TestFunction {
    pub fn gaussian(center: f64, width: f64) -> Self {
        TestFunction::Gaussian { center, width }
    }

    /// Reject test functions reaching outside `(−2π, 2π)`.
    pub fn check_window(&self) -> Result<()> {
        match self {
            TestFunction::Gaussian { center, width } => {
                if center.abs() + 12.0 * width >= WINDOW || *width <= 0.0 {
                    return Err(IndexError::WindowViolation(format!("gaussian at {center} with width {width}")));
                }
            }
            TestFunction::PiecewisePoly(ps) => {
                for (lo, hi, _) in ps {
                    if q_to_f64(lo) <= -WINDOW || q_to_f64(hi) >= WINDOW || lo >= hi {
                        return Err(IndexError::WindowViolation(format!("piece [{lo}, {hi}]")));
                    }
                }
            }
            TestFunction::TrigPoly(_) => {}
        }
        Ok(())
    }

    /// `φ(θ)`.
    pub fn value(&self, theta: f64) -> C64 {
        match self {
            TestFunction::Gaussian { center, width } => C64::new((-(theta - center).powi(2) / (2.0 * width * width)).exp(), 0.0),
            TestFunction::PiecewisePoly(ps) => ps
                .iter()
                .filter(|(lo, hi, _)| q_to_f64(lo) <= theta && theta < q_to_f64(hi))
                .map(|(_, _, p)| p.eval_c64(C64::new(theta, 0.0)))
                .sum(),
            TestFunction::TrigPoly(t) => t
                .terms
                .iter()
                .map(|(w, c)| c.to_c64() * C64::from_polar(1.0, w.torus.first().copied().unwrap_or(0) as f64 * theta))
                .sum(),
        }
    }

    /// `φ̂(x) = ∫ φ(θ) e^{ixθ} dθ`.
    pub fn hat(&self, x: f64) -> C64 {
        match self {
            TestFunction::Gaussian { center, width } => {
                let s = *width;
                C64::from_polar(s * (2.0 * PI).sqrt() * (-s * s * x * x / 2.0).exp(), center * x)
            }
            TestFunction::PiecewisePoly(ps) => ps.iter().map(|(lo, hi, p)| poly_hat(p, q_to_f64(lo), q_to_f64(hi), x)).sum(),
            TestFunction::TrigPoly(_) => C64::new(f64::NAN, f64::NAN),
        }
    }

    /// `φ^{(k)}(0)`, exact for piecewise polynomials smooth at 0.
    fn derivative_at_zero(&self, k: usize) -> Result<std::result::Result<GaussQ, f64>> {
        match self {
            TestFunction::Gaussian { center, width } => {
                // d^k/dθ^k e^{−u²/2}, u = (θ − c)/σ, is (−1)^k He_k(u) e^{−u²/2}/σ^k.
                let u = -center / width;
                let (mut h0, mut h1) = (1.0, u);
                let he = if k == 0 {
                    1.0
                } else {
                    for j in 1..k {
                        let h2 = u * h1 - j as f64 * h0;
                        h0 = h1;
                        h1 = h2;
                    }
                    h1
                };
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                Ok(Err(sign * he * (-u * u / 2.0).exp() / width.powi(k as i32)))
            }
            TestFunction::PiecewisePoly(ps) => {
                let zero = Q::from_integer(0.into());
                let mut acc = GaussQ::zero();
                for (lo, hi, p) in ps {
                    if *lo == zero || *hi == zero {
                        return Err(IndexError::Invalid("piecewise test function has a breakpoint at 0".into()));
                    }
                    if *lo < zero && zero < *hi {
                        let mut d = p.clone();
                        for _ in 0..k {
                            d = d.derivative();
                        }
                        acc += d.coeff(0);
                    }
                }
                Ok(Ok(acc))
            }
            TestFunction::TrigPoly(_) => Err(IndexError::Invalid("trigonometric test functions pair on the group".into())),
        }
    }
}

/// `∫_lo^hi p(θ) e^{ixθ} dθ` by repeated integration by parts.
fn poly_hat(p: &UPoly, lo: f64, hi: f64, x: f64) -> C64 {
    if x.abs() < 1e-12 {
        let a = p.antiderivative();
        return a.eval_c64(C64::new(hi, 0.0)) - a.eval_c64(C64::new(lo, 0.0));
    }
    let ix = C64::new(0.0, x);
    let mut acc = C64::new(0.0, 0.0);
    let mut d = p.clone();
    let mut k = 0;
    while !d.is_zero() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = |t: f64| d.eval_c64(C64::new(t, 0.0)) * C64::from_polar(1.0, x * t);
        acc += sign * (term(hi) - term(lo)) / ix.powi(k + 1);
        d = d.derivative();
        k += 1;
    }
    acc
}

fn nodes(n: usize) -> Vec<(f64, f64)> {
    GaussLegendre::new(NonZeroUsize::new(n).unwrap()).as_node_weight_pairs().to_vec()
}

/// `∫_a^b f` by Gauss-Legendre on unit chunks.
fn integrate(a: f64, b: f64, f: impl Fn(f64) -> C64) -> C64 {
    let rule = nodes(32);
    let chunks = ((b - a).ceil() as usize).max(1);
    let h = (b - a) / chunks as f64;
    let mut acc = C64::new(0.0, 0.0);
    for c in 0..chunks {
        let (lo, hi) = (a + c as f64 * h, a + (c + 1) as f64 * h);
        let (mid, half) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
        for (x, w) in &rule {
            acc += f(mid + half * x) * (w * half);
        }
    }
    acc
}

/// `⟨u, φ⟩ = ∫ u(x) φ̂(x) dx` for a density.
pub fn pair_density(u: &GeneralizedDensity, phi: &TestFunction) -> Result<PairValue> {
    phi.check_window()?;
    if matches!(phi, TestFunction::TrigPoly(_)) {
        return Err(IndexError::Invalid("trigonometric test functions pair on the group".into()));
    }
    let gaussian_width = match phi {
        TestFunction::Gaussian { width, .. } => Some(*width),
        _ => None,
    };
    let mut out = PairValue::exact(PiSum::zero());
    let mut numeric = C64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut all_exact = true;
    for (a, m) in &u.atoms {
        numeric += m.to_c64() * phi.hat(q_to_f64(a));
        err += 1e-15 * m.abs_bound();
        all_exact = false;
    }
    for c in &u.combs {
        let Some(s) = gaussian_width else {
            return Err(IndexError::Invalid("combs pair only with gaussian test functions".into()));
        };
        // Sum until the gaussian envelope is below 1e-300 relative to the mass.
        let mut n = c.start;
        loop {
            let x = q_to_f64(&c.position(n));
            let w = c.mass.eval_c64(C64::new(n as f64, 0.0));
            numeric += w * phi.hat(x);
            if s * x.abs() > 40.0 && (x * c.dir as f64) > 0.0 {
                break;
            }
            n += 1;
        }
        err += 1e-14;
        all_exact = false;
    }
    for p in &u.pieces {
        match (&p.lo, &p.hi) {
            (None, None) => {
                // ∫ p(x) φ̂(x) dx = 2π Σ_k p_k i^k φ^{(k)}(0).
                let mut exact = GaussQ::zero();
                let mut approx = C64::new(0.0, 0.0);
                let mut is_exact = true;
                for (k, pk) in p.poly.0.iter().enumerate() {
                    let ik = GaussQ::i_pow(k as i64);
                    match phi.derivative_at_zero(k)? {
                        Ok(v) => exact += pk * &ik * v,
                        Err(v) => {
                            is_exact = false;
                            approx += (pk * &ik).to_c64() * v;
                        }
                    }
                }
                if is_exact {
                    out = out.add(&PairValue::exact(PiSum::term(exact * GaussQ::int(2), 1)));
                } else {
                    numeric += approx * 2.0 * PI;
                    err += 1e-13 * approx.norm().max(1.0);
                    all_exact = false;
                }
            }
            (lo, hi) => {
                let Some(s) = gaussian_width.or(if lo.is_some() && hi.is_some() { Some(1.0) } else { None }) else {
                    return Err(IndexError::Invalid("unbounded pieces pair only with gaussian test functions".into()));
                };
                let reach = 40.0 / s;
                let a = lo.as_ref().map(q_to_f64).unwrap_or(-reach);
                let b = hi.as_ref().map(q_to_f64).unwrap_or(reach);
                if a < b {
                    numeric += integrate(a, b, |x| p.poly.eval_c64(C64::new(x, 0.0)) * phi.hat(x));
                }
                err += 1e-12 * (1.0 + p.poly.max_abs_coeff()) * (b - a).abs().max(1.0);
                all_exact = false;
            }
        }
    }
    if !all_exact || numeric.norm() != 0.0 {
        out = out.add(&PairValue::numeric(numeric, err));
        out.exact = None;
        out.err = err;
    }
    Ok(out)
}

/// `⟨Θ, φ⟩` for a distribution on the group. Character sums pair exactly
/// with `dθ` on each circle and counting measure on cyclic factors; other
/// test functions go through the density on the circle's Lie algebra.
pub fn pair(d: &FourierDistribution, phi: &TestFunction) -> Result<PairValue> {
    match phi {
        TestFunction::TrigPoly(t) => {
            if t.group != d.group {
                return Err(IndexError::GroupMismatch(format!("{} vs {}", t.group, d.group)));
            }
            let mut acc = GaussQ::zero();
            for (w, a) in &t.terms {
                acc += a * &d.coeff(&w.neg(&d.group))?;
            }
            let card: u64 = d.group.cyclic.iter().product();
            let c = acc * GaussQ::int(2).pow(d.group.rank as i64) * GaussQ::int(card as i64);
            Ok(PairValue::exact(PiSum::term(c, d.group.rank as i32)))
        }
        _ => pair_density(&d.to_density_germ()?, phi),
    }
}

/// Reference value `−Σ_{n≥1} φ̂(a·n)` for the weight-`a` Atiyah series.
pub fn atiyah_reference(a: i64, phi: &TestFunction) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for n in 1..100_000 {
        let t = phi.hat((a * n) as f64);
        acc -= t;
        if t.norm() < 1e-300 {
            break;
        }
    }
    acc
}

pub fn weight_zero(d: &FourierDistribution) -> Weight {
    Weight::zero(&d.group)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::group::GroupDescriptor;

    #[test]
    fn delta_pairs_to_two_pi_phi_zero() {
        let d = FourierDistribution::delta(&GroupDescriptor::torus(1));
        let phi = TestFunction::gaussian(0.3, 0.4);
        let v = pair(&d, &phi).unwrap();
        let want = 2.0 * PI * phi.value(0.0).re;
        assert!((v.approx.re - want).abs() < 1e-12, "{} vs {want}", v.approx);
    }

    #[test]
    fn full_line_constant_is_exact_for_piecewise() {
        let u = GeneralizedDensity::piece(None, None, UPoly::constant(GaussQ::one()));
        // φ = 1 − θ² on (−1, 1): ⟨1, φ⟩ = 2π φ(0) = 2π.
        let phi = TestFunction::PiecewisePoly(vec![(Q::from_integer((-1).into()), Q::from_integer(1.into()), UPoly::from_ints(&[1, 0, -1]))]);
        let v = pair_density(&u, &phi).unwrap();
        assert_eq!(v.exact, Some(PiSum::term(GaussQ::int(2), 1)));
    }

    #[test]
    fn window_is_enforced() {
        let phi = TestFunction::gaussian(5.0, 0.2);
        assert!(matches!(phi.check_window(), Err(IndexError::WindowViolation(_))));
    }
}
