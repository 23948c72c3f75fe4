//! Complex midpoint-radius balls: floating values with a rigorous error radius.
//!
//! Every operation widens the radius by the propagated error plus a few ulps
//! of the midpoint, so the exact result always lies inside the ball.

use crate::scalar::{fmt_q, q_to_f64, Coef, GaussQ, Q, C64};
use num::{Integer, Signed, ToPrimitive};

const U: f64 = f64::EPSILON;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ball {
    pub mid: C64,
    pub rad: f64,
}

impl Ball {
    pub fn new(mid: C64, rad: f64) -> Self {
        Ball { mid, rad: rad.abs() }
    }
    pub fn exact(mid: C64) -> Self {
        Ball { mid, rad: 0.0 }
    }
    pub fn real(x: f64) -> Self {
        Ball::exact(C64::new(x, 0.0))
    }
    /// `e^{2πi t}` for a rational number of turns.
    pub fn from_turn(t: &Q) -> Self {
        // Reduce mod 1 exactly, then to (-1/2, 1/2] for accuracy.
        let num = t.numer().mod_floor(t.denom());
        let mut frac = q_to_f64(&Q::new(num, t.denom().clone()));
        if frac > 0.5 {
            frac -= 1.0;
        }
        let ang = 2.0 * std::f64::consts::PI * frac;
        Ball::new(C64::new(ang.cos(), ang.sin()), 8.0 * U)
    }
    pub fn abs_upper(&self) -> f64 {
        self.mid.norm() + self.rad
    }
    pub fn abs_lower(&self) -> f64 {
        (self.mid.norm() - self.rad).max(0.0)
    }
    pub fn contains_zero(&self) -> bool {
        self.mid.norm() <= self.rad
    }
    /// Whether the two balls may hold the same value, up to `tol`.
    pub fn overlaps(&self, o: &Ball, tol: f64) -> bool {
        (self.mid - o.mid).norm() <= self.rad + o.rad + tol
    }
    fn slack(m: C64) -> f64 {
        4.0 * U * m.norm() + f64::MIN_POSITIVE
    }
}

impl Coef for Ball {
    fn zero() -> Self {
        Ball::exact(C64::new(0.0, 0.0))
    }
    fn one() -> Self {
        Ball::exact(C64::new(1.0, 0.0))
    }
    fn is_zero(&self) -> bool {
        self.mid.norm() == 0.0 && self.rad == 0.0
    }
    fn add(&self, o: &Self) -> Self {
        let m = self.mid + o.mid;
        Ball::new(m, self.rad + o.rad + Ball::slack(m))
    }
    fn sub(&self, o: &Self) -> Self {
        let m = self.mid - o.mid;
        Ball::new(m, self.rad + o.rad + Ball::slack(m))
    }
    fn mul(&self, o: &Self) -> Self {
        let m = self.mid * o.mid;
        let r = self.mid.norm() * o.rad + o.mid.norm() * self.rad + self.rad * o.rad;
        Ball::new(m, r + Ball::slack(m))
    }
    fn neg(&self) -> Self {
        Ball::new(-self.mid, self.rad)
    }
    fn inv(&self) -> Option<Self> {
        let a = self.mid.norm();
        if a <= self.rad {
            return None;
        }
        let m = self.mid.inv();
        let r = self.rad / (a * (a - self.rad));
        Some(Ball::new(m, r + Ball::slack(m)))
    }
    fn from_gauss(g: &GaussQ) -> Self {
        let m = g.to_c64();
        // Conversion of each rational part rounds once.
        let exact = g.re.denom().to_u64() == Some(1) && g.im.denom().to_u64() == Some(1) && m.norm() < 2f64.powi(52);
        Ball::new(m, if exact { 0.0 } else { 2.0 * U * m.norm() })
    }
    fn to_c64(&self) -> C64 {
        self.mid
    }
}

impl std::fmt::Display for Ball {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:.15e}{:+.15e}i ± {:.1e}", self.mid.re, self.mid.im, self.rad)
    }
}

/// Turn count `t` as text, used in reports.
pub fn fmt_turn(t: &Q) -> String {
    if t.is_negative() {
        format!("-{}", fmt_q(&-t))
    } else {
        fmt_q(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn turn_balls_contain_exact_values() {
        let b = Ball::from_turn(&q(1, 4));
        assert!(b.overlaps(&Ball::exact(C64::new(0.0, 1.0)), 0.0));
        let w = Ball::from_turn(&q(1, 3));
        let cube = w.mul(&w).mul(&w);
        assert!(cube.overlaps(&Ball::one(), 0.0));
    }
}
