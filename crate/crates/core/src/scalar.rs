//! Exact scalars: rationals, Gaussian rationals, and finite sums `Σ c_p π^p`.
//!
//! Text form of a Gaussian rational is `p/q`, `p/q+r/s i` or `r/s i` (an `i`
//! suffix marks the imaginary part); integers drop the denominator.

use num::bigint::BigInt;
use num::{BigRational, Complex, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

pub type Q = BigRational;
pub type C64 = Complex<f64>;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q, ScalarParseError> {
    let s = s.trim();
    let bad = || ScalarParseError(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse scalar `{0}`")]
pub struct ScalarParseError(pub String);

/// Gaussian rational `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GaussQ {
    pub re: Q,
    pub im: Q,
}

impl GaussQ {
    pub fn new(re: Q, im: Q) -> Self {
        GaussQ { re, im }
    }
    pub fn real(re: Q) -> Self {
        GaussQ { re, im: Q::zero() }
    }
    pub fn int(n: i64) -> Self {
        Self::real(qi(n))
    }
    pub fn frac(n: i64, d: i64) -> Self {
        Self::real(q(n, d))
    }
    pub fn i() -> Self {
        GaussQ { re: Q::zero(), im: Q::one() }
    }
    pub fn zero() -> Self {
        Self::default()
    }
    pub fn one() -> Self {
        Self::int(1)
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
    pub fn conj(&self) -> Self {
        GaussQ { re: self.re.clone(), im: -self.im.clone() }
    }
    pub fn norm_sqr(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }
    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return None;
        }
        Some(GaussQ { re: &self.re / &n, im: -(&self.im / &n) })
    }
    pub fn scale(&self, k: &Q) -> Self {
        GaussQ { re: &self.re * k, im: &self.im * k }
    }
    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv().expect("zero to a negative power").pow(-e);
        }
        let mut acc = GaussQ::one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
    /// `i^k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => GaussQ::one(),
            1 => GaussQ::i(),
            2 => GaussQ::int(-1),
            _ => -GaussQ::i(),
        }
    }
    pub fn to_c64(&self) -> C64 {
        C64::new(q_to_f64(&self.re), q_to_f64(&self.im))
    }
    pub fn abs_bound(&self) -> f64 {
        self.to_c64().norm()
    }
}

impl fmt::Display for GaussQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_q(&self.re));
        }
        let im = if self.im.is_one() {
            String::new()
        } else if (-self.im.clone()).is_one() {
            "-".to_string()
        } else {
            fmt_q(&self.im)
        };
        if self.re.is_zero() {
            write!(f, "{im}i")
        } else if self.im.is_negative() {
            write!(f, "{}{}i", fmt_q(&self.re), im)
        } else {
            write!(f, "{}+{}i", fmt_q(&self.re), im)
        }
    }
}

impl FromStr for GaussQ {
    type Err = ScalarParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || ScalarParseError(s.to_string());
        if t.is_empty() {
            return Err(bad());
        }
        let Some(body) = t.strip_suffix('i') else {
            return Ok(GaussQ::real(parse_q(&t)?));
        };
        // split at the last sign that is not in leading position
        let split = body
            .char_indices()
            .filter(|&(k, c)| k > 0 && (c == '+' || c == '-'))
            .map(|(k, _)| k)
            .last();
        let (re, im) = match split {
            Some(k) => (parse_q(&body[..k])?, &body[k..]),
            None => (Q::zero(), body),
        };
        let im = match im {
            "" | "+" => Q::one(),
            "-" => -Q::one(),
            other => parse_q(other.strip_prefix('+').unwrap_or(other)).map_err(|_| bad())?,
        };
        Ok(GaussQ { re, im })
    }
}

impl Serialize for GaussQ {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussQ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a bare rational written as `"p/q"`.
pub mod q_str {
    use super::*;
    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a, 'b> $tr<&'b GaussQ> for &'a GaussQ {
            type Output = GaussQ;
            fn $m(self, o: &'b GaussQ) -> GaussQ {
                let f: fn(&GaussQ, &GaussQ) -> GaussQ = $body;
                f(self, o)
            }
        }
        impl $tr<GaussQ> for GaussQ {
            type Output = GaussQ;
            fn $m(self, o: GaussQ) -> GaussQ {
                $tr::$m(&self, &o)
            }
        }
        impl<'b> $tr<&'b GaussQ> for GaussQ {
            type Output = GaussQ;
            fn $m(self, o: &'b GaussQ) -> GaussQ {
                $tr::$m(&self, o)
            }
        }
        impl<'a> $tr<GaussQ> for &'a GaussQ {
            type Output = GaussQ;
            fn $m(self, o: GaussQ) -> GaussQ {
                $tr::$m(self, &o)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| GaussQ { re: &a.re + &b.re, im: &a.im + &b.im });
forward_binop!(Sub, sub, |a, b| GaussQ { re: &a.re - &b.re, im: &a.im - &b.im });
forward_binop!(Mul, mul, |a, b| GaussQ {
    re: &a.re * &b.re - &a.im * &b.im,
    im: &a.re * &b.im + &a.im * &b.re,
});
forward_binop!(Div, div, |a, b| a * &b.inv().expect("division by zero"));

impl Neg for GaussQ {
    type Output = GaussQ;
    fn neg(self) -> GaussQ {
        GaussQ { re: -self.re, im: -self.im }
    }
}
impl<'a> Neg for &'a GaussQ {
    type Output = GaussQ;
    fn neg(self) -> GaussQ {
        GaussQ { re: -self.re.clone(), im: -self.im.clone() }
    }
}
impl AddAssign<&GaussQ> for GaussQ {
    fn add_assign(&mut self, o: &GaussQ) {
        self.re += &o.re;
        self.im += &o.im;
    }
}
impl AddAssign for GaussQ {
    fn add_assign(&mut self, o: GaussQ) {
        *self += &o;
    }
}
impl SubAssign<&GaussQ> for GaussQ {
    fn sub_assign(&mut self, o: &GaussQ) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}
impl MulAssign<&GaussQ> for GaussQ {
    fn mul_assign(&mut self, o: &GaussQ) {
        *self = &*self * o;
    }
}
impl From<Q> for GaussQ {
    fn from(x: Q) -> Self {
        GaussQ::real(x)
    }
}
impl From<i64> for GaussQ {
    fn from(x: i64) -> Self {
        GaussQ::int(x)
    }
}

/// Field operations shared by exact and floating coefficients.
pub trait Coef: Clone + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn from_gauss(g: &GaussQ) -> Self;
    fn to_c64(&self) -> C64;
}

impl Coef for GaussQ {
    fn zero() -> Self {
        GaussQ::zero()
    }
    fn one() -> Self {
        GaussQ::one()
    }
    fn is_zero(&self) -> bool {
        GaussQ::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        GaussQ::inv(self)
    }
    fn from_gauss(g: &GaussQ) -> Self {
        g.clone()
    }
    fn to_c64(&self) -> C64 {
        GaussQ::to_c64(self)
    }
}

impl Coef for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn one() -> Self {
        C64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Coef::is_zero(self) {
            None
        } else {
            Some(self.inv())
        }
    }
    fn from_gauss(g: &GaussQ) -> Self {
        g.to_c64()
    }
    fn to_c64(&self) -> C64 {
        *self
    }
}

/// Finite Laurent sum `Σ_p c_p π^p` with Gaussian-rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default, PartialOrd, Ord)]
pub struct PiSum(pub BTreeMap<i32, GaussQ>);

impl PiSum {
    pub fn zero() -> Self {
        PiSum(BTreeMap::new())
    }
    pub fn term(c: GaussQ, p: i32) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(p, c);
        }
        PiSum(m)
    }
    pub fn constant(c: GaussQ) -> Self {
        Self::term(c, 0)
    }
    /// `(2iπ)^k`.
    pub fn two_i_pi(k: i32) -> Self {
        let two = GaussQ::int(2).pow(k as i64);
        Self::term(&two * &GaussQ::i_pow(k as i64), k)
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    pub fn add(&self, o: &PiSum) -> PiSum {
        let mut m = self.0.clone();
        for (p, c) in &o.0 {
            let e = m.entry(*p).or_insert_with(GaussQ::zero);
            *e += c;
            if e.is_zero() {
                m.remove(p);
            }
        }
        PiSum(m)
    }
    pub fn neg(&self) -> PiSum {
        PiSum(self.0.iter().map(|(p, c)| (*p, -c)).collect())
    }
    pub fn mul(&self, o: &PiSum) -> PiSum {
        let mut acc = PiSum::zero();
        for (p, c) in &self.0 {
            for (r, d) in &o.0 {
                acc = acc.add(&PiSum::term(c * d, p + r));
            }
        }
        acc
    }
    pub fn scale(&self, c: &GaussQ) -> PiSum {
        let mut acc = PiSum::zero();
        for (p, d) in &self.0 {
            acc = acc.add(&PiSum::term(c * d, *p));
        }
        acc
    }
    /// The value if it is a single `c·π^0`.
    pub fn as_rational(&self) -> Option<GaussQ> {
        match self.0.len() {
            0 => Some(GaussQ::zero()),
            1 => self.0.get(&0).cloned(),
            _ => None,
        }
    }
    /// Single monomial `c π^p`, if any.
    pub fn as_monomial(&self) -> Option<(GaussQ, i32)> {
        match self.0.len() {
            0 => Some((GaussQ::zero(), 0)),
            1 => self.0.iter().next().map(|(p, c)| (c.clone(), *p)),
            _ => None,
        }
    }
    /// Inverse of a single monomial.
    pub fn inv(&self) -> Option<PiSum> {
        let (c, p) = self.as_monomial()?;
        Some(PiSum::term(c.inv()?, -p))
    }
    pub fn to_c64(&self) -> C64 {
        self.0
            .iter()
            .map(|(p, c)| c.to_c64() * std::f64::consts::PI.powi(*p))
            .sum()
    }
}

impl fmt::Display for PiSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(p, c)| match p {
                0 => format!("({c})"),
                1 => format!("({c})π"),
                _ => format!("({c})π^{p}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for s in ["0", "1/2", "-3", "1/2+3/4i", "1/2-3/4i", "i", "-i", "5/7i", "-1-i"] {
            let g: GaussQ = s.parse().unwrap();
            let back: GaussQ = g.to_string().parse().unwrap();
            assert_eq!(g, back, "{s}");
        }
        assert_eq!("1/2-i".parse::<GaussQ>().unwrap(), GaussQ::new(q(1, 2), qi(-1)));
        assert_eq!("-2/4".parse::<GaussQ>().unwrap().to_string(), "-1/2");
    }

    #[test]
    fn field_ops() {
        let a = GaussQ::new(q(1, 2), q(1, 3));
        let b = GaussQ::new(q(-2, 5), q(3, 1));
        assert_eq!(&(&a * &b) / &b, a);
        assert_eq!(GaussQ::i() * GaussQ::i(), GaussQ::int(-1));
        assert_eq!(GaussQ::i_pow(-1), -GaussQ::i());
    }

    #[test]
    fn two_i_pi_powers_cancel() {
        let p = PiSum::two_i_pi(3).mul(&PiSum::two_i_pi(-3));
        assert_eq!(p.as_rational(), Some(GaussQ::one()));
    }
}
