//! Cutoff quadrature for the Cartan forms: `Par^T(ℓ)` paired against a
//! weight in `X`, and the support-localized Chern integral `∫ dχ∧β^T` at a
//! numeric `X`.
//!
//! The formal cutoff `g` is materialized as `g(u) = 1 − S((u − r1)/(r2 − r1))`
//! with the quintic smoothstep `S`, so `dg` lives on the shell `r1 ≤ u ≤ r2`.

use super::chart::Chart;
use super::chern::{clifford_entries, clifford_square, CliffordSymbolData};
use super::expr::{Atom, Expr};
use super::form::{wedge_sign, Form};
use super::par::{par_form, ParMode};
use super::supermatrix::{exterior_parity, SuperEntry, SuperMatrix};
use crate::distributions::smooth::SmoothFactor;
use crate::error::{IndexError, Result};
use crate::poly::MPoly;
use crate::scalar::C64;
use gauss_quad::GaussLegendre;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::num::NonZeroUsize;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bump {
    pub r1: f64,
    pub r2: f64,
}

impl Bump {
    pub fn new(r1: f64, r2: f64) -> Result<Self> {
        if !(r1 > 0.0 && r2 > r1) {
            return Err(IndexError::Invalid(format!("bump radii must satisfy 0 < r1 < r2, got {r1}, {r2}")));
        }
        Ok(Bump { r1, r2 })
    }
    /// `g^{(k)}(u)`.
    pub fn eval(&self, u: f64, k: u32) -> f64 {
        let h = self.r2 - self.r1;
        let s = ((u - self.r1) / h).clamp(0.0, 1.0);
        let inside = u > self.r1 && u < self.r2;
        let d = match k {
            0 => return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s),
            _ if !inside => return 0.0,
            1 => 30.0 * s * s * (1.0 - s) * (1.0 - s),
            2 => 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s),
            3 => 60.0 * (1.0 - 6.0 * s + 6.0 * s * s),
            4 => 60.0 * (12.0 * s - 6.0),
            5 => 720.0,
            _ => 0.0,
        };
        -d / h.powi(k as i32)
    }
}

/// `∫_0^T t^k e^{iat} dt`.
pub fn osc_cutoff(a: f64, k: u32, t: f64) -> C64 {
    let z = a * t;
    if z.abs() < 1.0 {
        // Σ_n (iaT)^n T^{k+1}/(n!(n+k+1))
        let mut acc = C64::new(0.0, 0.0);
        let mut term = C64::new(t.powi(k as i32 + 1), 0.0);
        for n in 0..40 {
            acc += term / (n + k + 1) as f64;
            term *= C64::new(0.0, z) / (n + 1) as f64;
        }
        return acc;
    }
    let ia = C64::new(0.0, a);
    let e = C64::from_polar(1.0, z);
    let mut j = (e - 1.0) / ia;
    for m in 1..=k {
        j = (e * t.powi(m as i32) - j * m as f64) / ia;
    }
    j
}

#[derive(Clone, Debug)]
struct CPoly(Vec<(Vec<u32>, C64)>);

impl CPoly {
    fn new(p: &MPoly) -> Self {
        CPoly(p.terms.iter().map(|(e, c)| (e.clone(), c.to_c64())).collect())
    }
    fn eval(&self, pt: &[f64]) -> C64 {
        self.0.iter().map(|(e, c)| e.iter().zip(pt).filter(|(k, _)| **k > 0).fold(*c, |acc, (k, x)| acc * x.powi(*k as i32))).sum()
    }
}

#[derive(Clone, Debug)]
enum CAtom {
    Bump(CPoly, u32),
    Gauss(CPoly),
    Osc(CPoly, u32),
}

/// An `Expr` prepared for repeated numeric evaluation.
#[derive(Clone, Debug)]
pub struct CompiledExpr(Vec<(Vec<(CAtom, u32)>, CPoly)>);

impl CompiledExpr {
    pub fn new(e: &Expr) -> Self {
        CompiledExpr(
            e.terms
                .iter()
                .map(|(key, p)| {
                    let atoms = key
                        .iter()
                        .map(|(a, pw)| {
                            let ca = match a {
                                Atom::Bump { arg, k } => CAtom::Bump(CPoly::new(arg), *k),
                                Atom::Gauss { arg } => CAtom::Gauss(CPoly::new(arg)),
                                Atom::Osc { arg, k } => CAtom::Osc(CPoly::new(arg), *k),
                            };
                            (ca, *pw)
                        })
                        .collect();
                    (atoms, CPoly::new(p))
                })
                .collect(),
        )
    }
    /// Value at a real point; oscillatory atoms are cut off at `t_max`.
    pub fn eval(&self, pt: &[f64], bump: &Bump, t_max: f64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (atoms, p) in &self.0 {
            let mut v = p.eval(pt);
            if v == C64::new(0.0, 0.0) {
                continue;
            }
            for (a, pw) in atoms {
                let x = match a {
                    CAtom::Bump(arg, k) => C64::new(bump.eval(arg.eval(pt).re, *k), 0.0),
                    CAtom::Gauss(arg) => (-arg.eval(pt)).exp(),
                    CAtom::Osc(arg, k) => osc_cutoff(arg.eval(pt).re, *k, t_max),
                };
                v *= x.powi(*pw as i32);
            }
            acc += v;
        }
        acc
    }
}

/// Quadrature resolution. Oscillatory directions get extra chunks in
/// proportion to the phase they sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub gl_nodes: usize,
    pub radial_chunks: usize,
    pub angular_nodes: usize,
    pub x_chunks: usize,
    /// Chunks per `π` of swept phase.
    pub chunks_per_pi: f64,
    /// Chunk width for the `t`-integral of the Chern transgression.
    pub t_chunk: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { gl_nodes: 12, radial_chunks: 4, angular_nodes: 4, x_chunks: 24, chunks_per_pi: 1.0, t_chunk: 0.5 }
    }
}

pub fn gl_rule(n: usize) -> Vec<(f64, f64)> {
    GaussLegendre::new(NonZeroUsize::new(n.max(1)).unwrap()).as_node_weight_pairs().to_vec()
}

/// Nodes and weights of a chunked Gauss-Legendre rule on `[a, b]`.
pub fn chunked(a: f64, b: f64, chunks: usize, n: usize) -> Vec<(f64, f64)> {
    let rule = gl_rule(n);
    let chunks = chunks.max(1);
    let h = (b - a) / chunks as f64;
    let mut out = Vec::with_capacity(chunks * n);
    for c in 0..chunks {
        let mid = a + (c as f64 + 0.5) * h;
        for (x, w) in &rule {
            out.push((mid + 0.5 * h * x, 0.5 * h * w));
        }
    }
    out
}

/// Nodes over the region where `dχ ≠ 0`, `χ = g(Σ x_i²)`: the cutoff
/// coordinates form a line (two intervals) or a plane (polar shell); other
/// coordinates must be circles.
fn shell_nodes(c: &Chart, chi_arg: &MPoly, bump: &Bump, radial_chunks: usize, q: &QuadratureSpec) -> Result<Vec<(Vec<f64>, f64)>> {
    let radial: Vec<usize> = chi_arg.support_vars().into_iter().filter(|&v| v < c.dim()).collect();
    if *chi_arg != crate::poly::sum_of_squares(c.nvars(), &radial) {
        return Err(IndexError::Invalid("cutoff argument must be a sum of squares of coordinates".into()));
    }
    let circles: Vec<usize> = (0..c.dim()).filter(|i| !radial.contains(i)).collect();
    for &i in &circles {
        if c.coords[i].domain != super::chart::Domain::Circle {
            return Err(IndexError::Invalid(format!("coordinate {} is neither cut off nor a circle", c.coords[i].name)));
        }
    }
    let (a, b) = (bump.r1.sqrt(), bump.r2.sqrt());
    let rs = chunked(a, b, radial_chunks, q.gl_nodes);
    let mut base: Vec<(Vec<f64>, f64)> = vec![];
    let nv = c.nvars();
    match radial.len() {
        1 => {
            for (r, w) in &rs {
                for s in [1.0, -1.0] {
                    let mut p = vec![0.0; nv];
                    p[radial[0]] = s * r;
                    base.push((p, *w));
                }
            }
        }
        2 => {
            let n = q.angular_nodes.max(1);
            for (r, w) in &rs {
                for j in 0..n {
                    let phi = 2.0 * PI * (j as f64 + 0.5) / n as f64;
                    let mut p = vec![0.0; nv];
                    p[radial[0]] = r * phi.cos();
                    p[radial[1]] = r * phi.sin();
                    base.push((p, w * r * 2.0 * PI / n as f64));
                }
            }
        }
        k => return Err(IndexError::Invalid(format!("{k} cutoff coordinates; the quadrature handles one or two"))),
    }
    // periodic trapezoid on circle coordinates
    for &i in &circles {
        let n = q.angular_nodes.max(1);
        base = base
            .into_iter()
            .flat_map(|(p, w)| {
                (0..n).map(move |j| {
                    let mut p = p.clone();
                    p[i] = 2.0 * PI * j as f64 / n as f64;
                    (p, w * 2.0 * PI / n as f64)
                })
            })
            .collect();
    }
    Ok(base)
}

/// `∫_M ∫ dX weight(X)·Par^T(ℓ)(X)` over the chart, with the chart's
/// orientation sign.
#[allow(clippy::too_many_arguments)]
pub fn par_pairing(
    c: &Chart,
    l: &Form,
    chi_arg: &MPoly,
    bump: &Bump,
    t_max: f64,
    weight: &(dyn Fn(f64) -> C64 + Sync),
    x_range: (f64, f64),
    q: &QuadratureSpec,
) -> Result<C64> {
    if c.params.len() != 1 {
        return Err(IndexError::Invalid("numeric pairing needs a single equivariant parameter".into()));
    }
    let p = par_form(c, l, chi_arg, ParMode::Cutoff(t_max))?;
    let top = (1u64 << c.dim()) - 1;
    let e = CompiledExpr::new(&p.par.coefficient(top));
    let xv = c.param_var(0);
    let lambda = CPoly::new(&p.phase.substitute(xv, &MPoly::one(c.nvars())));
    let probe = shell_nodes(c, chi_arg, bump, 8, q)?;
    let lams: Vec<f64> = probe.iter().map(|(pt, _)| lambda.eval(pt).re).collect();
    let lmax = lams.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let spread = lams.iter().cloned().fold(f64::MIN, f64::max) - lams.iter().cloned().fold(f64::MAX, f64::min);
    let xmax = x_range.0.abs().max(x_range.1.abs());
    let xw = x_range.1 - x_range.0;
    let x_chunks = q.x_chunks.max((xw * t_max * lmax / PI * q.chunks_per_pi).ceil() as usize);
    let r_chunks = q.radial_chunks.max((t_max * xmax * spread / PI * q.chunks_per_pi).ceil() as usize);
    let xs: Vec<(f64, C64)> = chunked(x_range.0, x_range.1, x_chunks, q.gl_nodes).into_iter().map(|(x, w)| (x, weight(x) * w)).collect();
    let shell = shell_nodes(c, chi_arg, bump, r_chunks, q)?;
    let total: C64 = shell
        .par_iter()
        .map(|(pt, w)| {
            let mut pt = pt.clone();
            let mut acc = C64::new(0.0, 0.0);
            for (x, wx) in &xs {
                pt[xv] = *x;
                acc += e.eval(&pt, bump, t_max) * wx;
            }
            acc * w
        })
        .sum();
    Ok(total * c.orientation as f64)
}

/// Forms with complex numeric coefficients, indexed by generator bitmask.
#[derive(Clone, Debug, PartialEq)]
pub struct NumForm {
    pub nodd: usize,
    pub c: Vec<C64>,
}

impl NumForm {
    pub fn zero(nodd: usize) -> Self {
        NumForm { nodd, c: vec![C64::new(0.0, 0.0); 1 << nodd] }
    }
    pub fn scalar(nodd: usize, v: C64) -> Self {
        let mut f = Self::zero(nodd);
        f.c[0] = v;
        f
    }
    pub fn from_form(f: &Form, pt: &[f64]) -> Self {
        CompiledForm::new(f).eval(pt)
    }
    pub fn scale(&self, k: C64) -> Self {
        NumForm { nodd: self.nodd, c: self.c.iter().map(|x| x * k).collect() }
    }
    pub fn norm(&self) -> f64 {
        self.c.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }
}

/// A polynomial-coefficient form prepared for numeric evaluation.
#[derive(Clone, Debug)]
pub struct CompiledForm {
    nodd: usize,
    terms: Vec<(usize, CPoly)>,
}

impl CompiledForm {
    pub fn new(f: &Form) -> Self {
        let terms = f.terms.iter().map(|(m, e)| (*m as usize, CPoly::new(&e.as_poly().expect("polynomial coefficients")))).collect();
        CompiledForm { nodd: f.nodd, terms }
    }
    pub fn eval(&self, pt: &[f64]) -> NumForm {
        let mut r = NumForm::zero(self.nodd);
        for (m, p) in &self.terms {
            r.c[*m] = p.eval(pt);
        }
        r
    }
}

impl SuperEntry for NumForm {
    fn zero_like(&self) -> Self {
        NumForm::zero(self.nodd)
    }
    fn one_like(&self) -> Self {
        NumForm::scalar(self.nodd, C64::new(1.0, 0.0))
    }
    fn add(&self, o: &Self) -> Self {
        NumForm { nodd: self.nodd, c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }
    fn mul(&self, o: &Self) -> Self {
        let mut r = self.zero_like();
        for (a, x) in self.c.iter().enumerate() {
            if x.norm() == 0.0 {
                continue;
            }
            for (b, y) in o.c.iter().enumerate() {
                if let Some(s) = wedge_sign(a as u64, b as u64) {
                    r.c[a | b] += x * y * s as f64;
                }
            }
        }
        r
    }
    fn twist(&self) -> Self {
        NumForm { nodd: self.nodd, c: self.c.iter().enumerate().map(|(m, x)| if m.count_ones() % 2 == 1 { -x } else { *x }).collect() }
    }
    fn scale_ratio(&self, n: i64, d: i64) -> Self {
        self.scale(C64::new(n as f64 / d as f64, 0.0))
    }
    fn is_negligible(&self) -> bool {
        self.norm() < 1e-17
    }
}

/// `e^M` by scaling and squaring.
pub fn exp_numeric(m: &SuperMatrix<NumForm>) -> SuperMatrix<NumForm> {
    let size = m.e.iter().map(|x| x.norm()).fold(0.0, f64::max) * m.n as f64;
    let s = if size > 0.5 { (size / 0.5).log2().ceil() as i32 } else { 0 };
    let k = 0.5f64.powi(s);
    let small = m.map(|x| x.scale(C64::new(k, 0.0)));
    let mut e = small.exp(|x| x.clone(), 30);
    for _ in 0..s {
        e = e.mul(&e);
    }
    e
}

/// `∫_{C^m} dχ∧β^T` at the numeric parameter `x`, where
/// `β^T = ∫_0^T −e^{−t²q} Str(v e^{t dv + μ(x)}) dt`. As `T → ∞` this is the
/// integral of the Chern character with support, `2iπ/Todd_w(x)` for one line.
pub fn chern_support_integral(data: &CliffordSymbolData, x: f64, t_max: f64, bump: &Bump, q: &QuadratureSpec) -> Result<C64> {
    let c = data.chart();
    let m = data.weights.len();
    if m != 1 {
        return Err(IndexError::Invalid("the numeric Chern integral is implemented for one line".into()));
    }
    let parity = exterior_parity(m);
    let entries = match &data.odd {
        Some(e) => e.clone(),
        None => clifford_entries(&c, m),
    };
    let qpoly = clifford_square(&entries, &parity)?;
    let v_forms: Vec<Vec<CompiledForm>> = entries.iter().map(|r| r.iter().map(|p| CompiledForm::new(&c.poly_function(p.clone()))).collect()).collect();
    let dv_forms: Vec<Vec<CompiledForm>> =
        entries.iter().map(|r| r.iter().map(|p| CompiledForm::new(&c.d(&c.poly_function(p.clone())))).collect()).collect();
    let chi_arg = crate::poly::sum_of_squares(c.nvars(), &[0, 1]);
    let dq = CompiledForm::new(&c.d(&c.poly_function(qpoly.clone())));
    let xv = c.param_var(0);
    let tv = c.t_var();
    let nodd = c.dim();
    let ts = chunked(0.0, t_max, ((t_max / q.t_chunk).ceil() as usize).max(1), q.gl_nodes);
    let shell = shell_nodes(&c, &chi_arg, bump, q.radial_chunks, q)?;
    let top = (1usize << nodd) - 1;
    let total: C64 = shell
        .par_iter()
        .map(|(pt, w)| {
            let mut pt = pt.clone();
            pt[xv] = x;
            pt[tv] = 0.0;
            let n = parity.len();
            let mut v = SuperMatrix::zero(parity.clone(), &NumForm::zero(nodd));
            let mut dv = v.clone();
            for i in 0..n {
                for k in 0..n {
                    v.set(i, k, v_forms[i][k].eval(&pt));
                    dv.set(i, k, dv_forms[i][k].eval(&pt));
                }
            }
            let mut mu = SuperMatrix::zero(parity.clone(), &NumForm::zero(nodd));
            for i in 0..n {
                let wi: i64 = (0..m).filter(|j| i & (1 << j) != 0).map(|j| data.weights[j]).sum();
                mu.set(i, i, NumForm::scalar(nodd, C64::new(0.0, wi as f64 * x)));
            }
            let qv = qpoly.eval_c64(&pt.iter().map(|a| C64::new(*a, 0.0)).collect::<Vec<_>>()).re;
            let mut beta = NumForm::zero(nodd);
            for (t, wt) in &ts {
                let mt = dv.map(|f| f.scale(C64::new(*t, 0.0))).add(&mu);
                let e = exp_numeric(&mt);
                let eta = v.mul(&e).supertrace().scale(C64::new(-(-t * t * qv).exp() * wt, 0.0));
                beta = beta.add(&eta);
            }
            let g1 = bump.eval(qv, 1);
            let dchi = dq.eval(&pt).scale(C64::new(g1, 0.0));
            dchi.mul(&beta).c[top] * w
        })
        .sum();
    Ok(total * c.orientation as f64)
}

/// Value of a smooth multiplier at real `θ`, through its Taylor series near 0.
pub fn smooth_value(f: &SmoothFactor, theta: f64) -> Result<C64> {
    let pi = PI.powi(f.pi_pow);
    if theta.abs() < 1e-3 {
        let (s, _) = f.taylor(12)?;
        let v: C64 = s.terms.iter().map(|(e, c)| c.to_c64() * theta.powi(e[0] as i32)).sum();
        return Ok(v * pi);
    }
    let mut v = f.coeff.to_c64() * pi * C64::new(0.0, theta).powi(f.itheta_pow);
    for (m, e) in &f.exps {
        v *= (C64::new(1.0, 0.0) - C64::from_polar(1.0, *m as f64 * theta)).powi(*e);
    }
    v *= C64::from_polar(1.0, crate::scalar::q_to_f64(&f.shift) * theta);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::chart::{cotangent_circle, liouville, plane, rotation_one_form};
    use crate::poly::sum_of_squares;

    #[test]
    fn osc_cutoff_matches_quadrature() {
        for (a, k, t) in [(0.3, 0, 2.0), (2.0, 1, 3.0), (-1.5, 2, 4.0), (1e-6, 1, 1.0)] {
            let num: C64 = chunked(0.0, t, 16, 16).iter().map(|(s, w)| C64::from_polar(1.0, a * s) * s.powi(k) * w).sum();
            assert!((osc_cutoff(a, k as u32, t) - num).norm() < 1e-10, "{a} {k} {t}");
        }
    }

    #[test]
    fn bump_derivative_integrates_to_minus_one() {
        let b = Bump::new(1.0, 3.0).unwrap();
        let s: f64 = chunked(1.0, 3.0, 4, 16).iter().map(|(u, w)| b.eval(*u, 1) * w).sum();
        assert!((s + 1.0).abs() < 1e-13);
    }

    #[test]
    fn liouville_pairing_approaches_delta() {
        // (2iπ)^{-1}∫ Par^T(ω) against φ: 2πφ(0) as T grows
        let c = cotangent_circle(1);
        let w = liouville(&c);
        let phi = |x: f64| C64::new((-x * x / (2.0 * 0.16)).exp(), 0.0);
        let v = par_pairing(&c, &w, &sum_of_squares(c.nvars(), &[1]), &Bump::new(1.0, 2.0).unwrap(), 32.0, &phi, (-4.8, 4.8), &QuadratureSpec::default())
            .unwrap();
        let v = v / C64::new(0.0, 2.0 * PI);
        assert!((v - C64::new(2.0 * PI, 0.0)).norm() < 1e-6, "{v}");
    }

    #[test]
    fn rotation_form_pairing() {
        let c = plane(1);
        let k = rotation_one_form(&c, 1);
        let phi = |x: f64| C64::new((-x * x / (2.0 * 0.16)).exp(), 0.0);
        let v = par_pairing(&c, &k, &sum_of_squares(c.nvars(), &[0, 1]), &Bump::new(1.0, 2.0).unwrap(), 32.0, &phi, (-4.8, 4.8), &QuadratureSpec::default())
            .unwrap();
        // 2iπ ∫_0^∞ φ̂(x) dx
        let hat = |x: f64| C64::new(0.4 * (2.0 * PI).sqrt() * (-0.08 * x * x).exp(), 0.0);
        let want: C64 = chunked(0.0, 40.0, 40, 16).iter().map(|(x, w)| hat(*x) * w).sum::<C64>() * C64::new(0.0, 2.0 * PI);
        assert!((v - want).norm() < 1e-6, "{v} vs {want}");
    }

    #[test]
    fn numeric_chern_line() {
        let d = CliffordSymbolData::new(vec![1]);
        let b = Bump::new(1.0, 2.0).unwrap();
        for x in [0.0, 0.7, -2.0] {
            let h = chern_support_integral(&d, x, 8.0, &b, &QuadratureSpec::default()).unwrap();
            let want = smooth_value(&SmoothFactor::chern_line(1), x).unwrap();
            assert!((h - want).norm() < 1e-8, "x = {x}: {h} vs {want}");
        }
    }
}
