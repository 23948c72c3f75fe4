//! Coordinate charts with a linear torus action, and the Cartan operators on
//! them.
//!
//! Variables of the coefficient ring are laid out as
//! `[coords..., params..., t]`. The fundamental field of `X` is
//! `VX = Σ_j X_j Σ_i field[j][i] ∂_i`, already including the sign of the
//! convention `VX = −X·(generator)`.

use super::expr::Expr;
use super::form::Form;
use crate::poly::MPoly;
use crate::scalar::{GaussQ, Q};
use std::fmt::Write;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    Circle,
    Line,
    Ray,
    Interval(Q, Q),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coord {
    pub name: String,
    pub domain: Domain,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    pub name: String,
    pub coords: Vec<Coord>,
    pub params: Vec<String>,
    /// `field[j][i]`: polynomial in the coordinates.
    pub field: Vec<Vec<MPoly>>,
    /// Sign of the chart's coordinate volume form against the symplectic orientation.
    pub orientation: i64,
}

impl Chart {
    pub fn new(name: &str, coords: Vec<(&str, Domain)>, params: Vec<&str>) -> Chart {
        let coords: Vec<Coord> = coords.into_iter().map(|(n, d)| Coord { name: n.into(), domain: d }).collect();
        let nv = coords.len() + params.len() + 1;
        let field = vec![vec![MPoly::zero(nv); coords.len()]; params.len()];
        Chart { name: name.into(), coords, params: params.into_iter().map(String::from).collect(), field, orientation: 1 }
    }
    pub fn dim(&self) -> usize {
        self.coords.len()
    }
    pub fn nvars(&self) -> usize {
        self.coords.len() + self.params.len() + 1
    }
    pub fn coord(&self, i: usize) -> MPoly {
        MPoly::var(self.nvars(), i)
    }
    pub fn param_var(&self, j: usize) -> usize {
        self.coords.len() + j
    }
    pub fn param(&self, j: usize) -> MPoly {
        MPoly::var(self.nvars(), self.param_var(j))
    }
    pub fn t_var(&self) -> usize {
        self.coords.len() + self.params.len()
    }
    pub fn param_vars(&self) -> Vec<usize> {
        (0..self.params.len()).map(|j| self.param_var(j)).collect()
    }
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c.name == name)
    }
    pub fn names(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.name.clone()).chain(self.params.iter().cloned()).chain(["t".to_string()]).collect()
    }
    pub fn set_field(&mut self, j: usize, comps: Vec<MPoly>) {
        assert_eq!(comps.len(), self.dim());
        self.field[j] = comps;
    }

    /// `Σ_j X_j field[j][i]`.
    pub fn field_component(&self, i: usize) -> MPoly {
        (0..self.params.len()).fold(MPoly::zero(self.nvars()), |acc, j| acc.add(&self.param(j).mul(&self.field[j][i])))
    }

    pub fn zero_form(&self) -> Form {
        Form::zero(self.nvars(), self.dim())
    }
    pub fn function(&self, e: Expr) -> Form {
        Form::scalar(self.dim(), e)
    }
    pub fn poly_function(&self, p: MPoly) -> Form {
        self.function(Expr::poly(p))
    }
    pub fn dx(&self, i: usize) -> Form {
        Form::gen(self.nvars(), self.dim(), i)
    }
    /// `Σ_i c_i dx_i`.
    pub fn one_form(&self, coeffs: &[MPoly]) -> Form {
        let mut f = self.zero_form();
        for (i, c) in coeffs.iter().enumerate() {
            f = f.add(&self.dx(i).mul_poly(c));
        }
        f
    }

    /// Exterior derivative in the coordinates.
    pub fn d(&self, a: &Form) -> Form {
        let mut r = self.zero_form();
        for (m, e) in &a.terms {
            for i in 0..self.dim() {
                let de = e.derivative(i);
                if de.is_zero() {
                    continue;
                }
                r = r.add(&self.dx(i).wedge(&Form::monomial(self.dim(), *m, de)));
            }
        }
        r
    }
    /// `ι(VX)`.
    pub fn iota(&self, a: &Form) -> Form {
        let mut r = self.zero_form();
        for i in 0..self.dim() {
            let v = self.field_component(i);
            if v.is_zero() {
                continue;
            }
            r = r.add(&a.contract(i).mul_poly(&v));
        }
        r
    }
    /// `D = d − ι(VX)`.
    pub fn big_d(&self, a: &Form) -> Form {
        self.d(a).sub(&self.iota(a))
    }
    /// Lie derivative along `VX`, from `L(f) = VX(f)` and `L(dx_i) = d(VX^i)`.
    pub fn lie(&self, a: &Form) -> Form {
        let mut r = self.zero_form();
        let comps: Vec<MPoly> = (0..self.dim()).map(|i| self.field_component(i)).collect();
        for (m, e) in &a.terms {
            let mut ve = Expr::zero(self.nvars());
            for (i, v) in comps.iter().enumerate() {
                ve = ve.add(&e.derivative(i).mul_poly(v));
            }
            r.add_term(*m, ve);
            // replace each dx_i in the monomial by d(VX^i), in place
            for i in 0..self.dim() {
                if m & (1 << i) == 0 {
                    continue;
                }
                let mut piece = Form::one(self.nvars(), self.dim());
                for k in 0..self.dim() {
                    if m & (1 << k) == 0 {
                        continue;
                    }
                    let factor = if k == i { self.d(&self.poly_function(comps[i].clone())) } else { self.dx(k) };
                    piece = piece.wedge(&factor);
                }
                r = r.add(&piece.mul_expr(e));
            }
        }
        r
    }
    /// Whether `L(α) = 0`.
    pub fn is_invariant(&self, a: &Form) -> bool {
        self.lie(a).is_zero()
    }

    /// Canonical text form used in golden tests.
    pub fn fmt_form(&self, a: &Form) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let names = self.names();
        let mut s = String::new();
        for (i, (m, e)) in a.terms.iter().enumerate() {
            if i > 0 {
                s.push_str(" + ");
            }
            let gens: Vec<String> = (0..self.dim()).filter(|k| m & (1 << k) != 0).map(|k| format!("d{}", names[k])).collect();
            let _ = write!(s, "{{{}}}", e.fmt_with(&names));
            if !gens.is_empty() {
                let _ = write!(s, " {}", gens.join("^"));
            }
        }
        s
    }
}

fn int(n: i64) -> GaussQ {
    GaussQ::int(n)
}

/// `T*S¹` with coordinates `(θ, ξ)`, circle acting with weight `w`:
/// `VX = −wX ∂_θ`. Symplectic orientation is `dθ∧dξ`.
pub fn cotangent_circle(w: i64) -> Chart {
    let mut c = Chart::new("T*S1", vec![("theta", Domain::Circle), ("xi", Domain::Line)], vec!["X"]);
    let n = c.nvars();
    c.set_field(0, vec![MPoly::constant(n, int(-w)), MPoly::zero(n)]);
    c
}

/// `C` as `(x, y)` with weight `w`: `VX = wX(y∂_x − x∂_y)`.
pub fn plane(w: i64) -> Chart {
    let mut c = Chart::new("C", vec![("x", Domain::Line), ("y", Domain::Line)], vec!["X"]);
    let (x, y) = (c.coord(0), c.coord(1));
    c.set_field(0, vec![y.scale(&int(w)), x.scale(&int(-w))]);
    c
}

/// `C^m` as `(x_1, y_1, ..., x_m, y_m)`, line `j` with weight `w_j`.
pub fn planes(weights: &[i64]) -> Chart {
    if weights.len() == 1 {
        return plane(weights[0]);
    }
    let names: Vec<(String, String)> = (1..=weights.len()).map(|j| (format!("x{j}"), format!("y{j}"))).collect();
    let coords = names.iter().flat_map(|(a, b)| [(a.as_str(), Domain::Line), (b.as_str(), Domain::Line)]).collect();
    let mut c = Chart::new("C^m", coords, vec!["X"]);
    let n = c.nvars();
    let mut comps = vec![MPoly::zero(n); c.dim()];
    for (j, &w) in weights.iter().enumerate() {
        comps[2 * j] = c.coord(2 * j + 1).scale(&int(w));
        comps[2 * j + 1] = c.coord(2 * j).scale(&int(-w));
    }
    c.set_field(0, comps);
    c
}

/// `T*C` as `(x, y, ξ₁, ξ₂)` with the cotangent lift of weight `w`.
/// The coordinate order gives the complex orientation of `C²`, opposite to
/// the symplectic one.
pub fn cotangent_plane(w: i64) -> Chart {
    let mut c = Chart::new(
        "T*C",
        vec![("x", Domain::Line), ("y", Domain::Line), ("xi1", Domain::Line), ("xi2", Domain::Line)],
        vec!["X"],
    );
    let (x, y, a, b) = (c.coord(0), c.coord(1), c.coord(2), c.coord(3));
    c.set_field(0, vec![y.scale(&int(w)), x.scale(&int(-w)), b.scale(&int(w)), a.scale(&int(-w))]);
    c.orientation = -1;
    c
}

/// Liouville form `−Σ ξ_i dq_i` on a cotangent chart whose first half of
/// coordinates are positions.
pub fn liouville(c: &Chart) -> Form {
    let n = c.dim() / 2;
    let mut coeffs = vec![MPoly::zero(c.nvars()); c.dim()];
    for (i, slot) in coeffs.iter_mut().enumerate().take(n) {
        *slot = c.coord(n + i).neg();
    }
    c.one_form(&coeffs)
}

/// `κ = w(−y dx + x dy)` on the plane chart.
pub fn rotation_one_form(c: &Chart, w: i64) -> Form {
    let (x, y) = (c.coord(0), c.coord(1));
    c.one_form(&[y.scale(&int(-w)), x.scale(&int(w))])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn liouville_on_cotangent_circle() {
        let c = cotangent_circle(1);
        let w = liouville(&c);
        let dw = c.big_d(&w);
        // dθ∧dξ − Xξ
        let xi = c.coord(1);
        let want = c.dx(0).wedge(&c.dx(1)).sub(&c.poly_function(c.param(0).mul(&xi)));
        assert_eq!(dw, want);
    }

    #[test]
    fn rotation_form_on_plane() {
        let c = plane(1);
        let k = rotation_one_form(&c, 1);
        let dk = c.big_d(&k);
        let r2 = c.coord(0).pow(2).add(&c.coord(1).pow(2));
        let want = c.dx(0).wedge(&c.dx(1)).scale(&int(2)).add(&c.poly_function(c.param(0).mul(&r2)));
        assert_eq!(dk, want);
        assert!(c.is_invariant(&k));
    }
}
