//! Random forms shared by the property suites and the acceptance target.

use eqindex::cartan::{Chart, Expr, Form};
use eqindex::poly::{sum_of_squares, MPoly};
use eqindex::scalar::GaussQ;
use proptest::prelude::*;

pub type Monomial = (Vec<u32>, i64);

pub type FormSpec = Vec<(u64, Vec<Monomial>, bool)>;

pub fn terms() -> impl Strategy<Value = FormSpec> {
    let mono = (prop::collection::vec(0u32..3, 8), -3i64..=3);
    prop::collection::vec((0u64..16, prop::collection::vec(mono, 1..4), any::<bool>()), 1..4)
}

/// Polynomial coefficients in the coordinates and parameters, some of them
/// times a Gaussian atom.
pub fn build(c: &Chart, spec: &[(u64, Vec<Monomial>, bool)]) -> Form {
    let n = c.nvars();
    let full = (1u64 << c.dim()) - 1;
    let mut f = c.zero_form();
    for (mask, monos, gauss) in spec {
        let mut p = MPoly::zero(n);
        for (e, k) in monos {
            let mut ex = vec![0; n];
            for i in 0..c.dim() {
                ex[i] = e[i % e.len()];
            }
            ex[c.param_var(0)] = e[7] % 2;
            p = p.add(&MPoly::monomial(ex, GaussQ::int(*k)));
        }
        let mut e = Expr::poly(p);
        if *gauss {
            e = e.mul(&Expr::gauss(sum_of_squares(n, &[0])));
        }
        f = f.add(&Form::monomial(c.dim(), mask & full, e));
    }
    f
}

/// Whether `D² = −L` holds exactly on the form built from `spec`.
pub fn d_squared_holds(c: &Chart, spec: &[(u64, Vec<Monomial>, bool)]) -> bool {
    let a = build(c, spec);
    c.big_d(&c.big_d(&a)) == c.lie(&a).neg()
}
