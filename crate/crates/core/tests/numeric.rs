use eqindex::cartan::numeric::{Bump, QuadratureSpec};
use eqindex::cohindex::numeric_pairing_check;
use eqindex::distributions::TestFunction;
use eqindex::symbols::SymbolDescriptor;

const SCHEDULE: [f64; 5] = [4.0, 8.0, 16.0, 32.0, 64.0];

fn phis() -> Vec<TestFunction> {
    [0.0, 0.3, -0.5].iter().map(|&c| TestFunction::gaussian(c, 0.4)).collect()
}

#[test]
fn zero_operator_pairs_to_point_evaluation() {
    let bump = Bump::new(1.0, 2.0).unwrap();
    let q = QuadratureSpec::default();
    for phi in phis() {
        let r = numeric_pairing_check(&SymbolDescriptor::zero_on_torus(1), &phi, &SCHEDULE, &bump, &q, 1e-6).unwrap();
        assert!(r.pass(), "{phi:?}: {r:?}");
    }
}

#[test]
fn zero_operator_is_bump_independent() {
    let q = QuadratureSpec::default();
    let s = SymbolDescriptor::zero_on_torus(1);
    for phi in phis() {
        let a = numeric_pairing_check(&s, &phi, &SCHEDULE, &Bump::new(1.0, 2.0).unwrap(), &q, 1e-7).unwrap();
        let b = numeric_pairing_check(&s, &phi, &SCHEDULE, &Bump::new(0.5, 1.5).unwrap(), &q, 1e-7).unwrap();
        assert!((a.value - b.value).norm() < 2e-6);
    }
}

#[test]
fn atiyah_and_bott_quadrature() {
    let bump = Bump::new(1.0, 2.0).unwrap();
    let q = QuadratureSpec::default();
    let phi = TestFunction::gaussian(0.3, 0.4);
    for s in [SymbolDescriptor::atiyah(1), SymbolDescriptor::bott_plane(1)] {
        let r = numeric_pairing_check(&s, &phi, &SCHEDULE, &bump, &q, 1e-6).unwrap();
        assert!(r.pass(), "{s}: {r:?}");
    }
}

#[test]
fn quadrature_rejects_unsupported_symbols() {
    let bump = Bump::new(1.0, 2.0).unwrap();
    let r = numeric_pairing_check(&SymbolDescriptor::bott_line(), &TestFunction::gaussian(0.0, 0.4), &SCHEDULE, &bump, &QuadratureSpec::default(), 1e-6);
    assert!(r.is_err());
}
