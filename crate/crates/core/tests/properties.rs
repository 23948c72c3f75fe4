mod common;

use eqindex::cartan::chart::{cotangent_circle, cotangent_plane, liouville, plane, planes, rotation_one_form};
use eqindex::cartan::{bump_independence, par_equals_one_certificate, Chart};
use eqindex::cohindex::{assemble_index, sample_points};
use eqindex::distributions::group::window;
use eqindex::distributions::{FourierDistribution, GroupDescriptor, Weight, DEFAULT_ORDER};
use eqindex::oracle::{model_for, oracle_distribution, ModelOperator, GROWTH_C, GROWTH_N};
use eqindex::poly::sum_of_squares;
use eqindex::scalar::{GaussQ, Q};
use proptest::prelude::*;

fn d_squared(c: &Chart, spec: &[(u64, Vec<common::Monomial>, bool)]) -> Result<(), TestCaseError> {
    prop_assert!(common::d_squared_holds(c, spec));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn d_squared_on_cotangent_circle(spec in common::terms(), w in 1i64..4) {
        d_squared(&cotangent_circle(w), &spec)?;
    }

    #[test]
    fn d_squared_on_plane(spec in common::terms(), w in -3i64..4) {
        d_squared(&plane(w), &spec)?;
    }

    #[test]
    fn d_squared_on_cotangent_plane(spec in common::terms(), w in 1i64..3) {
        d_squared(&cotangent_plane(w), &spec)?;
    }

    #[test]
    fn d_squared_on_two_planes(spec in common::terms()) {
        d_squared(&planes(&[1, -2]), &spec)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn par_certificates_for_liouville(w in 1i64..4, r in 1i64..4) {
        let c = cotangent_circle(w);
        let arg = sum_of_squares(c.nvars(), &[1]);
        prop_assert!(par_equals_one_certificate(&c, &liouville(&c), &arg).unwrap().verified());
        let other = arg.scale(&GaussQ::int(r));
        prop_assert!(bump_independence(&c, &liouville(&c), &arg, &other).unwrap().verified());
    }

    #[test]
    fn par_certificates_for_rotation_form(w in 1i64..4, r in 1i64..4) {
        let c = plane(w);
        let arg = sum_of_squares(c.nvars(), &[0, 1]);
        let k = rotation_one_form(&c, w);
        prop_assert!(par_equals_one_certificate(&c, &k, &arg).unwrap().verified());
        let other = arg.scale(&GaussQ::int(r));
        prop_assert!(bump_independence(&c, &k, &arg, &other).unwrap().verified());
    }
}

fn ops() -> impl Strategy<Value = ModelOperator> {
    let leaf = prop_oneof![
        (0usize..3).prop_map(|n| ModelOperator::FunctionSpaceOnTorus { n }),
        (1i64..4).prop_map(|weight| ModelOperator::WeightedDbar { weight }),
        (1i64..3).prop_map(|w| ModelOperator::BottOscillator { weights: vec![w], modulus: None }),
        Just(ModelOperator::BottOscillator { weights: vec![1], modulus: Some(2) }),
        (0usize..3, prop_oneof![Just(1i64), Just(-1i64)]).prop_map(|(n, weight)| ModelOperator::HardyBoundary { n, weight }),
    ];
    let pair = (leaf.clone(), leaf.clone()).prop_map(|(a, b)| ModelOperator::Tensor(vec![a, b]));
    prop_oneof![leaf, pair]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_cutoff_stability(op in ops()) {
        let g = op.group();
        let lo = op.table(16).unwrap();
        let hi = op.table(32).unwrap();
        for k in window(&g, 8) {
            prop_assert_eq!(lo.get(&k), hi.get(&k), "{} at {}", op, k);
        }
    }
}

fn leaves() -> Vec<ModelOperator> {
    vec![
        ModelOperator::FunctionSpaceOnTorus { n: 1 },
        ModelOperator::WeightedDbar { weight: 1 },
        ModelOperator::WeightedDbar { weight: 2 },
        ModelOperator::BottOscillator { weights: vec![1], modulus: None },
        ModelOperator::HardyBoundary { n: 1, weight: 1 },
    ]
}

#[test]
fn oracle_tensor_multiplicativity_on_window_16() {
    for a in leaves() {
        for b in leaves() {
            let (ta, tb) = (a.table(32).unwrap(), b.table(32).unwrap());
            let t = ModelOperator::Tensor(vec![a.clone(), b.clone()]).table(32).unwrap();
            for k1 in window(&a.group(), 16) {
                for k2 in window(&b.group(), 16) {
                    assert_eq!(t.get(&k1.concat(&k2)), ta.get(&k1) * tb.get(&k2), "{a} ⊗ {b} at {k1}, {k2}");
                }
            }
        }
    }
}

#[test]
fn growth_certified_for_every_index() {
    let c = Q::from_integer(GROWTH_C.into());
    for (name, s) in eqindex::symbols::catalog() {
        let v = assemble_index(&s, &sample_points(&s.group()), DEFAULT_ORDER).unwrap();
        assert!(v.distribution.unwrap().check_growth(&c, GROWTH_N, 64), "{name}");
        let o = oracle_distribution(&model_for(&s).unwrap(), 16).unwrap();
        // values 0, ±1, or linear in k, except the quadratic Hardy count on S^5
        let n = if name == "contact-s5" { 2 } else { 1 };
        assert!(o.check_growth(&c, n, 16), "{name} oracle");
    }
}

#[test]
fn growth_fails_for_powers_of_two() {
    let g = GroupDescriptor::torus(1);
    let d = FourierDistribution::atoms(&g, (0..=40).map(|k| (Weight::scalar(k), GaussQ::int(1i64 << k))));
    assert!(!d.check_growth(&Q::from_integer(GROWTH_C.into()), GROWTH_N, 64));
}
