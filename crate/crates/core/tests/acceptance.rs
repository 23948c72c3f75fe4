//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use eqindex::cartan::chart::{cotangent_circle, cotangent_plane, liouville, plane, planes, rotation_one_form};
use eqindex::cartan::numeric::{Bump, QuadratureSpec};
use eqindex::cartan::{bump_independence, par_equals_one_certificate};
use eqindex::cohindex::{
    assemble_index, assemble_index_with, free_action_index, index_germ_at, multiplicative_index, numeric_pairing_check, par_kappa_density, sample_points, Fault,
};
use eqindex::distributions::group::window;
use eqindex::distributions::{FourierDistribution, GeneralizedDensity, GroupDescriptor, GroupElement, Series, Taylor, TestFunction, Weight, DEFAULT_ORDER};
use eqindex::oracle::{compare, model_for, oracle_distribution, GROWTH_C, GROWTH_N};
use eqindex::poly::{sum_of_squares, UPoly};
use eqindex::scalar::{GaussQ, Q};
use eqindex::symbols::{catalog, SymbolDescriptor};
use proptest::test_runner::{Config, TestRunner};
use std::f64::consts::PI;
use std::time::Instant;

type Outcome = Result<String, String>;

fn named(n: &str) -> SymbolDescriptor {
    catalog().into_iter().find(|(k, _)| *k == n).unwrap_or_else(|| panic!("catalog entry {n}")).1
}

fn index(s: &SymbolDescriptor) -> Result<FourierDistribution, String> {
    let v = assemble_index(s, &sample_points(&s.group()), DEFAULT_ORDER).map_err(|e| e.to_string())?;
    if !v.glued() {
        return Err(format!("{s} does not glue: {:?}", v.glue));
    }
    v.distribution.ok_or_else(|| format!("{s}: no closed form"))
}

fn oracle(s: &SymbolDescriptor, w: i64) -> Result<FourierDistribution, String> {
    oracle_distribution(&model_for(s).map_err(|e| e.to_string())?, w).map_err(|e| e.to_string())
}

fn same(a: &FourierDistribution, b: &FourierDistribution, w: i64, what: &str) -> Result<(), String> {
    let r = compare(a, b, w, 0.0);
    if r.pass {
        Ok(())
    } else {
        Err(format!("{what}: {} (max residual {:.3e})", r.detail, r.max_residual))
    }
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn turn(p: i64, q: i64) -> GroupElement {
    GroupElement::circle(Q::new(p.into(), q.into()))
}

fn phis() -> Vec<TestFunction> {
    [0.0, 0.3, -0.5].iter().map(|&c| TestFunction::gaussian(c, 0.4)).collect()
}

const SCHEDULE: [f64; 5] = [4.0, 8.0, 16.0, 32.0, 64.0];

fn criterion_1() -> Outcome {
    let s = named("zero");
    let t = Instant::now();
    let d = index(&s)?;
    let symbolic = t.elapsed().as_secs_f64();
    for (k, c) in d.coefficients(64) {
        ensure(c == GaussQ::one(), format!("coefficient at {k} is {c}"))?;
    }
    same(&d, &oracle(&s, 64)?, 64, "zero vs oracle")?;
    let t = Instant::now();
    let bump = Bump::new(1.0, 2.0).unwrap();
    let mut worst: f64 = 0.0;
    for phi in phis() {
        let r = numeric_pairing_check(&s, &phi, &SCHEDULE, &bump, &QuadratureSpec::default(), 1e-6).map_err(|e| e.to_string())?;
        let err = (r.value - 2.0 * PI * phi.value(0.0)).norm();
        ensure(err < 1e-6, format!("{phi:?}: |pairing − 2πφ(0)| = {err:.3e}"))?;
        worst = worst.max(err);
    }
    let quad = t.elapsed().as_secs_f64();
    ensure(symbolic < 1.0, format!("symbolic path took {symbolic:.2}s"))?;
    ensure(quad < 60.0, format!("quadrature took {quad:.1}s"))?;
    Ok(format!("129 coefficients equal 1 and match the oracle; quadrature error ≤ {worst:.1e} for 3 test functions; symbolic {symbolic:.2}s, quadrature {quad:.1}s"))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let s = named("atiyah");
    let d = index(&s)?;
    for k in -64..=64 {
        let want = if k >= 1 { GaussQ::int(-1) } else { GaussQ::int(0) };
        let c = d.coeff(&Weight::scalar(k)).map_err(|e| e.to_string())?;
        ensure(c == want, format!("coefficient at {k} is {c}"))?;
    }
    same(&d, &oracle(&s, 64)?, 64, "atiyah vs oracle")?;
    // −s e^{iY} / (1 − s e^{iY}) at s = −1
    let minus_one = GaussQ::int(-1);
    let x = Series::linear(DEFAULT_ORDER, &[GaussQ::i()]).exp_nilpotent().scale(&minus_one);
    let want = x.neg().mul(&Series::one(1, DEFAULT_ORDER).sub(&x).inv().unwrap());
    let g = index_germ_at(&s, &turn(1, 2), DEFAULT_ORDER).map_err(|e| e.to_string())?;
    ensure(g.as_taylor() == Some(&Taylor::Exact(want)), format!("germ at -1 is {g}"))?;
    let u = par_kappa_density(1).map_err(|e| e.to_string())?;
    let half_line = GeneralizedDensity::piece(Some(Q::from_integer(0.into())), None, UPoly::constant(GaussQ::new(Q::from_integer(0.into()), Q::from_integer(2.into()))));
    ensure(u == half_line, format!("Par(κ) reduces to {u}"))?;
    let secs = t.elapsed().as_secs_f64();
    ensure(secs < 5.0, format!("took {secs:.2}s"))?;
    Ok(format!("−1 on [1,64], 0 elsewhere, zero oracle residual; exact germ at −1 to order {DEFAULT_ORDER}; Par(κ) = 2iπ·1_[0,∞); {secs:.2}s"))
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let line = named("bott-line");
    let pl = named("bott-plane");
    for s in [&line, &pl] {
        let g = index_germ_at(s, &s.group().identity(), DEFAULT_ORDER).map_err(|e| e.to_string())?;
        let n = s.group().rank;
        ensure(g.as_taylor() == Some(&Taylor::constant(n, DEFAULT_ORDER, GaussQ::one())), format!("{s} identity germ is {g}"))?;
        same(&index(s)?, &FourierDistribution::constant(&s.group(), GaussQ::one()), 64, "bott index")?;
    }
    let eps = GroupDescriptor::cyclic_group(2).diagonal(&Q::new(1.into(), 2.into())).unwrap();
    let g = index_germ_at(&line, &eps, DEFAULT_ORDER).map_err(|e| e.to_string())?;
    ensure(g.as_taylor() == Some(&Taylor::constant(0, DEFAULT_ORDER, GaussQ::one())), format!("germ at ε is {g}"))?;
    for p in [turn(1, 2), turn(1, 4), turn(3, 4)] {
        let g = index_germ_at(&pl, &p, DEFAULT_ORDER).map_err(|e| e.to_string())?;
        ensure(g.as_taylor() == Some(&Taylor::constant(1, DEFAULT_ORDER, GaussQ::one())), format!("germ at {p} is {g}"))?;
    }
    // e^{2πi/3} is not a Gaussian rational: the germ is a certified ball
    let mut gap: f64 = 0.0;
    for p in [turn(1, 3), turn(2, 5)] {
        let g = index_germ_at(&pl, &p, DEFAULT_ORDER).map_err(|e| e.to_string())?;
        let b = g.as_taylor().ok_or("not a Taylor germ")?.to_ball();
        for (e, c) in &b.terms {
            let target = if e.iter().all(|&x| x == 0) { 1.0 } else { 0.0 };
            gap = gap.max((c.mid.re - target).abs() + c.mid.im.abs() + c.rad);
        }
    }
    ensure(gap < 1e-9, format!("generic germ off 1 by {gap:.3e}"))?;
    let secs = t.elapsed().as_secs_f64();
    ensure(secs < 1.0, format!("took {secs:.2}s"))?;
    Ok(format!("identity germs exactly 1; ε germ 2/2 = 1; exact 1 at −1, ±i; within {gap:.1e} at e^(2πi/3), e^(4πi/5); {secs:.2}s"))
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let s = named("atiyah-x-atiyah");
    let v = multiplicative_index(&s).map_err(|e| e.to_string())?;
    ensure(v.glued(), "atiyah ⊙ atiyah does not glue")?;
    let d = v.distribution.ok_or("no closed form")?;
    for k in window(&s.group(), 32) {
        let want = if k.torus[0] >= 1 && k.torus[1] >= 1 { GaussQ::one() } else { GaussQ::int(0) };
        let c = d.coeff(&k).map_err(|e| e.to_string())?;
        ensure(c == want, format!("coefficient at {k} is {c}"))?;
    }
    same(&d, &oracle(&s, 32)?, 32, "tensor oracle")?;
    let b = named("bott-x-bott");
    let bd = multiplicative_index(&b).map_err(|e| e.to_string())?.distribution.ok_or("no closed form")?;
    same(&bd, &FourierDistribution::constant(&b.group(), GaussQ::one()), 32, "bott ⊙ bott")?;
    same(&bd, &oracle(&b, 32)?, 32, "bott ⊙ bott oracle")?;
    let secs = t.elapsed().as_secs_f64();
    ensure(secs < 5.0, format!("took {secs:.2}s"))?;
    Ok(format!("1 exactly on k1, k2 ≥ 1 in window 32, equal to the tensor oracle; bott ⊙ bott = 1; {secs:.2}s"))
}

fn criterion_5() -> Outcome {
    let p = named("free-point");
    let r = free_action_index(&p, 64).map_err(|e| e.to_string())?;
    ensure(r.comparison.pass, format!("free-point paths differ: {}", r.comparison.detail))?;
    let zero = index(&named("zero"))?;
    same(&r.cohomological, &zero, 64, "free-point cohomological vs criterion 1")?;
    same(&r.series, &zero, 64, "free-point series vs criterion 1")?;
    same(&index(&p)?, &zero, 64, "free-point assembled vs criterion 1")?;
    for n in ["free-circle", "free-atiyah"] {
        let s = named(n);
        let r = free_action_index(&s, 32).map_err(|e| e.to_string())?;
        ensure(r.comparison.pass && r.comparison.residual == 0.0, format!("{n}: {}", r.comparison.detail))?;
        let eqindex::symbols::SymbolKind::FreePullback { base, .. } = &s.kind else { unreachable!() };
        let b = index(base)?;
        // δ₁(τ)·index(σ)(m) is the base coefficient for every τ
        for k in window(&s.group(), 32) {
            let (_, m) = k.split(&GroupDescriptor::torus(1));
            let (x, y) = (r.cohomological.coeff(&k).map_err(|e| e.to_string())?, b.coeff(&m).map_err(|e| e.to_string())?);
            ensure(x == y, format!("{n} at {k}: {x} vs {y}"))?;
        }
    }
    Ok("S¹ over a point: both paths give the δ series of criterion 1; δ₁ ⊠ index factorization exact on window 32 for the flat S¹×S¹ bundle and for S¹ × C".into())
}

fn criterion_6() -> Outcome {
    let mut n = 0;
    for (name, s) in catalog() {
        let g = s.group();
        let pts: Vec<GroupElement> = [0, 1, 2, 3].iter().filter_map(|k| g.diagonal(&Q::new((*k).into(), 4.into()))).collect();
        let v = assemble_index(&s, &pts, 8).map_err(|e| e.to_string())?;
        ensure(v.glued(), format!("{name}: {:?}", v.glue))?;
        n += 1;
    }
    let s = named("atiyah");
    let pts: Vec<GroupElement> = [0, 1, 2, 3].iter().map(|&k| turn(k, 4)).collect();
    let f = Fault::Coefficient { weight: Weight::scalar(3), delta: GaussQ::frac(1, 1000) };
    let r = assemble_index_with(&s, &pts, 8, Some(&f)).map_err(|e| e.to_string())?.glue.ok_or("no glue report")?;
    ensure(!r.pass, "coefficient fault not detected")?;
    let located = r.entries.iter().find(|e| e.point.is_identity()).map(|e| e.comparison.detail.clone()).unwrap_or_default();
    ensure(located.contains("k = (3)"), format!("fault not localized: {located}"))?;
    let f = Fault::Germ { point: 2, delta: GaussQ::frac(1, 1000) };
    let r = assemble_index_with(&s, &pts, 8, Some(&f)).map_err(|e| e.to_string())?.glue.ok_or("no glue report")?;
    ensure(r.failing_points() == vec![&pts[2]], "germ fault not localized to −1")?;
    Ok(format!("{n} catalog symbols glue at 1, −1, i, −i to order 8; coefficient fault flagged at k = 3, germ fault at −1"))
}

fn criterion_7() -> Outcome {
    let s1 = named("contact-s1");
    same(&index(&s1)?, &FourierDistribution::delta(&GroupDescriptor::torus(1)), 64, "contact S¹ vs δ")?;
    let s3 = named("contact-s3");
    same(&index(&s3)?, &oracle(&s3, 32)?, 32, "contact S³ vs Hardy oracle")?;
    Ok("n = 0 gives the δ series exactly; S³ with diagonal weights equals the Hardy oracle on window 32".into())
}

fn criterion_8() -> Outcome {
    let a = index(&named("atiyah"))?;
    for n in ["pushed-clifford", "pushed-spin"] {
        same(&index(&named(n))?, &a, 64, n)?;
    }
    Ok("pushed σ_V and pushed spin equal the Atiyah index on window 64".into())
}

fn criterion_9() -> Outcome {
    let charts = [("T*S1", cotangent_circle(1)), ("C", plane(2)), ("T*C", cotangent_plane(1)), ("C^2", planes(&[1, -2]))];
    for (name, c) in &charts {
        let mut runner = TestRunner::new(Config { cases: 200, failure_persistence: None, ..Config::default() });
        runner
            .run(&common::terms(), |spec| {
                proptest::prop_assert!(common::d_squared_holds(c, &spec));
                Ok(())
            })
            .map_err(|e| format!("D² on {name}: {e}"))?;
    }
    let c = cotangent_circle(1);
    let a = sum_of_squares(c.nvars(), &[1]);
    let ok_omega = par_equals_one_certificate(&c, &liouville(&c), &a).map_err(|e| e.to_string())?.verified()
        && bump_independence(&c, &liouville(&c), &a, &a.scale(&GaussQ::int(3))).map_err(|e| e.to_string())?.verified();
    let p = plane(1);
    let b = sum_of_squares(p.nvars(), &[0, 1]);
    let k = rotation_one_form(&p, 1);
    let ok_kappa = par_equals_one_certificate(&p, &k, &b).map_err(|e| e.to_string())?.verified()
        && bump_independence(&p, &k, &b, &b.scale(&GaussQ::int(3))).map_err(|e| e.to_string())?.verified();
    ensure(ok_omega && ok_kappa, format!("Par certificates: ω {ok_omega}, κ {ok_kappa}"))?;
    let s = named("zero");
    let q = QuadratureSpec::default();
    let mut spread: f64 = 0.0;
    for phi in phis() {
        let x = numeric_pairing_check(&s, &phi, &SCHEDULE, &Bump::new(1.0, 2.0).unwrap(), &q, 1e-7).map_err(|e| e.to_string())?;
        let y = numeric_pairing_check(&s, &phi, &SCHEDULE, &Bump::new(0.5, 1.5).unwrap(), &q, 1e-7).map_err(|e| e.to_string())?;
        spread = spread.max((x.value - y.value).norm());
    }
    ensure(spread < 2e-6, format!("bump dependence {spread:.3e}"))?;
    let cq = Q::from_integer(GROWTH_C.into());
    for (name, s) in catalog() {
        ensure(index(&s)?.check_growth(&cq, GROWTH_N, 64), format!("{name} fails the growth bound"))?;
    }
    let powers = FourierDistribution::atoms(&GroupDescriptor::torus(1), (0..=40).map(|k| (Weight::scalar(k), GaussQ::int(1i64 << k))));
    ensure(!powers.check_growth(&cq, GROWTH_N, 64), "2^k series passed the growth bound")?;
    Ok(format!("D² = −L on 200 forms for each of {} charts; Par certificates for ω and κ; bump spread {spread:.1e}; growth holds for the catalog and fails for 2^k", charts.len()))
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 9] =
        [(1, criterion_1), (2, criterion_2), (3, criterion_3), (4, criterion_4), (5, criterion_5), (6, criterion_6), (7, criterion_7), (8, criterion_8), (9, criterion_9)];
    let mut failed = 0;
    for (n, f) in criteria {
        match f() {
            Ok(msg) => println!("criterion {n}: PASS: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n}: FAIL: {msg}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
