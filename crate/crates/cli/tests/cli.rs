use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_eqindex"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn schema() -> jsonschema::Validator {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema/index-report.schema.json");
    let s: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    jsonschema::validator_for(&s).unwrap()
}

fn load(p: &Path) -> Value {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    let errors: Vec<String> = schema().iter_errors(&v).map(|e| format!("{e} at {}", e.instance_path())).collect();
    assert!(errors.is_empty(), "{}: {errors:?}", p.display());
    v
}

fn without_timings(mut v: Value) -> Value {
    v["meta"].as_object_mut().unwrap().remove("timings_ms");
    v
}

#[test]
fn atiyah_both_methods_agree() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a.json");
    let o = run(&["compute", "--symbol", "atiyah", "--group", "s1", "--method", "both", "--window", "64", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v = load(&out);
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert_eq!(reports[0]["coefficients"], reports[1]["coefficients"]);
    let agreement = reports[0]["checks"].as_array().unwrap().iter().find(|c| c["name"] == "oracle agreement").unwrap();
    assert_eq!(agreement["residual"], 0.0);
    assert_eq!(reports[0]["coefficients"].as_array().unwrap().len(), 64);
}

#[test]
fn zero_gives_delta_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("z.json");
    let o = run(&["compute", "--symbol", "zero", "--group", "s1", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v = load(&out);
    let cs = v["reports"][0]["coefficients"].as_array().unwrap();
    assert_eq!(cs.len(), 129);
    assert!(cs.iter().all(|c| c["value"] == "1"));
}

#[test]
fn invalid_input_exits_3() {
    assert_eq!(code(&run(&["compute", "--symbol", "{\"kind\":\"atiyah\"}"])), 3);
    assert_eq!(code(&run(&["compute", "--symbol", "no-such-symbol"])), 3);
    assert_eq!(code(&run(&["compute", "--symbol", "atiyah", "--group", "t2"])), 3);
    assert_eq!(code(&run(&["compute", "--symbol", "atiyah", "--window", "0"])), 3);
    assert_eq!(code(&run(&["germ", "--symbol", "atiyah", "--point", "sqrt2"])), 3);
}

#[test]
fn evaluator_error_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"quadrature": {"schedule": [4.0]}}"#).unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "verify-axioms", "--only", "bump-independence"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let out = dir.path().join("r.json");
    std::fs::write(&cfg, r#"{"symbol": "atiyah-2", "window": 4, "method": "analytic"}"#).unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "compute", "--window", "6", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v = load(&out);
    assert_eq!(v["meta"]["config"]["window"], 6);
    assert_eq!(v["reports"][0]["method"], "analytic-oracle");
    let ks: Vec<i64> = v["reports"][0]["coefficients"].as_array().unwrap().iter().map(|c| c["weight"][0].as_i64().unwrap()).collect();
    assert_eq!(ks, vec![2, 4, 6]);
    std::fs::write(&cfg, r#"{"symbol": "atiyah", "colour": 1}"#).unwrap();
    assert_eq!(code(&run(&["--config", cfg.to_str().unwrap(), "compute"])), 3);
}

#[test]
fn germ_subcommand() {
    let o = run(&["germ", "--symbol", "atiyah", "--point", "-1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("(1/2)Y^[0]"), "{}", stdout(&o));
    let o = run(&["germ", "--symbol", "zero", "--point", "-1"]);
    assert!(stdout(&o).trim_end().ends_with(": 0"), "{}", stdout(&o));
    let o = run(&["germ", "--symbol", "zero", "--point", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("delta-type germ (flagged"), "{}", stdout(&o));
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    let o = run(&["germ", "--symbol", "bott-plane", "--point", "1/3", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(load(&out)["germ"]["point"], "turn=1/3");
}

#[test]
fn verify_axioms_only_and_fault() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.json");
    let o = run(&["verify-axioms", "--only", "multiplicativity", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v = load(&out);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["suite"] == "multiplicativity"));

    let o = run(&["verify-axioms", "--only", "gluing", "--inject-fault", "germ", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let v = load(&out);
    let failing: Vec<&Value> = v["checks"].as_array().unwrap().iter().filter(|c| c["pass"] == false).collect();
    assert_eq!(failing.len(), 1);
    assert!(failing[0]["name"].as_str().unwrap().starts_with("atiyah"));
    assert!(failing[0]["detail"].as_str().unwrap().starts_with("-1:"));
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let o = run(&["compute", "--symbol", "atiyah-x-atiyah", "--method", "both", "--window", "8", "--out", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
    }
    let (va, vb) = (without_timings(load(&a)), without_timings(load(&b)));
    assert_eq!(serde_json::to_string(&va).unwrap(), serde_json::to_string(&vb).unwrap());
}

#[test]
fn compare_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, c) = (dir.path().join("a.json"), dir.path().join("b.json"), dir.path().join("c.json"));
    run(&["compute", "--symbol", "pushed-spin", "--out", a.to_str().unwrap()]);
    run(&["oracle", "--symbol", "atiyah", "--out", b.to_str().unwrap()]);
    run(&["compute", "--symbol", "zero", "--out", c.to_str().unwrap()]);
    assert_eq!(code(&run(&["compare", a.to_str().unwrap(), b.to_str().unwrap()])), 0);
    let o = run(&["compare", c.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("k = [-64]"));
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Regenerate with `EQINDEX_BLESS=1 cargo test -p eqindex-cli --test cli golden`.
#[test]
fn golden_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let bless = std::env::var_os("EQINDEX_BLESS").is_some();
    for (name, _) in eqindex::symbols::catalog() {
        let out = dir.path().join(format!("{name}.json"));
        let o = run(&["compute", "--symbol", name, "--method", "both", "--window", "8", "--out", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{name}: {}", stdout(&o));
        let got = serde_json::to_string_pretty(&without_timings(load(&out))).unwrap() + "\n";
        let path = golden_dir().join(format!("{name}.json"));
        if bless {
            std::fs::write(&path, &got).unwrap();
        }
        let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
        assert_eq!(got, want, "{name} differs from its golden file");
    }
}
