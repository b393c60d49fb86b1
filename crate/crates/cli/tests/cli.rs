use std::process::{Command, Output};

use serde_json::Value;

fn rbu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rbu")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = rbu(&full);
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}: {}", stdout(&o)))
}

#[test]
fn documented_examples() {
    for (args, want) in [
        (&["gamma", "--space", "bn", "--n", "3"][..], "Z/9; spin {}: 3·μ1"),
        (&["cf", "--p", "9", "--q", "2"], "[-5, -2] = -9/2"),
        (&["h1", "--space", "cn", "--n", "2"], "Z/4"),
    ] {
        let o = rbu(args);
        assert!(o.status.success(), "{args:?}");
        assert_eq!(stdout(&o).trim_end(), want);
    }
}

#[test]
fn gamma_record() {
    let v = json(&["gamma", "--space", "bn", "--n", "4"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "gamma");
    assert_eq!(v["order"], "16");
    let values = v["values"].as_array().unwrap();
    assert_eq!(values.len(), 2);
    assert_eq!(values[0]["spin"], serde_json::json!(["K2"]));
    assert_eq!(values[0]["coeff"], "14");
    assert_eq!(values[1]["coeff"], "6");
    assert_eq!(values[1]["generator"], "μ1");
}

#[test]
fn lens_discrepancy_is_a_warning() {
    let o = rbu(&["gamma", "--space", "lens", "--n", "6"]);
    assert!(o.status.success());
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("warning") && err.contains("Γ(t2)"), "{err}");
    let v = json(&["gamma", "--space", "lens", "--n", "6"]);
    assert_eq!(v["ok"], true);
    assert_eq!(v["warnings"].as_array().unwrap().len(), 1);
    let odd = json(&["gamma", "--space", "lens", "--n", "5"]);
    assert!(odd["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn json_is_stable() {
    for args in [
        &["verify", "--n-range", "2..4"][..],
        &["kirby", "--script", "fig12", "--n", "3"],
        &["symcheck", "--check", "stereo", "--grid", "4", "2"],
    ] {
        let mut full = vec!["--json"];
        full.extend_from_slice(args);
        assert_eq!(rbu(&full).stdout, rbu(&full).stdout, "{args:?}");
    }
}

#[test]
fn verify_reports_pairings() {
    let v = json(&["verify", "--n-range", "2..2"]);
    assert_eq!(v["ok"], true);
    let checks = v["checks"].as_array().unwrap();
    let ml = checks.iter().find(|c| c["name"] == "mu_lambda n=2").unwrap();
    assert_eq!(ml["detail"], "r1↔s1, r2↔s2");
    let summary = v["summary"].as_array().unwrap();
    assert_eq!(summary.len(), 8);
}

#[test]
fn verify_with_numerics() {
    let o = rbu(&["verify", "--n-range", "3..3", "--numerics", "--grid", "8", "4"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("ok   [9]")), "{out}");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["verify", "--n-range", "5..3"][..],
        &["verify", "--n-range", "1..3"],
        &["verify", "--n-range", "x"],
        &["gamma", "--space", "xx", "--n", "3"],
        &["gamma", "--space", "bn"],
        &["cf", "--p", "9", "--q", "3"],
        &["symcheck", "--check", "nope"],
        &["symcheck", "--check", "flow", "--psi", "cos"],
        &["kirby", "--script", "missing.kirby", "--n", "3"],
        &["--fixtures", "/nonexistent/dir", "h1", "--space", "bn", "--n", "3"],
        &[],
    ] {
        assert_eq!(rbu(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn failing_check_exits_1() {
    let dir = std::env::temp_dir().join(format!("rbu-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    // A wrong linking number changes the bn boundary group.
    let bn = "handle K1\ncomp K2 {-n-1}\nlk K1 K2 {-n+1}\nfront K2 {-(n-1)} 0 1 0 1 {n} 0\nsymbol K1 μ1\nsymbol K2 μ2\nprefer K1\nif n % 2 == 0\nspin s1 K2\nspin s2 K1 K2\nelse\nspin s\nend\n";
    std::fs::write(dir.join("bn.rbu"), bn).unwrap();
    let o = rbu(&["--fixtures", dir.to_str().unwrap(), "verify", "--n-range", "3..3"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn diagram_from_file() {
    let dir = std::env::temp_dir().join(format!("rbu-cli-file-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("chain.rbu");
    std::fs::write(&path, "chain -5 -2\n").unwrap();
    let o = rbu(&["h1", "--file", path.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "Z/9");
    let o = rbu(&["spin", "--file", path.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "s = {K2}");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn symcheck_failure_exits_1() {
    // A too-large step ruins the flow-equation tolerance.
    let o = rbu(&["symcheck", "--check", "flow", "--grid", "4", "2", "--h", "0.3"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}
