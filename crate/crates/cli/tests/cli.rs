//! End-to-end tests of the binary: golden values, JSON shapes, exit codes,
//! and byte stability.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lambda-local"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn catalog_q2_table_has_seven_rows_and_unit_product() {
    let out = run(&["lambda", "catalog", "q2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for ext in ["Q2(sqrt(5))", "Q2(sqrt(-1))", "Q2(sqrt(-5))", "Q2(sqrt(2))", "Q2(sqrt(10))", "Q2(sqrt(-2))", "Q2(sqrt(-10))"] {
        assert!(text.contains(ext), "missing {ext} in:\n{text}");
    }
    assert!(text.contains("product = 1"));
}

#[test]
fn catalog_q2_json_golden_values() {
    let out = run(&["--format", "json", "lambda", "catalog", "q2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["status"], "ok");
    let lambdas: Vec<&str> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["lambda"].as_str().unwrap())
        .collect();
    assert_eq!(lambdas, vec!["1", "i", "i", "1", "-1", "i", "-i"]);
}

#[test]
fn gauss_json_shape_and_agreement() {
    let out = run(&["--format", "json", "gauss", "--p", "3", "--s", "1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 2);
    for r in results {
        assert_eq!(r["p"], 3);
        assert_eq!(r["s"], 1);
        assert!(r["value"]["order"].is_u64());
        let numeric = r["numeric"].as_array().unwrap();
        // i*sqrt(3).
        assert!(numeric[0].as_f64().unwrap().abs() < 1e-9);
        assert!((numeric[1].as_f64().unwrap() - 3f64.sqrt()).abs() < 1e-9);
    }
    assert_eq!(v["checks"][0]["pass"], true);
}

#[test]
fn epsilon_returns_i_for_the_conductor_two_character() {
    let out = run(&[
        "--format",
        "json",
        "epsilon",
        "--p",
        "2",
        "--chi",
        r#"{"a":2,"on_uniformizer":"+1","on_units":{"3":"-1","5":"+1"}}"#,
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let r = &v["results"][0];
    assert_eq!(r["a"], 2);
    assert_eq!(r["n_psi"], 0);
    assert_eq!(r["checks"]["functional_eq"], true);
    assert_eq!(r["checks"]["unit_modulus"], true);
    let numeric = r["numeric"].as_array().unwrap();
    assert!(numeric[0].as_f64().unwrap().abs() < 1e-9);
    assert!((numeric[1].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn group_classify_catalog_and_file() {
    let out = run(&["--format", "json", "group", "classify", "--catalog", "Q8"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let r = &v["results"][0];
    assert_eq!(r["order"], 8);
    assert_eq!(r["sylow2_order"], 8);
    assert_eq!(r["class"], "MetacyclicNotCyclic{contains_klein: false}");
    assert_eq!(r["delta1_trivial"], true);

    let dir = std::env::temp_dir().join("lambda-local-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("z3.json");
    std::fs::write(&path, r#"{"order": 3, "table": [[0,1,2],[1,2,0],[2,0,1]]}"#).unwrap();
    let out = run(&["--format", "json", "group", "classify", "--in", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["results"][0]["class"], "Trivial");
}

#[test]
fn verify_lambda_scope_passes() {
    let out = bin()
        .env("LAMBDA_LOCAL_THREADS", "2")
        .args(["verify", "lambda"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("criteria passed"));
    assert!(!text.contains("[FAIL]"));
}

#[test]
fn dispatch_symbolic_and_rejection() {
    let out = run(&["lambda", "dispatch", "--catalog", "Z8", "--p", "5"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("W(alpha)"));

    // Non-metacyclic Sylow 2-subgroup over odd p is a computation error.
    let out = run(&["lambda", "dispatch", "--catalog", "Z2xZ2xZ2", "--p", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("TameImpossible"), "stderr: {err}");
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["gauss", "--p", "3"]); // missing --s
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn computation_errors_exit_one_with_error_name() {
    let out = run(&["gauss", "--p", "2", "--s", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("EvenCharacteristic"), "stderr: {err}");

    let out = run(&["lambda", "klein", "--q", "8"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("EvenResidueCharacteristic"), "stderr: {err}");
}

#[test]
fn output_is_byte_stable() {
    for args in [
        vec!["--format", "json", "lambda", "catalog", "q2"],
        vec!["--format", "json", "gauss", "--p", "7", "--s", "2"],
        vec!["lambda", "crosscheck", "--p", "11"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success());
        assert_eq!(stdout(&a), stdout(&b), "unstable output for {args:?}");
    }
}

#[test]
fn psi_shift_twists_the_catalog() {
    let out = run(&["--format", "json", "lambda", "catalog", "q2", "--psi-shift", "3"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["status"], "ok");
    // chi2(3) = -1 flips the sqrt(-1) row to -i.
    let lambdas: Vec<&str> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["lambda"].as_str().unwrap())
        .collect();
    assert_eq!(lambdas, vec!["1", "-i", "-i", "-1", "1", "i", "-i"]);
}
