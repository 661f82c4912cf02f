use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_saito-workbench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = run(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout))
    });
    (v, out.status.code().unwrap())
}

fn schema() -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas/report.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_schema(v: &Value) {
    let validator = jsonschema::validator_for(&schema()).unwrap();
    let errors: Vec<String> = validator.iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
}

fn dims(v: &Value) -> Vec<u64> {
    v["per_weight"].as_array().unwrap().iter().map(|w| w["dim"].as_u64().unwrap()).collect()
}

#[test]
fn info_wreath_r1() {
    let (v, code) = json(&["info", "--family", "wreath", "--r", "1", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["hyperplanes"], 6);
    assert_eq!(v["free"], true);
    assert_eq!(v["triangular"], true);
    assert_eq!(v["bezout"], true);
    assert_eq!(v["orthogonality"], true);
    assert_eq!(v["weights"], serde_json::json!([0, 1, 2]));
}

#[test]
fn info_braid4() {
    let (v, code) = json(&["info", "--family", "braid", "--n", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["hyperplanes"], 6);
    assert_eq!(v["free"], true);
}

#[test]
fn info_repeated_hyperplane() {
    let path = std::env::temp_dir().join(format!("saito-bad-{}.json", std::process::id()));
    std::fs::write(
        &path,
        r#"{"n": 3, "field": "Q", "forms": [["1","0","0"],["0","1","0"],["0","0","1"],["-1","1","0"],["0","-3","0"]]}"#,
    )
    .unwrap();
    let out = run(&["info", "--file", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("forms 2 and 5 proportional"));
}

#[test]
fn file_round_trip_through_info() {
    let path = std::env::temp_dir().join(format!("saito-good-{}.json", std::process::id()));
    std::fs::write(
        &path,
        r#"{"n": 2, "field": "Q", "forms": [["1","0"],["0","1"],["-1","1"]],
            "basis": [["x1","x2"],["0","x2^2 - x1*x2"]]}"#,
    )
    .unwrap();
    let (v, code) = json(&["info", "--file", path.to_str().unwrap()]);
    let out = run(&["check", "--file", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, 0);
    assert_eq!(v["free"], true);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn malformed_polynomial_reports_column() {
    let path = std::env::temp_dir().join(format!("saito-col-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"n": 2, "field": "Q", "forms": [["1","0"],["0","1"]], "basis": [["x1","x2"],["0","x2*)"]]}"#).unwrap();
    let out = run(&["info", "--file", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("column"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["cohomology", "--space", "coker", "--family", "wreath", "--weights", "3"]).status.code(), Some(2));
    assert_eq!(run(&["info", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["info"]).status.code(), Some(2));
    assert_eq!(run(&["info", "--family", "wreath", "--n", "3", "--r", "0"]).status.code(), Some(2));
}

#[test]
fn coker_dims() {
    let (v, code) = json(&["cohomology", "--space", "coker", "--family", "wreath", "--r", "1", "--weights", "-1..6"]);
    assert_eq!(code, 0);
    assert_schema(&v);
    assert_eq!(&dims(&v)[..2], &[3, 8]);
}

#[test]
fn h1su_matches_prediction() {
    let (v, code) = json(&["cohomology", "--space", "h1su", "--family", "wreath", "--r", "2", "--max-order", "2", "--weights", "-1..5"]);
    assert_eq!(code, 0);
    assert_schema(&v);
    assert_eq!(v["match"], true);
    assert_eq!(v["stabilized"], true);
}

#[test]
fn ce_s_deleted_braid() {
    let (v, code) = json(&["cohomology", "--space", "ce-s", "--family", "braid_deleted", "--n", "2"]);
    assert_eq!(code, 0);
    assert_schema(&v);
    assert_eq!(v["total"], 3);
    assert_eq!(v["match"], true);
}

#[test]
fn ce_h1_and_predict_reports() {
    for space in ["ce-h1", "predict-h1", "h0su"] {
        let (v, code) = json(&["cohomology", "--space", space, "--family", "wreath", "--r", "1", "--max-order", "2", "--weights", "-1..3"]);
        assert_eq!(code, 0, "{space}");
        assert_schema(&v);
    }
}

#[test]
fn verify_center_r2() {
    let (v, code) = json(&["verify", "--suite", "center", "--family", "wreath", "--r", "2", "--weights", "0..4"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
}

#[test]
fn verify_hh1_r1() {
    let (v, code) = json(&["verify", "--suite", "hh1", "--family", "wreath", "--r", "1"]);
    assert_eq!(code, 0);
    assert!(v["results"][0]["actual"].as_str().unwrap().starts_with("6 "));
}

#[test]
fn verify_commutation_reports_scalars() {
    let (v, code) = json(&["verify", "--suite", "commutation", "--family", "wreath", "--r", "1"]);
    assert_eq!(code, 0);
    let notes = v["results"][0]["notes"].to_string();
    assert!(notes.contains("[E,C] computed (2)*a3"));
    assert!(notes.contains("3·C"));
}

#[test]
fn verify_liftings_r2_flags_the_action_formula() {
    let (v, code) = json(&["verify", "--suite", "liftings", "--family", "wreath", "--r", "2"]);
    assert_eq!(code, 1);
    let fails: Vec<&str> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["status"] == "fail")
        .map(|r| r["id"].as_str().unwrap())
        .collect();
    assert_eq!(fails, vec!["dsharp/wreath(n=3, r=2)"]);
}

#[test]
fn deterministic_output() {
    let args = ["--format", "json", "--jobs", "2", "verify", "--suite", "pbw", "--family", "wreath", "--r", "1"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn seed_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_saito-workbench"))
        .args(["--format", "json", "verify", "--suite", "pbw", "--family", "wreath", "--r", "1"])
        .env("SAITO_WORKBENCH_SEED", "42")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 42);
}

#[test]
fn text_mirrors_json_fields() {
    let args = ["cohomology", "--space", "coker", "--family", "wreath", "--r", "1", "--weights", "-1..2"];
    let (v, _) = json(&args);
    let text = String::from_utf8(run(&args).stdout).unwrap();
    for key in v.as_object().unwrap().keys() {
        assert!(text.contains(&format!("{key}:")), "{key} missing from text output");
    }
    for w in v["per_weight"].as_array().unwrap() {
        let row = format!(
            "{:>6} {:>8} {:>8} {:>8}",
            w["weight"].as_i64().unwrap(),
            w["ker"].as_u64().unwrap(),
            w["im"].as_u64().unwrap(),
            w["dim"].as_u64().unwrap()
        );
        assert!(text.contains(&row));
    }
}
