use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tapp::ErrorCode;

fn tapp(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tapp"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: {}\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

const MATMUL: &str = r#"{"einsum": "ij,jk->ik", "alpha": 1, "beta": 0,
    "a": {"dtype": "r64", "extents": [2, 2], "data": [1, 3, 2, 4]},
    "b": {"dtype": "r64", "extents": [2, 2], "data": [5, 7, 6, 8]},
    "d": {"dtype": "r64", "extents": [2, 2]}}"#;

#[test]
fn run_matmul() {
    let out = tapp(&["run", "-"], Some(MATMUL));
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["d"]["values"], serde_json::json!([19.0, 43.0, 22.0, 50.0]));
    assert_eq!(doc["d"]["strides"], serde_json::json!([1, 2]));
    assert_eq!(doc["status"]["elements_written"], 4);
    assert_eq!(doc["status"]["multiply_adds"], 8);
}

#[test]
fn run_scalar_product() {
    let case = r#"{"einsum": ",->", "alpha": 1, "beta": 0,
        "a": {"dtype": "r64", "extents": [], "data": [2]},
        "b": {"dtype": "r64", "extents": [], "data": [3]},
        "d": {"dtype": "r64", "extents": []}}"#;
    let out = tapp(&["run", "-"], Some(case));
    assert!(out.status.success());
    assert_eq!(json(&out)["d"]["values"], serde_json::json!([6.0]));
}

#[test]
fn run_reports_error_codes() {
    let bad = MATMUL.replace(
        r#""extents": [2, 2], "data": [5, 7, 6, 8]"#,
        r#""extents": [3, 2], "data": [5, 7, 6, 8, 9, 9]"#,
    );
    let out = tapp(&["run", "-"], Some(&bad));
    assert_eq!(out.status.code(), Some(ErrorCode::ExtentMismatch.as_i32()));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "ERR_EXTENT_MISMATCH");

    let out = tapp(&["run", "-"], Some("not json"));
    assert_eq!(out.status.code(), Some(ErrorCode::Parse.as_i32()));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(tapp(&["gen", "--case", "29"], None).status.code(), Some(2));
    assert_eq!(tapp(&["frobnicate"], None).status.code(), Some(2));
}

#[test]
fn gen_is_deterministic_and_runnable() {
    let first = tapp(&["gen", "--case", "12", "--seed", "99"], None);
    let second = tapp(&["gen", "--case", "12", "--seed", "99"], None);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let spec = json(&first);
    for t in ["a", "b"] {
        let strides = spec[t]["strides"].as_array().unwrap();
        assert!(strides.iter().all(|s| s.as_i64().unwrap() < 0));
        let extents = spec[t]["extents"].as_array().unwrap();
        assert!(extents.len() <= 4);
        assert!(extents.iter().all(|e| (1..=8).contains(&e.as_u64().unwrap())));
    }
    let text = String::from_utf8(first.stdout).unwrap();
    assert!(tapp(&["check", "-"], Some(&text)).status.success());
}

#[test]
fn check_detects_perturbation() {
    let out = tapp(&["check", "-"], Some(MATMUL));
    assert!(out.status.success());
    assert_eq!(json(&out)["outcome"], "pass");

    let out = tapp(&["check", "-", "--perturb", "1e-6"], Some(MATMUL));
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["outcome"], "mismatch");

    // a loose tolerance absorbs the same shift
    let out = tapp(
        &["check", "-", "--perturb", "1e-6", "--tolerance", "1e-5"],
        Some(MATMUL),
    );
    assert!(out.status.success());
}

#[test]
fn check_rejects_alike() {
    let aliased = MATMUL.replace(
        r#""d": {"dtype": "r64", "extents": [2, 2]}"#,
        r#""d": {"dtype": "r64", "extents": [2, 2], "strides": [1, 0]}"#,
    );
    let out = tapp(&["check", "-"], Some(&aliased));
    assert_eq!(out.status.code(), Some(ErrorCode::Aliasing.as_i32()));
    let doc = json(&out);
    assert_eq!(doc["outcome"], "rejected");
    assert_eq!(doc["code"], "ERR_ALIASING");
}

#[test]
fn suite_single_categories() {
    for case in ["3", "28"] {
        let out = tapp(&["suite", "--seed", "42", "--iterations", "20", "--case", case], None);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
        let report = json(&out);
        assert_eq!(report["passed"], 20);
        assert_eq!(report["categories"].as_array().unwrap().len(), 1);
        assert_eq!(report["seed"], 42);
    }
}

#[test]
fn suite_report_is_deterministic() {
    let strip = |out: Output| {
        let mut v = json(&out);
        v["failures"] = Value::Null;
        v
    };
    let a = strip(tapp(&["suite", "--seed", "7", "--iterations", "3"], None));
    let b = strip(tapp(&["suite", "--seed", "7", "--iterations", "3"], None));
    assert_eq!(a, b);
    assert_eq!(a["passed"], 84);
}
