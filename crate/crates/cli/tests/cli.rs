use std::process::Command;

fn qcfa(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qcfa")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn validate_reports_pass_and_fail() {
    let (code, out, _) = qcfa(&["validate", "unary-verifier:gamma=1/3"]);
    assert_eq!(code, 0, "{out}");
    let (code, out, err) = qcfa(&["validate", "binary-verifier:c=1"]);
    assert_eq!(code, 1);
    assert!(format!("{out}{err}").contains("FAIL"));
}

#[test]
fn runs_are_byte_identical() {
    let args = ["run", "power-eq", "-g", "perturb:0", "--engine", "mc", "--trials", "500", "--seed", "4"];
    let (c1, a, _) = qcfa(&args);
    let (c2, b, _) = qcfa(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert!(a.starts_with("schema_version,"));
}

#[test]
fn exact_rows_meet_their_bounds() {
    let (code, out, err) = qcfa(&["run", "power-eq", "-g", "power-eq:1", "-i", "abaaaaaaab"]);
    assert_eq!(code, 0, "{err}");
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.contains(",true,")), "{out}");
}

#[test]
fn empty_search_gives_an_empty_report() {
    let (code, out, err) = qcfa(&["search", "unary-verifier", "--format", "json"]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"].as_array().map(Vec::len), Some(0));
}

#[test]
fn dump_and_reload_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("upower.json");
    let path = path.to_str().unwrap();
    let (code, _, err) = qcfa(&["dump", "upower", "--out", path]);
    assert_eq!(code, 0, "{err}");
    let (_, a, _) = qcfa(&["run", "upower", "-i", "aaaaaaaa"]);
    let (_, b, _) = qcfa(&["run", path, "-i", "aaaaaaaa"]);
    let prob = |s: &str| s.lines().nth(1).unwrap().split(',').nth(7).unwrap().to_string();
    assert_eq!(prob(&a), prob(&b));
}

#[test]
fn unknown_machines_exit_with_two() {
    let (code, _, err) = qcfa(&["run", "no-such-machine", "-i", "a"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
}

#[test]
fn config_files_are_read() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("exp.json");
    std::fs::write(&path, r#"{"machine": "power-eq", "inputs": ["abaaaaaaa"], "format": "json"}"#).unwrap();
    let (code, out, err) = qcfa(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"][0]["accept_prob"], "1");
}
