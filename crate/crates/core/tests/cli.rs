use std::path::PathBuf;
use std::process::{Command, Output};

fn hh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hh"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn temp_json(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn validate_exit_codes() {
    let o = hh(&["validate", "descriptors/a2_surface.json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = hh(&["validate", "descriptors/nonassociative.json"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("Associativity"));
    let dir = tempfile::tempdir().unwrap();
    let p = temp_json(&dir, "bad.json", r#"{"kind": "exterior", "generators": -2}"#);
    let o = hh(&["validate", p.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("$.generators"), "{}", stderr(&o));
    let p = temp_json(&dir, "const.json", r#"{"kind": "matrix_factorization", "variables": ["x"], "potential": "x^2 + 1", "order": 4}"#);
    let o = hh(&["validate", p.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("$.potential"), "{}", stderr(&o));
    let o = hh(&["validate", "descriptors/missing.json"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn hh_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = hh(&[
        "hh",
        "descriptors/dual_numbers.json",
        "--degrees",
        "0..4",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let dims: Vec<u64> = r["results"]["bar"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["dimension"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, vec![2, 1, 1, 1, 1]);
}

#[test]
fn hh_both_pipelines_agree_on_a_potential() {
    let o = hh(&["hh", "descriptors/cusp_order5.json", "--degrees", "0..3", "--representatives"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["pipeline"], "both");
    assert_eq!(r["agreement"], true);
}

#[test]
fn hh_single_level_is_not_stabilized() {
    let o = hh(&["hh", "descriptors/dual_numbers.json", "--degrees", "0..2", "--schedule", "3"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("not stabilized"));
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["stabilized"], false);
}

#[test]
fn hh_usage_errors() {
    for args in [
        vec!["hh", "descriptors/dual_numbers.json", "--degrees", "2..1"],
        vec!["hh", "descriptors/dual_numbers.json", "--schedule", "a:b"],
        vec!["hh", "descriptors/dual_numbers.json", "--pipeline", "koszul"],
        vec!["hh", "descriptors/dual_numbers.json", "--pipeline", "fast"],
        vec!["hh", "descriptors/dual_numbers.json", "--degrees", "0..3", "--schedule", "1,2"],
        vec!["hh", "descriptors/curved_odd_square.json"],
        vec!["frobnicate"],
        vec![],
    ] {
        let o = hh(&args);
        assert_eq!(code(&o), 2, "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn verify_runs_and_catches_a_mutation() {
    let o = hh(&["verify", "--suite", "koszul"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS"));
    let o = hh(&["verify", "--suite", "koszul", "--mutate", "cofactor:0"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL"));
    let o = hh(&["verify", "--suite", "koszul", "--mutate", "nonsense"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn thread_cap_is_accepted() {
    let o = Command::new(env!("CARGO_BIN_EXE_hh"))
        .args(["hh", "descriptors/exterior_odd_minus_one.json", "--degrees", "0..3"])
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env("HH_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    if r["timing"]["parallel"] == true {
        assert_eq!(r["timing"]["threads"], 1);
    }
}
