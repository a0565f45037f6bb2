use std::path::{Path, PathBuf};

use hh_core::cdg::random_cdg;
use hh_core::descriptor::{parse_descriptor, to_json, AlgebraDescriptor};
use hh_core::report::{parse_degrees, run_hh, HhRequest};
use jsonschema::{Registry, Validator};
use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn descriptor_schema() -> Value {
    read_json(&root().join("schemas/descriptor.schema.json"))
}

fn descriptor_validator() -> Validator {
    jsonschema::validator_for(&descriptor_schema()).unwrap()
}

fn report_validator() -> Validator {
    let registry = Registry::new()
        .add("https://example.org/hh/descriptor.schema.json", descriptor_schema())
        .unwrap()
        .prepare()
        .unwrap();
    jsonschema::options()
        .with_registry(&registry)
        .build(&read_json(&root().join("schemas/report.schema.json")))
        .unwrap()
}

fn descriptor_files() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(root().join("descriptors"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    v.sort();
    v
}

fn errors(v: &Validator, doc: &Value) -> Vec<String> {
    v.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path())).collect()
}

#[test]
fn shipped_descriptors_match_the_schema_and_parse() {
    let v = descriptor_validator();
    let files = descriptor_files();
    assert!(files.len() >= 5);
    for f in files {
        let doc = read_json(&f);
        assert_eq!(errors(&v, &doc), Vec::<String>::new(), "{}", f.display());
        let d = parse_descriptor(&doc.to_string()).unwrap();
        d.build().unwrap();
    }
}

#[test]
fn shipped_descriptors_round_trip() {
    for f in descriptor_files() {
        let d = parse_descriptor(&std::fs::read_to_string(&f).unwrap()).unwrap();
        let text = to_json(&d);
        assert_eq!(parse_descriptor(&text).unwrap(), d, "{}", f.display());
        let a = d.build().unwrap();
        let explicit = AlgebraDescriptor::explicit_from(&a);
        let b = parse_descriptor(&to_json(&explicit)).unwrap().build().unwrap();
        assert_eq!(b, a, "{}", f.display());
    }
}

#[test]
fn explicit_exports_match_the_schema() {
    let v = descriptor_validator();
    for seed in 0..10 {
        let d = AlgebraDescriptor::explicit_from(&random_cdg(seed));
        let doc: Value = serde_json::from_str(&to_json(&d)).unwrap();
        assert_eq!(errors(&v, &doc), Vec::<String>::new(), "seed {seed}");
    }
}

#[test]
fn schema_and_parser_reject_the_same_shapes() {
    let v = descriptor_validator();
    let bad = [
        r#"{"kind": "torus"}"#,
        r#"{"generators": 2}"#,
        r#"{"kind": "exterior", "generators": 2, "colour": "red"}"#,
        r#"{"kind": "exterior", "generators": "two"}"#,
        r#"{"kind": "truncated_polynomial", "variables": [{"name": "x", "weight": -1}], "order": 3}"#,
        r#"{"kind": "matrix_factorization", "variables": ["x"], "order": 3}"#,
        r#"{"kind": "explicit", "grading": "integer", "basis": [{"label": "1"}], "unit": "1"}"#,
        r#"{"kind": "explicit", "grading": "z", "basis": [{"label": "1", "degree": 0}], "unit": "1"}"#,
    ];
    for doc in bad {
        let value: Value = serde_json::from_str(doc).unwrap();
        assert!(!v.is_valid(&value), "schema accepted {doc}");
        assert!(parse_descriptor(doc).is_err(), "parser accepted {doc}");
    }
}

#[test]
fn reports_match_the_schema() {
    let v = report_validator();
    let cases = [
        ("dual_numbers.json", "0..4"),
        ("exterior_odd_minus_one.json", "0..3"),
        ("exterior_two.json", "0..2"),
        ("cusp_order5.json", "0..3"),
        ("truncated_xy.json", "0..1"),
    ];
    for (file, degrees) in cases {
        let d = parse_descriptor(&std::fs::read_to_string(root().join("descriptors").join(file)).unwrap()).unwrap();
        let req = HhRequest {
            degrees: parse_degrees(degrees).unwrap(),
            representatives: true,
            ..Default::default()
        };
        let report = run_hh(&d, &req).unwrap();
        let doc = serde_json::to_value(&report).unwrap();
        assert_eq!(errors(&v, &doc), Vec::<String>::new(), "{file}");
    }
}
