use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

fn qsign(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsign"))
        .args(args)
        .env_remove("QSIGN_PRECISION_BITS")
        .output()
        .expect("qsign runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json_out(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn schema_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas/v1").join(format!("{name}.schema.json"))
}

fn assert_valid(name: &str, instance: &Value) {
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(schema_path(name)).unwrap()).unwrap();
    let compiled = JSONSchema::compile(&schema).expect("schema compiles");
    let msgs: Vec<String> = match compiled.validate(instance) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{name}: {msgs:?}");
}

fn coeff(series: &Value, n: usize) -> String {
    series["coeffs"][n].as_str().unwrap().to_owned()
}

#[test]
fn expand_examples() {
    let out = qsign(&["expand", "--delta", "1", "--order", "50"]);
    assert_eq!(code(&out), 0);
    let v = json_out(&out);
    assert_valid("series", &v);
    assert_eq!(coeff(&v, 47), "0");

    let v = json_out(&qsign(&["expand", "--delta", "-1", "--order", "10"]));
    assert_eq!(coeff(&v, 3), "0");
    assert_eq!(v["coeffs"].as_array().unwrap().len(), 11);

    let v = json_out(&qsign(&["expand", "--delta", "1", "--order", "0"]));
    assert_eq!(v["coeffs"], serde_json::json!(["1"]));
}

#[test]
fn expand_csv_and_plain() {
    let out = qsign(&["expand", "--delta", "1", "--order", "5", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("n,coefficient"));
    assert_eq!(text.lines().count(), 7);
    let out = qsign(&["expand", "--delta", "1", "--order", "2", "--format", "plain"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0 1\n1 -1\n2 0\n");
}

#[test]
fn exact_rounds_to_expand_coefficient() {
    let series = json_out(&qsign(&["expand", "--delta", "1", "--order", "100"]));
    let out = qsign(&["exact", "--delta", "1", "--n", "100"]);
    let v = json_out(&out);
    assert_valid("exact_eval", &v);
    assert_eq!(v["rounded"].to_string(), coeff(&series, 100));
    // The tail bound is too coarse to certify the rounding at this n.
    assert_eq!(v["definitive"], false);
    assert_eq!(code(&out), 2);
}

#[test]
fn exact_listed_zero_and_range() {
    let v = json_out(&qsign(&["exact", "--delta", "1", "--n", "47"]));
    assert_eq!(v["rounded"], 0);
    let v = json_out(&qsign(&["exact", "--delta", "-1", "--n", "12", "--to", "14"]));
    assert_valid("exact_eval", &v);
    let series = json_out(&qsign(&["expand", "--delta", "-1", "--order", "14"]));
    for e in v.as_array().unwrap() {
        let n = e["n"].as_u64().unwrap() as usize;
        assert_eq!(e["rounded"].to_string(), coeff(&series, n));
    }
}

#[test]
fn exact_domain_errors() {
    let out = qsign(&["exact", "--delta", "-1", "--n", "0"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("domain error"));
    assert!(out.stdout.is_empty());
    assert_eq!(code(&qsign(&["exact", "--delta", "1", "--n", "5", "--to", "4"])), 1);
    assert_eq!(code(&qsign(&["exact", "--delta", "1", "--n", "20", "--k-max", "5"])), 1);
}

#[test]
fn threshold_examples() {
    for (d, n) in [("1", "2929"), ("-1", "2234")] {
        let out = qsign(&["threshold", "--delta", d, "--n", n]);
        assert_eq!(code(&out), 0);
        let v = json_out(&out);
        assert_valid("threshold_point", &v);
        assert_eq!(v["below_one"], true);
    }
    let out = qsign(&["threshold", "--delta", "1", "--n", "2929", "--format", "plain"]);
    assert!(String::from_utf8(out.stdout).unwrap().trim_end().ends_with("PASS"));
    let out = qsign(&["threshold", "--delta", "1", "--n", "100"]);
    assert_eq!(code(&out), 3);
    let out = qsign(&["threshold", "--delta", "1", "--n", "2929", "--form", "corrected"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn verify_reports_and_schema() {
    let out = qsign(&["verify", "--delta", "-1", "--n-max", "60"]);
    assert_eq!(code(&out), 0);
    let v = json_out(&out);
    assert_valid("sign_report", &v);
    assert_eq!(v["zero_set_found"], serde_json::json!([3, 4, 5, 6, 9, 13, 19, 23, 29, 39]));
    assert_eq!(code(&qsign(&["verify", "--delta", "1", "--n-max", "10"])), 1);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&qsign(&["verify", "--delta", "2", "--n-max", "60"])), 1);
    assert_eq!(code(&qsign(&["--precision-bits", "32", "expand", "--delta", "1", "--order", "3"])), 1);
    assert_eq!(code(&qsign(&["--threads", "0", "expand", "--delta", "1", "--order", "3"])), 1);
    assert_eq!(code(&qsign(&["--format", "xml", "expand", "--delta", "1", "--order", "3"])), 1);
    assert_eq!(code(&qsign(&["frobnicate"])), 1);
    assert_eq!(code(&qsign(&[])), 1);
    assert_eq!(code(&qsign(&["--help"])), 0);
}

#[test]
fn precision_from_environment() {
    let run = |bits: &str| {
        Command::new(env!("CARGO_BIN_EXE_qsign"))
            .args(["threshold", "--delta", "1", "--n", "3000"])
            .env("QSIGN_PRECISION_BITS", bits)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("32")), 1);
    let lo = json_out(&run("64"));
    let hi = json_out(&run("256"));
    assert!(lo["lhs_err"].as_f64().unwrap() > hi["lhs_err"].as_f64().unwrap());
}

#[test]
fn output_file_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("series.json");
    let out = qsign(&["--threads", "2", "expand", "--delta", "1", "--order", "20", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_valid("series", &v);
    assert_eq!(v, json_out(&qsign(&["expand", "--delta", "1", "--order", "20"])));
}

#[test]
fn sweeps_and_modular_schemas() {
    let out = qsign(&["sweeps", "--k-max", "30", "--n-samples", "3"]);
    assert_eq!(code(&out), 0);
    assert_valid("bound_sweeps", &json_out(&out));
    let out = qsign(&["sweeps", "--k-max", "30", "--n-samples", "3", "--format", "csv"]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("k,j,n,"));
    assert_eq!(code(&qsign(&["sweeps", "--k-max", "5"])), 1);

    let out = qsign(&["modular"]);
    assert_eq!(code(&out), 0);
    assert_valid("modular_validation", &json_out(&out));
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("timing");
            map.remove("seconds");
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

const ARTIFACTS: [(&str, &str); 7] = [
    ("sign_report_plus.json", "sign_report"),
    ("thresholds.json", "thresholds"),
    ("bound_sweeps.json", "bound_sweeps"),
    ("modular_validation.json", "modular_validation"),
    ("exact_oracle.json", "exact_oracle"),
    ("pipeline.json", "pipeline"),
    ("sign_report_minus.json", "sign_report"),
];

fn small_pipeline(dir: &Path, deltas: &[&str]) -> Output {
    let mut args = vec![
        "pipeline",
        "--output-dir",
        dir.to_str().unwrap(),
        "--n-max",
        "80",
        "--sweep-k-max",
        "20",
        "--sweep-n-samples",
        "2",
        "--oracle-from",
        "10",
        "--oracle-to",
        "14",
    ];
    args.extend(deltas.iter().flat_map(|d| ["--delta", d]));
    qsign(&args)
}

#[test]
fn pipeline_artifacts_validate_and_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let out = small_pipeline(a.path(), &[]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_valid("pipeline", &json_out(&out));
    assert_eq!(code(&small_pipeline(b.path(), &[])), 0);
    for (file, schema) in ARTIFACTS {
        let read = |d: &Path| -> Value { serde_json::from_str(&std::fs::read_to_string(d.join(file)).unwrap()).unwrap() };
        let (mut x, mut y) = (read(a.path()), read(b.path()));
        assert_valid(schema, &x);
        strip_timing(&mut x);
        strip_timing(&mut y);
        assert_eq!(x, y, "{file} differs between runs");
    }
    for csv in ["kj_bounds.csv", "exact_oracle.csv"] {
        let read = |d: &Path| std::fs::read(d.join(csv)).unwrap();
        assert_eq!(read(a.path()), read(b.path()), "{csv} differs between runs");
    }
}

#[test]
fn pipeline_single_delta_and_short_range() {
    let dir = tempfile::tempdir().unwrap();
    let out = small_pipeline(dir.path(), &["1"]);
    assert_eq!(code(&out), 0);
    let v = json_out(&out);
    assert_eq!(v["config"]["deltas"], serde_json::json!([1]));
    assert!(dir.path().join("sign_report_plus.json").exists());
    assert!(!dir.path().join("sign_report_minus.json").exists());
    assert_eq!(code(&qsign(&["pipeline", "--n-max", "10"])), 1);
}
