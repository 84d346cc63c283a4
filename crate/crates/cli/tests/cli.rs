use std::io::Write;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_realhodge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn file(value: &Value) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "{value}").unwrap();
    f
}

fn path(f: &tempfile::NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

#[test]
fn cohomology_of_connected_threefold() {
    let out = run(&["cohomology", "--factors", "connected,connected,connected", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["profile"]["ranks"], json!({"1": "0", "2": "0", "3": "0", "4": "1"}));
    assert_eq!(v["budget"], "0");
    assert_eq!(v["pi0"], "1");
}

#[test]
fn cohomology_of_split_curve() {
    let torus = file(&json!({"h1": {"rank": "2", "sigma": [["1", "0"], ["0", "-1"]], "twist": "0"}}));
    let out = run(&["cohomology", "--input", path(&torus), "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["profile"]["free_rank"], "1");
    assert_eq!(v["budget"], Value::Null);
}

#[test]
fn malformed_sigma_is_an_input_error() {
    let torus = file(&json!({"h1": {"sigma": [[2, 0], [0, -1]], "twist": 0}}));
    let out = run(&["cohomology", "--input", path(&torus)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
    let garbage = tempfile::NamedTempFile::new().unwrap();
    assert_eq!(run(&["pi0", "--input", path(&garbage)]).status.code(), Some(2));
}

fn polarized(sigma: Value, form: Value) -> tempfile::NamedTempFile {
    file(&json!({"lattice": {"sigma": sigma, "twist": 0}, "form": form}))
}

#[test]
fn principalize_transcripts() {
    let unit = polarized(json!([[1, 0], [0, -1]]), json!([[0, 1], [-1, 0]]));
    let out = run(&["principalize", "--input", path(&unit)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["steps"], json!([]));

    let nine = polarized(json!([[1, 0], [0, -1]]), json!([[0, 9], [-9, 0]]));
    let v = stdout_json(&run(&["principalize", "--input", path(&nine)]));
    let primes: Vec<&str> = v["steps"].as_array().unwrap().iter().map(|s| s["prime"].as_str().unwrap()).collect();
    assert_eq!(primes, ["3", "3"]);

    // σᵗEσ = E instead of -E.
    let bad = polarized(json!([[1, 0], [0, 1]]), json!([[0, 1], [-1, 0]]));
    assert_eq!(run(&["principalize", "--input", path(&bad)]).status.code(), Some(2));
}

#[test]
fn minimal_class_and_fourier() {
    let g2 = polarized(
        json!([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]]),
        json!([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]]),
    );
    let v = stdout_json(&run(&["minimal-class", "--input", path(&g2)]));
    assert_eq!(v["class"], json!({"0,2": "1", "1,3": "1"}));

    let out = run(&["fourier", "--input", path(&g2)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["identity_holds"], true);
    let out = run(&["fourier", "--input", path(&g2), "--flip-orientation"]);
    assert_eq!(out.status.code(), Some(1));

    // The unit goes to the top class and back.
    let one = file(&json!({"g": 1, "class": {"": "1"}}));
    let top = stdout_json(&run(&["fourier", "--input", path(&one)]));
    let top_file = file(&json!({"g": 1, "class": top["image"]}));
    let back = stdout_json(&run(&["fourier", "--input", path(&top_file), "--dual"]));
    assert_eq!(back["image"].as_object().unwrap().len(), 1);
    assert!(back["image"][""] == "1" || back["image"][""] == "-1");
}

#[test]
fn classify_and_pi0_tables() {
    let period = file(&json!({"g": 3, "M": [[1, 0, 0], [0, 1, 0], [0, 0, 1]], "N": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]}));
    let v = stdout_json(&run(&["classify", "--input", path(&period)]));
    assert_eq!(v["type"], "(3,1)");
    let t = stdout_json(&run(&["pi0", "--types", "3"]));
    assert_eq!(t["types"].as_array().unwrap().len(), 5);
    let v = stdout_json(&run(&["pi0", "--factors", "split,split,connected"]));
    assert_eq!(v["pi0"], "4");
    assert_eq!(run(&["budget", "--factors", "split,split"]).status.code(), Some(2));
    assert_eq!(stdout_json(&run(&["budget", "--factors", "split,split,split"]))["budget"], "12");
}

#[test]
fn kunneth_summand() {
    let out = run(&["kunneth", "--a", "split,split", "--b", "connected", "--n", "3", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let h21 = v["summands"].as_array().unwrap().iter().find(|s| s["i"] == "2").unwrap();
    assert_eq!(h21["dimension"], "0");
    assert_eq!(v["total"], v["direct"]);
}

#[test]
fn hecke_commands_are_deterministic() {
    let v = stdout_json(&run(&["hecke", "sunit", "--p", "3", "--q", "5", "--bound", "30", "--target", "2"]));
    assert_eq!((v["n"].as_str(), v["m"].as_str()), (Some("27"), Some("-18")));
    assert_eq!(v["within_tolerance"], true);

    let target = file(&json!({"start": [["1", "0"], ["0", "1"]], "target": [["9", "0"], ["0", "1"]]}));
    let args = [
        "hecke", "approach", "--g", "2", "--type", "0", "--p", "3", "--q", "5", "--target", path(&target),
        "--budget", "20000", "--seed", "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert_eq!(v["best"]["distance"], "0");
    assert_eq!(v["best"]["image"], json!([["9", "0"], ["0", "1"]]));
    assert_eq!(run(&["hecke", "sunit", "--p", "3", "--q", "3", "--target", "2"]).status.code(), Some(2));
}

#[test]
fn paper_check_passes_and_validates() {
    let out = run(&["paper-check"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    let schema = stdout_json(&run(&["paper-check", "--schema"]));
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    assert!(validator.is_valid(&report));
    assert_eq!(report["summary"]["failed"], "0");
    // Byte-identical rerun.
    assert_eq!(run(&["paper-check"]).stdout, out.stdout);
}

#[test]
fn corrupted_sign_fails_beauville() {
    let out = run(&["paper-check", "--corrupt-sign"]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    let failed: Vec<&str> = report["claims"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|id| id.starts_with("beauville-")));
    let schema = stdout_json(&run(&["paper-check", "--schema"]));
    assert!(jsonschema::validator_for(&schema).unwrap().is_valid(&report));
}

#[test]
fn schema_rejects_bad_provenance() {
    let schema = stdout_json(&run(&["paper-check", "--schema"]));
    let validator = jsonschema::validator_for(&schema).unwrap();
    let bad = json!({
        "claims": [{"id": "x", "statement": "s", "computed": "1", "expected": "1", "provenance": "guess", "pass": true}],
        "reports": {},
        "summary": {"total": "1", "passed": "1", "failed": "0"}
    });
    assert!(!validator.is_valid(&bad));
}
