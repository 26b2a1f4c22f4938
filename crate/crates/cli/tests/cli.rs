//! End-to-end tests driving the binary: subcommand round trips, pipeline
//! composition via stdin, exit codes, and byte determinism.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_denslab"))
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn write_tmp(name: &str, content: &str) -> PathBuf {
    let path = tmp(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn run_with_stdin(mut cmd: Command, input: &[u8]) -> Output {
    let mut child = cmd
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.as_mut().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

#[test]
fn analyze_symmetric_config() {
    let path = write_tmp("symmetric.json", r#"{"intervals":[["1/2","1"]]}"#);
    let out = bin().args(["analyze"]).arg(&path).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("delta_star = 1/2"), "{text}");
}

#[test]
fn analyze_json_is_byte_identical() {
    let path = write_tmp("sym2.json", r#"{"intervals":[["1/2","1"]]}"#);
    let a = bin()
        .args(["analyze", "--json"])
        .arg(&path)
        .output()
        .unwrap();
    let b = bin()
        .args(["analyze", "--json"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["delta_star"], "1/2");
    assert_eq!(report["endpoints"].as_array().unwrap().len(), 3);
}

#[test]
fn solve_cubic_values() {
    let out = bin().args(["solve-cubic", "upper"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("0.271844506346038"), "{text}");
    assert!(text.contains("residual"), "{text}");

    let lower = bin().args(["solve-cubic", "lower"]).output().unwrap();
    let text = String::from_utf8(lower.stdout).unwrap();
    assert!(text.starts_with("0.26297874"), "{text}");

    let kol = bin().args(["solve-cubic", "kolyada"]).output().unwrap();
    let text = String::from_utf8(kol.stdout).unwrap();
    assert!(text.starts_with("0.2807764"), "{text}");
}

#[test]
fn construct_pipes_into_analyze() {
    let construct = bin()
        .args(["construct", "cmsn", "--optimal", "--N", "50"])
        .output()
        .unwrap();
    assert!(construct.status.success());
    let analyze = run_with_stdin(
        {
            let mut c = bin();
            c.args(["analyze", "-", "--json"]);
            c
        },
        &construct.stdout,
    );
    assert!(analyze.status.success());
    let report: serde_json::Value = serde_json::from_slice(&analyze.stdout).unwrap();
    let ds = report["delta_star_dec"].as_f64().unwrap();
    assert!(ds > 0.2718 && ds < 0.281, "delta* {ds}");
}

#[test]
fn analyze_reads_every_construct_output() {
    // format round trip: construct's file feeds analyze without errors
    let path = tmp("comb.json");
    let out = bin()
        .args([
            "construct",
            "cmsn",
            "--m",
            "3/4",
            "--s",
            "1/2",
            "--N",
            "4",
            "--out",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let analyzed = bin().args(["analyze"]).arg(&path).output().unwrap();
    assert!(analyzed.status.success());
}

#[test]
fn construct_h_approx_levels() {
    let base = write_tmp("h_base.json", r#"{"intervals":[["1/2","1"]]}"#);
    let mut cmd = bin();
    cmd.args([
        "construct",
        "h-approx",
        "--eps",
        "1/10",
        "--depth",
        "2",
        "--base",
    ]);
    cmd.arg(&base);
    let out = cmd.output().unwrap();
    assert!(out.status.success());
    let h: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let levels = h["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 2);
    assert_eq!(
        levels[1],
        serde_json::json!([["2/5", "9/20"], ["1/2", "1"], ["21/20", "11/10"]])
    );
}

#[test]
fn inspect_comb_succeeds_and_rejects_non_counterexample() {
    let comb = bin()
        .args(["construct", "cmsn", "--optimal", "--N", "10"])
        .output()
        .unwrap();
    let path = write_tmp("comb10.json", &String::from_utf8(comb.stdout).unwrap());
    let mut cmd = bin();
    cmd.args(["inspect"]).arg(&path).args(["--delta", "0.29"]);
    let out = cmd.output().unwrap();
    assert!(out.status.success());
    let insp: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(insp["partial_reason"], serde_json::Value::Null);

    // the symmetric configuration refutes nothing at 0.3: usage error
    let sym = write_tmp("sym3.json", r#"{"intervals":[["1/2","1"]]}"#);
    let mut cmd = bin();
    cmd.args(["inspect"]).arg(&sym).args(["--delta", "0.3"]);
    let out = cmd.output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_lemma1_exit_zero() {
    let out = bin()
        .args([
            "check-lemma1",
            "--trials",
            "300",
            "--delta",
            "0.27",
            "--seed",
            "9",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("violations 0"), "{text}");
}

#[test]
fn quarter_point_output() {
    let path = write_tmp("sym4.json", r#"{"intervals":[["1/2","1"]]}"#);
    let out = bin().args(["quarter-point"]).arg(&path).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("quarter point: 0"), "{text}");
    assert!(text.contains("escape = 3/4"), "{text}");
}

#[test]
fn optimize_writes_trace_and_config() {
    let trace = tmp("trace.csv");
    let config_out = tmp("best.json");
    let mut cmd = bin();
    cmd.args([
        "optimize",
        "--intervals",
        "2",
        "--restarts",
        "2",
        "--iters",
        "40",
        "--seed",
        "5",
        "--trace",
    ]);
    cmd.arg(&trace).arg("--config-out").arg(&config_out);
    let out = cmd.output().unwrap();
    assert!(out.status.success());
    let result: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(result["exact_objective_dec"].as_f64().unwrap() >= 0.2629);
    let trace_text = std::fs::read_to_string(&trace).unwrap();
    assert!(trace_text.starts_with("iteration,best\n"));
    // the best configuration feeds back into analyze
    let analyzed = bin().args(["analyze"]).arg(&config_out).output().unwrap();
    assert!(analyzed.status.success());
}

#[test]
fn usage_errors_exit_two() {
    let out = bin().args(["analyze", "--no-such-flag"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["analyze", "/nonexistent/path.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["solve-cubic", "bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // malformed rational literal
    let sym = write_tmp("sym5.json", r#"{"intervals":[["1/2","1"]]}"#);
    let mut cmd = bin();
    cmd.args(["analyze"]).arg(&sym).args(["--delta", "x/y"]);
    assert_eq!(cmd.output().unwrap().status.code(), Some(2));
}

#[test]
fn profiles_csv_export() {
    let dir = tmp("profiles_out");
    let path = write_tmp("sym6.json", r#"{"intervals":[["1/2","1"]]}"#);
    let mut cmd = bin();
    cmd.args(["analyze"]).arg(&path).arg("--profiles").arg(&dir);
    assert!(cmd.output().unwrap().status.success());
    let csv = std::fs::read_to_string(dir.join("endpoint_002.csv")).unwrap();
    assert!(csv.starts_with("omega,density\n"));
    assert!(csv.contains("1,1/4"), "{csv}");
}
