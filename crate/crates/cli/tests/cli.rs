use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name).to_str().unwrap().to_string()
}

fn rauzy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rauzy")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn protocol_reports_a_period_for_fibonacci() {
    let out = rauzy(&["protocol", "--source", &corpus("fib.morph"), "--k0", "2", "--steps", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "rauzy.protocol/1");
    assert_eq!(v["steps"].as_array().unwrap().len(), 40);
    assert_eq!(v["period"]["period"], 1);
    assert_eq!(v["period"]["preperiod"], 0);
}

#[test]
fn analyze_finds_period_two() {
    let out = rauzy(&["analyze", "--source", &corpus("periodic_ab.src")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["periodicity"]["verdict"], "periodic");
    assert_eq!(v["periodicity"]["preperiod"], 0);
    assert_eq!(v["periodicity"]["period"], 2);
}

#[test]
fn scheme_bumps_to_the_clean_order() {
    let out = rauzy(&["scheme", "--source", &corpus("fib.morph"), "--k0", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["requested_k"], 1);
    assert_eq!(v["k"], 2);
    assert_eq!(v["scheme"]["vertices"].as_array().unwrap().len(), 2);
    assert_eq!(v["scheme"]["edges"].as_array().unwrap().len(), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("using order 2"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        vec!["protocol", "--source", "builtin:thue-morse", "--steps", "20"],
        vec!["analyze", "--source", "builtin:tribonacci", "--horizon", "30"],
        vec!["graph", "--source", "builtin:fibonacci", "--k0", "4", "--format", "dot"],
        vec!["verify", "--format", "json", "--seed", "7", "--steps", "3"],
    ] {
        let a = rauzy(&args);
        let b = rauzy(&args);
        assert!(!a.stdout.is_empty(), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.status.code(), b.status.code());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn word_prints_a_prefix() {
    let out = rauzy(&["word", "--source", "builtin:fibonacci", "--horizon", "13"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "abaababaabaab\n");
    let out = rauzy(&["word", "--source", &corpus("thue_morse.morph"), "--horizon", "8", "--format", "json"]);
    assert_eq!(json(&out)["word"], "abbabaab");
}

#[test]
fn undecided_runs_exit_with_two() {
    let out = rauzy(&["protocol", "--source", "builtin:sturmian-thue-morse", "--steps", "6"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["period"].is_null());
    let out = rauzy(&["scheme", "--source", "builtin:ab-b"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.src");
    std::fs::write(&bad, "kind = sturmian\ndigits = 1, x\n").unwrap();
    let out = rauzy(&["word", "--source", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let out = rauzy(&["word", "--source", "builtin:fibonacci", "--format", "dot"]);
    assert_eq!(out.status.code(), Some(1));
    let out = rauzy(&["word", "--source", "builtin:nothing"]);
    assert_eq!(out.status.code(), Some(1));
    let out = rauzy(&["scheme", "--source", "builtin:fibonacci", "--bound-paths", "0"]);
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn out_and_dump_dot_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("p.csv");
    let dots = dir.path().join("dots");
    let out = rauzy(&[
        "protocol",
        "--source",
        "builtin:fibonacci",
        "--steps",
        "5",
        "--format",
        "csv",
        "--out",
        out_path.to_str().unwrap(),
        "--dump-dot",
        dots.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let csv = std::fs::read_to_string(&out_path).unwrap();
    assert!(csv.starts_with("step,support_edge,scale"));
    assert_eq!(csv.lines().count(), 6);
    let n = std::fs::read_dir(&dots).unwrap().count();
    assert_eq!(n, 6);
    let first = std::fs::read_to_string(dots.join("step_000.dot")).unwrap();
    assert!(first.starts_with("digraph"));
}

#[test]
fn verify_passes_on_the_corpus() {
    let out = rauzy(&["verify", "--steps", "4"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}
