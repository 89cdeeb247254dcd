use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use monounion::fixtures::{get_fixture, FIXTURE_NAMES};
use monounion_cli::commands::{cmd_certify, cmd_growth, RunConfig};
use monounion_cli::format::parse_spec;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_monounion"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.json"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn text(b: &[u8]) -> String {
    String::from_utf8_lossy(b).into_owned()
}

const SLOW_RETURN: &str = r#"{"format": 1, "generators": ["a", "b", "c"], "products": [
  {"left": "a", "right": "b", "result_gen": "a", "result_exp": 2},
  {"left": "a", "right": "c", "result_gen": "a", "result_exp": 2},
  {"left": "b", "right": "a", "result_gen": "b", "result_exp": 2},
  {"left": "b", "right": "c", "result_gen": "a", "result_exp": 2},
  {"left": "c", "right": "a", "result_gen": "c", "result_exp": 2},
  {"left": "c", "right": "b", "result_gen": "c", "result_exp": 2}]}"#;

#[test]
fn checked_in_fixtures_match_the_library() {
    for name in FIXTURE_NAMES {
        let parsed = parse_spec(&fs::read_to_string(fixture(name)).unwrap()).unwrap();
        assert_eq!(parsed, get_fixture(name).unwrap().spec, "{name}");
        let out = run(&["fixture", name]);
        assert!(out.status.success());
        assert_eq!(text(&out.stdout), fs::read_to_string(fixture(name)).unwrap(), "{name}");
    }
}

#[test]
fn certify_writes_certificate_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let csv = dir.path().join("balls.csv");
    let out = run(&[
        "certify",
        fixture("shift2").to_str().unwrap(),
        "-o",
        cert.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(doc["format"], 1);
    assert_eq!(doc["K"], 2);
    assert_eq!((doc["L_num"].as_i64(), doc["L_den"].as_i64()), (Some(3), Some(2)));
    assert_eq!(doc["weights"]["a"], 1);
    assert_eq!(doc["weights"]["b"], 2);
    assert_eq!(doc["verdict"], "linear-growth-certified");
    assert!(doc["spec_digest"].as_str().unwrap().starts_with("sha256:"));
    let table = fs::read_to_string(&csv).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("m,count,bound"));
    for (m, line) in (1..=12u64).zip(lines) {
        assert_eq!(line, format!("{m},{},{}", 3 * m - 1, 3 * m));
    }
}

#[test]
fn nonassoc_exits_2_with_witness() {
    for cmd in ["validate", "certify", "analyze"] {
        let out = run(&[cmd, fixture("nonassoc").to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{cmd}");
        assert!(text(&out.stdout).contains("first witness (a^1, b^1, a^1): left a^5 vs right a^4"));
    }
}

#[test]
fn parse_failures_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let full = fs::read_to_string(fixture("fold")).unwrap();
    let cases = [
        ("truncated", full[..full.len() / 2].to_string()),
        ("version", full.replace("\"format\": 1", "\"format\": 2")),
        ("unknown_field", full.replacen('{', "{\"extra\": true,", 1)),
        (
            "unknown_gen",
            full.replace("\"result_gen\": \"a\"", "\"result_gen\": \"q\""),
        ),
        ("zero_exp", full.replace("\"result_exp\": 2", "\"result_exp\": 0")),
        (
            "missing",
            r#"{"format": 1, "generators": ["a", "b"], "products": []}"#.to_string(),
        ),
    ];
    for (name, body) in cases {
        let p = dir.path().join(format!("{name}.json"));
        fs::write(&p, body).unwrap();
        let out = run(&["certify", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(1), "{name}: {}", text(&out.stderr));
    }
    assert_eq!(run(&["validate", "/nonexistent/spec.json"]).status.code(), Some(1));
    assert_eq!(run(&["fixture", "nope"]).status.code(), Some(1));
}

#[test]
fn tight_return_bounds_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("slow.json");
    fs::write(&p, SLOW_RETURN).unwrap();
    let p = p.to_str().unwrap();
    assert_eq!(run(&["certify", p]).status.code(), Some(0));
    let out = run(&["certify", p, "--t-max", "1", "--q-max", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(text(&out.stderr).contains("no return was found"));
}

#[test]
fn unwritable_output_exits_5() {
    let out = run(&[
        "certify",
        fixture("fold").to_str().unwrap(),
        "-o",
        "/nonexistent/dir/cert.json",
    ]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn frontier_cap_exits_5() {
    let mut cfg = RunConfig::new();
    cfg.core.frontier_cap = 2;
    assert_eq!(cmd_growth(&fixture("cascade3"), 5, &cfg).code, 5);
    assert_eq!(cmd_certify(&fixture("cascade3"), &cfg).code, 5);
}

#[test]
fn growth_prints_counts() {
    let out = run(&["growth", fixture("fold").to_str().unwrap(), "--max-len", "5"]);
    assert_eq!(text(&out.stdout), "2,4,6,8,10\n");
    let out = run(&[
        "growth",
        fixture("shift2").to_str().unwrap(),
        "--max-len",
        "4",
        "--threads",
        "4",
    ]);
    assert_eq!(text(&out.stdout), "2,5,8,11\n");
}

#[test]
fn analyze_reports_edges_and_weights() {
    let out = run(&["analyze", fixture("shift2").to_str().unwrap()]);
    let s = text(&out.stdout);
    assert!(s.contains("edge b -> a: M = 2/1"), "{s}");
    assert!(s.contains("weights: a=1 b=2"), "{s}");
}

#[test]
fn search_lists_survivors() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("survivors.json");
    let out = run(&["search", "-o", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(text(&out.stdout).starts_with("3 survivors"));
    let docs: Vec<serde_json::Value> = serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap();
    assert_eq!(docs.len(), 3);
    assert_eq!(run(&["search", "--max-exp", "10"]).status.code(), Some(1));
}
