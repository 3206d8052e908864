use std::path::Path;
use std::process::{Command, Output};

use gbseed_core::arith::build_window;
use gbseed_core::arith::cache::{encode_window, write_window};

fn gbseed(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gbseed"));
    cmd.args(args).env_remove("GBSEED_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("GBSEED_CACHE_DIR", dir);
    }
    cmd.output().unwrap()
}

fn stderr_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stderr).expect("stderr holds one JSON document")
}

#[test]
fn invalid_digit_is_a_precondition_failure() {
    let out = gbseed(&["scan", "--x", "1000", "--h", "100", "--digit", "1"], None);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_json(&out);
    assert!(err["error"]["message"].as_str().unwrap().contains("forbidden digit must be ≥ 2"));
    assert_eq!(err["exit_code"], 1);
}

#[test]
fn usage_errors_exit_with_one() {
    let out = gbseed(&["nonsense"], None);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"]["kind"], "usage");
    assert_eq!(gbseed(&["--help"], None).status.code(), Some(0));
}

#[test]
fn resource_caps_exit_with_two() {
    let out = gbseed(&["discrepancy", "--x", "1000", "--qmax", "100000"], None);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["kind"], "resource");
}

#[test]
fn scan_smoke_writes_schema() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = gbseed(
        &[
            "scan", "--x", "1000000", "--h", "10000", "--base", "10", "--digit", "7", "--epsilon", "0.3", "--out",
            path.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(doc["schema"], "scan-v1");
    assert_eq!(doc["tool"], "gbseed");
    assert_eq!(doc["config"]["x"], 1_000_000);
    assert!(doc["params"].is_object() && doc["summary"].is_object());
    assert_eq!(doc["records"].as_array().unwrap().len(), 3645);
}

#[test]
fn reports_are_deterministic() {
    let args = ["scan", "--x", "100000", "--h", "2000", "--seed", "42", "--format", "csv"];
    let a = gbseed(&args, None);
    let b = gbseed(&args, None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let header = String::from_utf8_lossy(&a.stdout).lines().next().unwrap().to_string();
    assert!(header.starts_with("two_n,"), "{header}");
}

#[test]
fn csv_headers() {
    let cases: [(&[&str], &str); 5] = [
        (&["discrepancy", "--x", "10000", "--qmax", "5", "--format", "csv"], "q,max_a_discrepancy"),
        (&["l1", "--x", "0", "--h", "999", "--points", "8", "--format", "csv"], "alpha,F"),
        (&["arcs", "--x", "100000", "--h", "1000", "--format", "csv"], "q,r,left,right,major_left,major_right"),
        (&["approx-check", "--x", "100000", "--h", "1000", "--r4", "3", "--format", "csv"], "m,c0,c1,c2,c3"),
        (&["sieve", "--x", "1", "--h", "10", "--format", "csv"], "n,lambda,mobius,d2,d4,is_prime"),
    ];
    for (args, header) in cases {
        let out = gbseed(args, None);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(String::from_utf8_lossy(&out.stdout).lines().next(), Some(header), "{args:?}");
    }
}

#[test]
fn verify_passes() {
    let out = gbseed(&["verify"], None);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["passed"], true);
}

#[test]
fn cache_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sieve", "--x", "5000", "--h", "300"];
    let first = gbseed(&args, Some(dir.path()));
    assert_eq!(first.status.code(), Some(0));
    let file = dir.path().join("window-5000-300.gbsv");
    let stored = std::fs::read(&file).unwrap();
    assert_eq!(stored, encode_window(&build_window(5000, 300).unwrap()));
    let second = gbseed(&args, Some(dir.path()));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn damaged_caches_are_format_errors() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("window-5000-300.gbsv");
    let w = build_window(5000, 300).unwrap();
    write_window(&w, &file).unwrap();
    let mut bytes = std::fs::read(&file).unwrap();
    bytes.truncate(bytes.len() - 3);
    std::fs::write(&file, &bytes).unwrap();
    let out = gbseed(&["sieve", "--x", "5000", "--h", "300"], Some(dir.path()));
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["kind"], "format");

    let mut bytes = encode_window(&w);
    bytes[..5].copy_from_slice(b"NOPE!");
    std::fs::write(&file, &bytes).unwrap();
    let out = gbseed(&["sieve", "--x", "5000", "--h", "300"], Some(dir.path()));
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_json(&out)["error"]["message"].as_str().unwrap().contains("magic"));
}
