//! End-to-end tests of the binary: exit codes, strict mode, the
//! normalized-corpus round trip, and output hygiene.

use std::path::PathBuf;
use std::process::{Command, Output};

fn starter_corpus() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data/starter.json")
        .display()
        .to_string()
}

fn covol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covol"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn help_exits_zero() {
    let out = covol(&["--help"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("Usage"));
}

#[test]
fn unknown_flag_is_a_hard_error_with_usage() {
    let out = covol(&["field", "info", "--nope"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("Usage") || err.contains("unexpected"), "{err}");
}

#[test]
fn unknown_subcommand_is_a_hard_error() {
    let out = covol(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_corpus_file_is_a_hard_error() {
    let out = covol(&["corpus", "verify", "--corpus", "/nonexistent.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot read"));
}

#[test]
fn unknown_label_is_a_hard_error() {
    let out = covol(&[
        "field",
        "info",
        "--corpus",
        &starter_corpus(),
        "--label",
        "Nope",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no field labeled"));
}

#[test]
fn corpus_typo_yields_validation_exit() {
    let text = std::fs::read_to_string(starter_corpus())
        .unwrap()
        // Break the Gaussian signature.
        .replace("\"r1\": 0,\n      \"r2\": 1,\n      \"d_k\": 4", "\"r1\": 2,\n      \"r2\": 0,\n      \"d_k\": 4");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, text).unwrap();
    let out = covol(&["corpus", "verify", "--corpus", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let report = String::from_utf8_lossy(&out.stdout);
    assert!(report.contains("signature mismatch"), "{report}");
    assert!(report.contains("Qi"));
}

#[test]
fn parity_typo_names_the_algebra() {
    let text = std::fs::read_to_string(starter_corpus())
        .unwrap()
        .replace("\"ram_f\": [[2, 0], [3, 0]]", "\"ram_f\": [[2, 0]]");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("parity.json");
    std::fs::write(&path, text).unwrap();
    let out = covol(&["corpus", "verify", "--corpus", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("parity violation"));
}

#[test]
fn unknown_keys_warn_without_strict_and_reject_with() {
    let text = std::fs::read_to_string(starter_corpus())
        .unwrap()
        .replace("\"version\": \"1\",", "\"version\": \"1\", \"comment\": \"x\",");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("extra.json");
    std::fs::write(&path, text).unwrap();

    let out = covol(&["corpus", "verify", "--corpus", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown key"));

    let out = covol(&[
        "corpus",
        "verify",
        "--corpus",
        path.to_str().unwrap(),
        "--strict",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn strict_flags_chain_link_failures() {
    // The totally definite algebra over Q(sqrt 5) has a failing (flagged)
    // discriminant-premise link; strict turns that into exit 3.
    let args = [
        "bounds",
        "vigneras",
        "--corpus",
        &starter_corpus(),
        "--algebra",
        "Qr5-D",
    ];
    let out = covol(&args);
    assert_eq!(out.status.code(), Some(0));
    let strict_args: Vec<&str> = args.iter().copied().chain(["--strict"]).collect();
    let out = covol(&strict_args);
    assert_eq!(out.status.code(), Some(3));
    let report: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("json report");
    assert_eq!(report["status"], 3);
}

#[test]
fn chains_report_clean_runs_as_zero_even_with_strict() {
    let out = covol(&[
        "bounds",
        "minimal",
        "--corpus",
        &starter_corpus(),
        "--algebra",
        "Qi-B23",
        "--strict",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn normalized_corpus_round_trips() {
    let out = covol(&["corpus", "verify", "--corpus", &starter_corpus()]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let normalized = &report["details"]["normalized"];
    assert!(normalized.is_object());

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("normalized.json");
    std::fs::write(&path, serde_json::to_string_pretty(normalized).unwrap()).unwrap();
    let again = covol(&["corpus", "verify", "--corpus", path.to_str().unwrap()]);
    assert!(again.status.success());
    let report2: serde_json::Value = serde_json::from_slice(&again.stdout).unwrap();
    // Same validated entries, same normalized corpus.
    assert_eq!(report["items"], report2["items"]);
    assert_eq!(report["details"]["normalized"], report2["details"]["normalized"]);
    assert_eq!(report["summary"], report2["summary"]);
}

#[test]
fn csv_and_text_formats_render() {
    for format in ["csv", "text"] {
        let out = covol(&[
            "field",
            "zeta",
            "--corpus",
            &starter_corpus(),
            "--label",
            "Q",
            "--format",
            format,
        ]);
        assert!(out.status.success(), "{format}");
        assert!(!out.stdout.is_empty());
    }
}

#[test]
fn field_info_invariant_table_all_pass() {
    let out = covol(&[
        "field",
        "info",
        "--corpus",
        &starter_corpus(),
        "--label",
        "Qi",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let item = &report["items"][0];
    assert_eq!(item["class_number_oracle"], 1);
    assert_eq!(item["poly_discriminant"], "-4");
    assert_eq!(item["index"], "1");
    let checks = item["checks"].as_array().unwrap();
    assert!(checks.len() >= 5);
    assert!(checks.iter().all(|c| c["pass"] == true));
    assert_eq!(report["summary"]["fails"], 0);
}

#[test]
fn zeta_command_matches_example() {
    let out = covol(&[
        "field",
        "zeta",
        "--corpus",
        &starter_corpus(),
        "--label",
        "Qi",
        "--prime-bound",
        "10000",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let lo = report["items"][0]["zeta"][0].as_f64().unwrap();
    let hi = report["items"][0]["zeta"][1].as_f64().unwrap();
    assert!(lo <= 1.506703009922985 && 1.506703009922985 <= hi);
}

#[test]
fn index_divisor_prime_error_propagates() {
    // A field presented non-monogenically, with no certified override:
    // zeta must refuse rather than guess.
    let corpus = r#"{
        "version": "1",
        "fields": [
            {"label": "Qm3alt", "poly": [3, 0, 1], "r1": 0, "r2": 1,
             "d_k": 3, "h_k": 1, "reg_k": 1.0, "omega_k": 6}
        ],
        "algebras": []
    }"#;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nonmonogenic.json");
    std::fs::write(&path, corpus).unwrap();
    let out = covol(&[
        "field",
        "zeta",
        "--corpus",
        path.to_str().unwrap(),
        "--label",
        "Qm3alt",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("index-divisor prime"));

    // With the certified override (2 is inert), the same query succeeds.
    let fixed = corpus.replace(
        "\"omega_k\": 6}",
        "\"omega_k\": 6, \"bad_prime_splittings\": {\"2\": [[1, 2]]}}",
    );
    std::fs::write(&path, fixed).unwrap();
    let out = covol(&[
        "field",
        "zeta",
        "--corpus",
        path.to_str().unwrap(),
        "--label",
        "Qm3alt",
    ]);
    assert_eq!(out.status.code(), Some(0));
}
