//! End-to-end tests of the `frm` binary: file formats, subcommands, and
//! the exit-code contract (0 pass, 1 counterexample/invalid, 2 usage).

use std::path::Path;
use std::process::{Command, Output};

fn frm(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frm"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

/// The Sierpiński biframe as a JSON document.
fn sierpinski_json() -> &'static str {
    r#"{
      "kind": "biframe",
      "plus": {"kind":"frame","n":3,"leq":[[1,1,1],[0,1,1],[0,0,1]]},
      "minus": {"kind":"frame","n":2,"leq":[[1,1],[0,1]]},
      "main": {"kind":"frame","n":3,"leq":[[1,1,1],[0,1,1],[0,0,1]]},
      "embed_plus": [0,1,2],
      "embed_minus": [0,2]
    }"#
}

#[test]
fn check_accepts_valid_documents() {
    let dir = tempfile::tempdir().unwrap();
    let frame = write(
        dir.path(),
        "c3.json",
        r#"{"kind":"frame","n":3,"leq":[[1,1,1],[0,1,1],[0,0,1]]}"#,
    );
    let out = frm(&["check", "--input", &frame], dir.path());
    assert!(out.status.success(), "{out:?}");
    assert!(String::from_utf8_lossy(&out.stdout).contains("valid frame with 3 elements"));

    let bf = write(dir.path(), "bs.json", sierpinski_json());
    let out = frm(&["check", "--input", &bf], dir.path());
    assert!(out.status.success());

    let cong = write(
        dir.path(),
        "cong.json",
        r#"{"kind":"congruence","frame":"c3.json","classes":[[0,1],[2]]}"#,
    );
    let out = frm(&["check", "--input", &cong], dir.path());
    assert!(out.status.success(), "{out:?}");

    let bispace = write(
        dir.path(),
        "x.json",
        r#"{"kind":"bispace","points":2,"opens_plus":[0,2,3],"opens_minus":[0,3]}"#,
    );
    let out = frm(&["check", "--input", &bispace], dir.path());
    assert!(out.status.success());
}

#[test]
fn check_rejects_invalid_documents_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    // Non-transitive order.
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"kind":"frame","n":3,"leq":[[1,1,0],[0,1,1],[0,0,1]]}"#,
    );
    let out = frm(&["check", "--input", &bad], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("not transitive"));

    // Incompatible partition.
    let frame = write(
        dir.path(),
        "c3.json",
        r#"{"kind":"frame","n":3,"leq":[[1,1,1],[0,1,1],[0,0,1]]}"#,
    );
    let _ = frame;
    let bad_cong = write(
        dir.path(),
        "badcong.json",
        r#"{"kind":"congruence","frame":"c3.json","classes":[[0,2],[1]]}"#,
    );
    let out = frm(&["check", "--input", &bad_cong], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn assembly_emits_labeled_congruence_classes() {
    let dir = tempfile::tempdir().unwrap();
    let bf = write(dir.path(), "bs.json", sierpinski_json());
    let out_path = dir.path().join("asm.json");
    let out = frm(
        &[
            "assembly",
            "--variant",
            "cf",
            "--input",
            &bf,
            "--output",
            out_path.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{out:?}");
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(doc["kind"], "biframe");
    assert_eq!(doc["main"]["n"], 4);
    // Main elements are labeled by their congruence classes.
    let labels = doc["main"]["labels"].as_array().unwrap();
    assert_eq!(labels.len(), 4);
    assert!(labels.iter().any(|l| l.as_str().unwrap().contains('|')));
    // The emitted document round-trips through check.
    let out = frm(&["check", "--input", out_path.to_str().unwrap()], dir.path());
    assert!(out.status.success());
}

#[test]
fn bpt_and_skula_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let bf = write(dir.path(), "bs.json", sierpinski_json());
    let spec_path = dir.path().join("bpt.json");
    let out = frm(
        &["bpt", "--input", &bf, "--output", spec_path.to_str().unwrap()],
        dir.path(),
    );
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&spec_path).unwrap()).unwrap();
    assert_eq!(doc["points"], 2);
    assert_eq!(doc["opens_plus"], serde_json::json!([0, 2, 3]));
    assert_eq!(doc["opens_minus"], serde_json::json!([0, 3]));

    let sk_path = dir.path().join("sk.json");
    let out = frm(
        &[
            "skula",
            "--variant",
            "sk",
            "--input",
            spec_path.to_str().unwrap(),
            "--output",
            sk_path.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&sk_path).unwrap()).unwrap();
    assert_eq!(doc["opens_plus"], serde_json::json!([0, 2, 3]));
    assert_eq!(doc["opens_minus"], serde_json::json!([0, 1, 3]));
}

#[test]
fn axioms_reports_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let bf = write(dir.path(), "bs.json", sierpinski_json());
    let out = frm(&["axioms", "--input", &bf, "--json"], dir.path());
    assert!(out.status.success(), "{out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 3);
    for line in lines {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["consistent"], true);
        assert!(v["condition_results"]
            .as_array()
            .unwrap()
            .iter()
            .all(|b| b == false));
    }

    let out = frm(&["axioms", "--input", &bf, "--axiom", "subfit"], dir.path());
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("subfit: fails"));
}

#[test]
fn verify_suite_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = frm(
        &[
            "verify",
            "--suite",
            "bisober",
            "--max-biframes",
            "6",
            "--json",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    let report: serde_json::Value = serde_json::from_str(stdout.lines().next().unwrap()).unwrap();
    assert_eq!(report["suite"], "bisober");
    assert_eq!(report["failures"].as_array().unwrap().len(), 0);

    // Unknown suites are usage errors.
    let out = frm(&["verify", "--suite", "nonsense"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown suite"));
}

#[test]
fn verify_reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        let out = frm(
            &[
                "verify",
                "--suite",
                "skula_patch",
                "--max-biframes",
                "6",
                "--seed",
                "7",
                "--json",
            ],
            dir.path(),
        );
        assert!(out.status.success());
        String::from_utf8(out.stdout).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn enumerate_frames_and_biframes() {
    let dir = tempfile::tempdir().unwrap();
    let out = frm(&["enumerate", "--kind", "frames", "--max-frame", "4"], dir.path());
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    // 1, 2, C3, C4, D4.
    assert_eq!(stdout.lines().count(), 5);
    for line in stdout.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["kind"], "frame");
    }

    let out = frm(
        &["enumerate", "--kind", "biframes", "--max-frame", "3"],
        dir.path(),
    );
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.lines().count() >= 3);

    let out = frm(&["enumerate", "--kind", "nonsense"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn size_cap_environment_override() {
    let dir = tempfile::tempdir().unwrap();
    let bf = write(dir.path(), "bs.json", sierpinski_json());
    let out = Command::new(env!("CARGO_BIN_EXE_frm"))
        .args(["assembly", "--input", &bf])
        .env("FRM_SIZE_CAP", "2")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("size limit exceeded"));
}
