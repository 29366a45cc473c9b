//! End-to-end tests against the built binary: formats, exit codes and
//! determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_couplekit"))
}

fn write_doc(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn l1linf_doc(dir: &Path) -> String {
    write_doc(
        dir,
        "l1linf.json",
        r#"{ "n": 3, "w0": [1,1,1], "w1": [1,1,1], "p0": 1, "p1": "inf",
             "elements": { "a": [3,1,2], "b": [2,2,0], "atom": [1,0,0] } }"#,
    )
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn exact_curve_emits_breakpoints() {
    let dir = tempfile::tempdir().unwrap();
    let doc = l1linf_doc(dir.path());
    let out = bin()
        .args(["k-curve", &doc, "--element", "a", "--exact"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("# exact: true"));
    assert!(text.contains("# terminal-slope: 0"));
    assert!(text.contains("t,value"));
    assert!(text.contains("1,3"));
    assert!(text.contains("2,5"));
    assert!(text.contains("3,6"));
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let doc = l1linf_doc(dir.path());
    // Missing element.
    let out = bin()
        .args(["k-curve", &doc, "--element", "nope"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // Nonpositive t.
    let out = bin()
        .args(["k-curve", &doc, "--element", "a", "--t-min", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // Corrupted document.
    let bad = write_doc(dir.path(), "bad.json", "{ not json");
    let out = bin()
        .args(["report", &bad, "--suite", "norms"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // Unknown suite is a usage error.
    let out = bin()
        .args(["report", &doc, "--suite", "frobnicate"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unsupported_operations_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let two_two = write_doc(
        dir.path(),
        "l2l2.json",
        r#"{ "n": 2, "w0": [1,1], "w1": [1,1], "p0": 2, "p1": 2,
             "elements": { "a": [1,2], "b": [1,1] } }"#,
    );
    let out = bin()
        .args(["k-curve", &two_two, "--element", "a", "--exact"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    // The rearrangement backend rejects weighted couples.
    let out = bin()
        .args(["k-curve", &two_two, "--element", "a", "--solver", "l1-linf"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    // Construction outside the unweighted couple.
    let out = bin()
        .args([
            "orbit",
            &two_two,
            "--element-a",
            "a",
            &two_two,
            "--element-b",
            "b",
            "--construct",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn orbit_reports_and_constructs() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write_doc(
        dir.path(),
        "pair.json",
        r#"{ "n": 2, "w0": [1,1], "w1": [1,1], "p0": 1, "p1": "inf",
             "elements": { "a": [3,1], "b": [2,2], "flat": [1,1], "spiky": [3,0] } }"#,
    );
    let matrix = dir.path().join("t.txt");
    let out = bin()
        .args([
            "orbit",
            &doc,
            "--element-a",
            "a",
            &doc,
            "--element-b",
            "b",
            "--construct",
            "--output",
            matrix.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("DOMINATES"));
    let exported = fs::read_to_string(&matrix).unwrap();
    assert!(exported.contains("0.5 0.5"));

    // Reflexive pair has margin zero.
    let out = bin()
        .args(["orbit", &doc, "--element-a", "a", &doc, "--element-b", "a"])
        .output()
        .unwrap();
    assert!(stdout(&out).contains("margin=0"));

    // A violated pair reports the witness; with --construct it exits 1.
    let out = bin()
        .args([
            "orbit",
            &doc,
            "--element-a",
            "flat",
            &doc,
            "--element-b",
            "spiky",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("VIOLATED witness t="));
    let out = bin()
        .args([
            "orbit",
            &doc,
            "--element-a",
            "flat",
            &doc,
            "--element-b",
            "spiky",
            "--construct",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn solver_backends_agree_on_sampled_curves() {
    let dir = tempfile::tempdir().unwrap();
    let doc = l1linf_doc(dir.path());
    let run = |solver: &str| -> Vec<(f64, f64)> {
        let out = bin()
            .args([
                "k-curve",
                &doc,
                "--element",
                "a",
                "--solver",
                solver,
                "--points",
                "9",
            ])
            .output()
            .unwrap();
        assert!(out.status.success(), "{solver}");
        stdout(&out)
            .lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with('t'))
            .map(|l| {
                let mut parts = l.split(',');
                (
                    parts.next().unwrap().parse().unwrap(),
                    parts.next().unwrap().parse().unwrap(),
                )
            })
            .collect()
    };
    let general = run("general");
    let closed = run("l1-linf");
    assert_eq!(general.len(), closed.len());
    for ((t1, v1), (t2, v2)) in general.iter().zip(&closed) {
        assert_eq!(t1, t2);
        assert!((v1 - v2).abs() <= 1e-8 * v1.abs().max(1.0));
    }
}

#[test]
fn all_report_suites_pass_and_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let doc = l1linf_doc(dir.path());
    for suite in [
        "norms",
        "duality",
        "subcouple",
        "fundamental-lemma",
        "interp",
    ] {
        let once = bin()
            .args(["report", &doc, "--suite", suite, "--seed", "11"])
            .output()
            .unwrap();
        assert!(once.status.success(), "suite {suite}: {}", stdout(&once));
        assert!(stdout(&once).ends_with("ALL PASS\n"));
        let again = bin()
            .args(["report", &doc, "--suite", suite, "--seed", "11"])
            .env("COUPLEKIT_THREADS", "1")
            .output()
            .unwrap();
        assert_eq!(
            stdout(&once),
            stdout(&again),
            "suite {suite} must be seed-deterministic"
        );
    }
}

#[test]
fn thread_cap_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let doc = l1linf_doc(dir.path());
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let out = bin()
            .args(["k-curve", &doc, "--element", "b", "--points", "17"])
            .env("COUPLEKIT_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
        outputs.push(stdout(&out));
    }
    assert_eq!(outputs[0], outputs[1]);
}
