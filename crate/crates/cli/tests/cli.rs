use std::path::Path;
use std::process::{Command, Output};

use pmtopo_core::{exit_code, ReportRecord};

const BIN: &str = env!("CARGO_BIN_EXE_pmtopo");

const VALID: &str = r#"{"instance":{"dim":2,"family":"rational_from","modular":{"kind":"p_power","p":1.0},"declared_c":2.0,"declared_beta":1.0}}"#;
const BROKEN_SYMMETRY: &str = r#"{"instance":{"dim":2,"family":"rational_from","modular":{"kind":"p_power","p":1.0},"mutation":"break_pm3"}}"#;

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("PM_TOPOLOGY_THREADS")
        .output()
        .unwrap()
}

fn records(out: &Output) -> Vec<ReportRecord> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| ReportRecord::from_line(l).unwrap())
        .collect()
}

#[test]
fn valid_axioms_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", VALID);
    let out = run(&["check-axioms", "--config", &cfg, "--samples", "2000"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs.len(), 4);
    assert!(recs
        .iter()
        .all(|r| r.operation == "check-axioms" && r.budget.n_vectors == 2000));
}

#[test]
fn broken_symmetry_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", BROKEN_SYMMETRY);
    let out = run(&["check-axioms", "--config", &cfg, "--samples", "2000"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_hypothesis_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"instance":{"dim":1,"family":"step_from","modular":{"kind":"p_power","p":1.0}}}"#,
    );
    let out = run(&["witness-continuity", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["check-upsilon", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        r#"{"instance":{"dim":-1,"family":"rational_from","modular":{"kind":"p_power","p":1.0}}}"#,
        r#"{"instance":{"dim":0,"family":"rational_from","modular":{"kind":"p_power","p":1.0}}}"#,
        r#"{"instance":{"dim":1,"family":"rational_from","modular":{"kind":"p_power","p":0.5}}}"#,
        r#"{"instance":{"dim":1,"family":"rational_from","modular":{"kind":"p_power","p":1.0}},"colour":1}"#,
        r#"{"instance":{"dim":1,"family":"rational_from","modular":{"kind":"p_power","p":1.0}},"operation":"check-delta2"}"#,
        r#"{"instance":{"dim":1,"family":"rational_from","modular":{"kind":"p_power","p":1.0}},"budget":{"epsilon":-1}}"#,
        r#"{"instance":{"dim":1,"family":"rational_from","modular":{"kind":"p_power","p":1.0}},"params":{"x":[1.0,2.0]}}"#,
        "not json",
    ];
    for (i, text) in cases.iter().enumerate() {
        let cfg = write(dir.path(), &format!("c{i}.json"), text);
        let op = if text.contains("\"x\"") {
            "ball-identities"
        } else {
            "check-axioms"
        };
        let out = run(&[op, "--config", &cfg, "--samples", "100"]);
        assert_eq!(
            out.status.code(),
            Some(3),
            "case {i}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stderr.is_empty());
        assert!(out.stdout.is_empty());
    }
    assert_eq!(
        run(&["check-axioms", "--config", "/nonexistent.json"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(run(&["check-axioms"]).status.code(), Some(3));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(3));
    let cfg = write(dir.path(), "v.json", VALID);
    assert_eq!(
        run(&["check-axioms", "--config", &cfg, "--t-grid", "1,0.1,5"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn exit_code_is_a_function_of_the_report() {
    let dir = tempfile::tempdir().unwrap();
    for text in [VALID, BROKEN_SYMMETRY] {
        let cfg = write(dir.path(), "c.json", text);
        for op in ["check-axioms", "witness-separate", "ball-identities"] {
            let out = run(&[op, "--config", &cfg, "--samples", "1000"]);
            assert_eq!(out.status.code(), Some(exit_code(&records(&out))), "{op}");
        }
    }
}

#[test]
fn reports_round_trip_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", VALID);
    for op in [
        "check-axioms",
        "witness-refine",
        "check-convergence",
        "check-delta2",
    ] {
        let out = run(&[op, "--config", &cfg, "--samples", "500"]);
        let text = String::from_utf8(out.stdout).unwrap();
        for line in text.lines() {
            assert_eq!(ReportRecord::from_line(line).unwrap().to_line(), line);
        }
    }
    let out = run(&["falsify", "--samples", "500", "--seed", "3"]);
    for line in String::from_utf8(out.stdout).unwrap().lines() {
        assert_eq!(ReportRecord::from_line(line).unwrap().to_line(), line);
    }
}

#[test]
fn out_flag_writes_the_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", VALID);
    let path = dir.path().join("r.ndjson");
    let out = run(&[
        "check-homogeneous",
        "--config",
        &cfg,
        "--samples",
        "500",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 1);
}

#[test]
fn thread_count_does_not_change_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", VALID);
    let with = |n: &str| {
        Command::new(BIN)
            .args([
                "check-axioms",
                "--config",
                &cfg,
                "--samples",
                "3000",
                "--seed",
                "5",
            ])
            .env("PM_TOPOLOGY_THREADS", n)
            .output()
            .unwrap()
    };
    let (a, b) = (with("1"), with("3"));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(with("zero").status.code(), Some(3));
}

#[test]
fn seed_changes_the_sample() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", BROKEN_SYMMETRY);
    let a = records(&run(&[
        "check-axioms",
        "--config",
        &cfg,
        "--samples",
        "500",
        "--seed",
        "1",
    ]));
    let b = records(&run(&[
        "check-axioms",
        "--config",
        &cfg,
        "--samples",
        "500",
        "--seed",
        "2",
    ]));
    assert_eq!(a[2].check, "pm3");
    assert_ne!(
        a[2].evidence.as_ref().unwrap().violations,
        b[2].evidence.as_ref().unwrap().violations
    );
}

#[test]
fn falsify_flags_select_instances() {
    let out = run(&[
        "falsify",
        "--mutation",
        "break_pm4",
        "--family",
        "rational_from",
        "--runs",
        "2",
        "--samples",
        "2000",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let recs = records(&out);
    assert_eq!(recs.len(), 2);
    for r in &recs {
        assert_eq!(
            r.predicates.as_ref().unwrap()["pm4"].verdict,
            pmtopo_core::Verdict::Fail
        );
    }
    assert_eq!(
        run(&["falsify", "--mutation", "break_everything"])
            .status
            .code(),
        Some(3)
    );
}
