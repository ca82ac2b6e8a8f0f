//! End-to-end tests of the binary: exit codes and report determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_twisted-weyl"))
}

fn write_config(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("twisted-weyl-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

const SU2_ANTIHOL: &str = r#"{
  "group": {"family": "su", "n_or_k": 2},
  "automorphism": {"kind": "antihol", "matrix": [[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]},
  "action": {"cyclic": 2},
  "seed": 0
}"#;

const U2_TRIVIAL: &str = r#"{
  "group": {"family": "unitary", "n_or_k": 2},
  "automorphism": {"kind": "hol", "matrix": [[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]},
  "action": {"cyclic": 2},
  "seed": 0
}"#;

const SHEAR_INTEGERS: &str = r#"{
  "group": {"family": "torus", "n_or_k": 2},
  "automorphism": {"kind": "lattice", "matrix": [[1,1],[0,1]]},
  "action": {"integers": true},
  "pairs": [[[0.5, 0.25], [0.0, 0.0]]]
}"#;

const HYPER_INTEGERS: &str = r#"{
  "group": {"family": "torus", "n_or_k": 2},
  "automorphism": {"kind": "lattice", "matrix": [[2,1],[1,1]]},
  "action": {"integers": true},
  "pairs": [[[0.5, 0.25], [0.0, 0.0]], [[1.0, 2.0], [1.0, 2.0]]]
}"#;

const SU2_PAIR_DECIDE: &str = r#"{
  "group": {"family": "su", "n_or_k": 2},
  "automorphism": {"kind": "hol", "matrix": [[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]},
  "action": {"cyclic": 2},
  "pairs": [[[0.0, 0.0], [3.141592653589793, 3.141592653589793]]],
  "seed": 0
}"#;

#[test]
fn compute_h1_su2_antihol_exits_zero_with_one_class() {
    let cfg = write_config("su2_antihol.json", SU2_ANTIHOL);
    let out = run(&["compute-h1", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("classes         1"), "{text}");
    assert!(text.contains("status          complete"));
}

#[test]
fn compute_h1_u2_trivial_has_three_classes() {
    let cfg = write_config("u2_trivial.json", U2_TRIVIAL);
    let out = run(&["compute-h1", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("classes         3"), "{text}");
}

#[test]
fn shear_is_rejected_with_exit_one() {
    let cfg = write_config("shear.json", SHEAR_INTEGERS);
    let out = run(&["compute-h1", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("not 1-semisimple"), "{err}");
    // decide rejects it the same way.
    let out = run(&["decide", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn decide_hyperbolic_pairs_conjugate() {
    let cfg = write_config("hyper.json", HYPER_INTEGERS);
    let out = run(&["decide", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.matches("conjugate").count(), 2, "{text}");
}

#[test]
fn decide_su2_central_pair_not_conjugate() {
    let cfg = write_config("su2_pair.json", SU2_PAIR_DECIDE);
    let out = run(&["decide", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("not_conjugate"), "{text}");
}

#[test]
fn unknown_suite_and_bad_config_exit_64() {
    let out = run(&["verify", "nosuch"]);
    assert_eq!(out.status.code(), Some(64));
    let cfg = write_config("bad.json", r#"{"bad": 1}"#);
    let out = run(&["compute-h1", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(64));
    let cfg = write_config(
        "unknown_field.json",
        &SU2_ANTIHOL.replace("\"seed\": 0", "\"sneed\": 0"),
    );
    let out = run(&["compute-h1", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(64));
    // Missing pairs for decide is a usage error.
    let cfg = write_config("no_pairs.json", SU2_ANTIHOL);
    let out = run(&["decide", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn unreachable_tolerance_exits_incomplete() {
    let cfg = write_config("su2_strict.json", SU2_ANTIHOL);
    let out = run(&[
        "compute-h1",
        cfg.to_str().unwrap(),
        "--tol",
        "1e-30",
        "--quiet",
    ]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn verify_fixtures_suite_passes() {
    let out = run(&["verify", "fixtures", "--seed", "0"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS"), "{text}");
}

fn strip_timing(text: &str) -> String {
    text.lines()
        .filter(|l| !l.contains("timing_ms"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn reports_are_byte_identical_modulo_timing() {
    let cfg = write_config("su2_det.json", SU2_ANTIHOL);
    let dir = std::env::temp_dir().join("twisted-weyl-cli-tests");
    let out1 = dir.join("report1.json");
    let out2 = dir.join("report2.json");
    for out in [&out1, &out2] {
        let r = run(&[
            "compute-h1",
            cfg.to_str().unwrap(),
            "--json",
            out.to_str().unwrap(),
            "--quiet",
        ]);
        assert_eq!(r.status.code(), Some(0));
    }
    let a = strip_timing(&std::fs::read_to_string(&out1).unwrap());
    let b = strip_timing(&std::fs::read_to_string(&out2).unwrap());
    assert_eq!(a, b, "reports differ beyond the timing field");
    assert!(!a.is_empty());
}

#[test]
fn seed_flag_overrides_config() {
    let cfg = write_config("su2_seed.json", SU2_ANTIHOL);
    let dir = std::env::temp_dir().join("twisted-weyl-cli-tests");
    let out = dir.join("report_seed.json");
    let r = run(&[
        "compute-h1",
        cfg.to_str().unwrap(),
        "--seed",
        "7",
        "--json",
        out.to_str().unwrap(),
        "--quiet",
    ]);
    assert_eq!(r.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["seed"], 7);
    assert_eq!(doc["config"]["seed"], 7);
}
