use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn amalgam(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amalgam"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("AMALGAM_OUT")
        .output()
        .expect("binary runs")
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn theorem_tuple_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let o = amalgam(
        &["check-tuple", "--set", "theorem", "--n", "1", "--sigma", "0.3", "--qt", "2", "--rt", "inf", "--q", "10", "--r", "inf"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let m = manifest(dir.path());
    assert_eq!(m["status"], "complete");
    assert_eq!(m["summary"]["verdict"], "accept");
    let csv = fs::read_to_string(dir.path().join("results.csv")).unwrap();
    assert!(csv.starts_with("constraint,passed,slack\n"));
}

#[test]
fn classical_endpoint_is_a_reject_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let o = amalgam(&["check-tuple", "--set", "classical", "--q", "2", "--r", "inf", "--n", "2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(manifest(dir.path())["summary"]["verdict"], "reject");
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = amalgam(&["check-tuple", "--set", "theorem", "--bogus", "1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    let o = amalgam(&["frobnicate"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_input_is_a_usage_error_and_marks_the_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let o = amalgam(&["norm", "--points", "100"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(manifest(dir.path())["status"], "failed");
}

#[test]
fn identical_runs_give_identical_bytes() {
    let runs: [&[&str]; 3] = [
        &["bilinear", "--pairs", "3", "--seed", "5"],
        &["region", "--set", "theorem", "--sigma", "3/10", "--rt", "inf", "--free", "qt,q", "--solve", "r", "--resolution", "1/32"],
        &["suite", "--corpus", "8", "--seed", "11"],
    ];
    for args in runs {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        assert_eq!(amalgam(args, a.path()).status.code(), Some(0), "{args:?}");
        assert_eq!(amalgam(args, b.path()).status.code(), Some(0), "{args:?}");
        for name in ["results.csv", "mesh.csv"] {
            let (pa, pb) = (a.path().join(name), b.path().join(name));
            if pa.exists() {
                assert_eq!(fs::read(pa).unwrap(), fs::read(pb).unwrap(), "{args:?} {name}");
            }
        }
    }
}

#[test]
fn region_writes_mesh_and_accepted_tuples() {
    let dir = tempfile::tempdir().unwrap();
    let o = amalgam(
        &["region", "--set", "theorem", "--sigma", "3/10", "--rt", "inf", "--free", "qt,q", "--solve", "r", "--resolution", "1/64"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let m = manifest(dir.path());
    assert_eq!(m["outputs"], serde_json::json!(["results.csv", "mesh.csv"]));
    assert!(m["summary"]["accepted"].as_u64().unwrap() > 0);
    let mesh = fs::read_to_string(dir.path().join("mesh.csv")).unwrap();
    assert_eq!(mesh.lines().count(), 65 * 65 + 1);
}

#[test]
fn env_overrides_out_flag() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_amalgam"))
        .args(["check-tuple", "--set", "classical", "--q", "4", "--r", "inf", "--n", "1", "--out"])
        .arg(flag_dir.path())
        .env("AMALGAM_OUT", env_dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(env_dir.path().join("manifest.json").exists());
    assert!(!flag_dir.path().join("manifest.json").exists());
}

#[test]
fn config_file_supplies_flags_and_command_line_wins() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "# classical pair\nset = classical\nn = 1\nq = 4\nr = inf\n").unwrap();
    let out = dir.path().join("a");
    let o = amalgam(&["check-tuple", "--config", cfg.to_str().unwrap()], &out);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(manifest(&out)["summary"]["verdict"], "accept");
    let out = dir.path().join("b");
    let o = amalgam(&["check-tuple", "--config", cfg.to_str().unwrap(), "--q", "2"], &out);
    assert_eq!(o.status.code(), Some(0));
    let m = manifest(&out);
    assert_eq!(m["parameters"]["tuple"]["q"], "2");
    assert_eq!(m["summary"]["verdict"], "reject");
}

#[test]
fn fit_decay_reports_tolerance_failures_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["fit-decay", "--sigma", "0.3", "--points", "1024", "--half-length", "16", "--per-decade", "8"];
    let o = amalgam(&base, &dir.path().join("ok"));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let o = amalgam(&[&base[..], &["--tolerance", "0"]].concat(), &dir.path().join("strict"));
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(manifest(&dir.path().join("strict"))["status"], "failed");
}
