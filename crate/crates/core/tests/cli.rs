//! End-to-end runs of the command-line front end.

use std::fs;
use std::path::Path;
use std::process::Command;

use hyperdev::cli::main_with_args;

fn run(args: &[&str]) -> i32 {
    main_with_args(std::iter::once("hyperdev").chain(args.iter().copied()))
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn build_writes_an_edge_list_and_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "kap.txt");
    assert_eq!(run(&["build", "--family", "kap", "--n", "13", "--k", "3", "--out", &out]), 0);
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("3 13 78"));
    assert_eq!(text.lines().count(), 79);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(format!("{out}.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["tool"], "hyperdev");
    assert_eq!(manifest["config"]["command"]["subcommand"], "build");
}

#[test]
fn replay_reproduces_a_simulation_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let first = path(dir.path(), "sim.csv");
    let args = [
        "simulate", "--family", "kap", "--n", "101", "--k", "3", "--model", "m", "--param", "50",
        "--thresholds", "0,10,20,40", "--samples", "20000", "--kernel", "bitset", "--seed", "11", "--out", &first,
    ];
    assert_eq!(run(&args), 0);
    let second = path(dir.path(), "again.csv");
    let manifest = format!("{first}.manifest.json");
    assert_eq!(run(&["replay", &manifest, "--out", &second, "--threads", "1"]), 0);
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
}

#[test]
fn bounds_grid_is_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "b.csv");
    let code = run(&[
        "bounds", "--theorem", "thm5.2", "--params", "{N:101,m:50}", "--grid", "a=0:5000:1000", "--out", &out,
    ]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn transfer_agrees_with_direct_enumeration() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "t.json");
    let code = run(&[
        "transfer", "--family", "random", "--n", "12", "--k", "3", "--edges", "20", "--p", "0.3", "--a", "1",
        "--out", &out,
    ]);
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["agree"], true);
}

#[test]
fn construct_emits_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "c.txt");
    let code = run(&["construct", "--r", "2", "--l", "24", "--s", "24", "--relaxed", "--out", &out]);
    assert_eq!(code, 0);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(format!("{out}.report.json")).unwrap()).unwrap();
    assert_eq!(report["h"], 24288);
    assert_eq!(report["niceness"]["coefficients"][0], 24288);
}

#[test]
fn configuration_errors_exit_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "x.txt");
    assert_eq!(run(&["build", "--family", "kap", "--n", "100", "--k", "3", "--out", &out]), 2);
    assert!(!Path::new(&out).exists());
    assert_eq!(run(&["bounds", "--theorem", "nope", "--params", "{}"]), 2);
    assert_eq!(run(&["simulate", "--family", "kap"]), 2);
}

#[test]
fn missing_files_exit_3() {
    let code = run(&["analyze", "--family", "file", "--input", "/nonexistent/edges.txt"]);
    assert_eq!(code, 3);
}

#[test]
fn verify_martingale_passes_on_kap() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "v.json");
    assert_eq!(run(&["verify-martingale", "--family", "kap", "--n", "13", "--k", "3", "--trials", "5", "--out", &out]), 0);
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_hyperdev");
    let ok = Command::new(bin).args(["bounds", "--theorem", "thm5.2", "--params", "{N:101,m:50,a:4000}"]).output().unwrap();
    assert!(ok.status.success());
    assert!(String::from_utf8_lossy(&ok.stdout).contains("0.6965975999589743"));
    let bad = Command::new(bin).args(["build", "--family", "kap", "--n", "12", "--k", "3"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
