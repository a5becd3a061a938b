//! End-to-end tests of the `lvf` binary: exit codes, report routing,
//! config layering, and the canonical text of `compute` outputs.

use std::path::PathBuf;
use std::process::{Command, Output};

use lvf_core::suites::suite_names;

/// Fresh command for the built binary, isolated from any ambient config.
fn lvf() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lvf"));
    cmd.env_remove("LVF_CONFIG");
    cmd
}

fn run(args: &[&str]) -> Output {
    lvf().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn temp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("lvf-cli-tests");
    std::fs::create_dir_all(&dir).expect("temp dir");
    dir.join(name)
}

#[test]
fn list_suites_prints_every_suite_once() {
    let out = run(&["list-suites"]);
    assert!(out.status.success());
    let stdout = stdout_of(&out);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines, suite_names());
}

#[test]
fn js_identities_example_passes() {
    let out = run(&["verify", "js-identities", "--window", "8", "--seed", "7"]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let stdout = stdout_of(&out);
    assert!(stdout.contains("\"suite\": \"js-identities\""));
    assert!(stdout.contains("\"seed\": 7"));
}

#[test]
fn wavelet_example_passes() {
    let out = run(&["verify", "wavelet", "--n", "2", "--max-exp", "30"]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
}

#[test]
fn coarse_quadrature_is_detected() {
    let out = run(&["verify", "sine-examples", "--quadrature-nodes", "100"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("FAIL x2dx-vs-quadrature"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = ["verify", "weyl-core", "--instances", "6", "--seed", "3"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let out = run(&["verify", "no-such-suite"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("unknown suite"));
}

#[test]
fn out_flag_routes_the_report_to_a_file() {
    let path = temp_path("weyl-core-report.json");
    let out = run(&[
        "verify",
        "weyl-core",
        "--instances",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout_of(&out).is_empty(), "report should go to the file only");
    let written = std::fs::read_to_string(&path).expect("report file");
    assert!(written.contains("\"schema_version\""));
    assert!(written.contains("\"suite\": \"weyl-core\""));
}

#[test]
fn config_file_is_honored_and_flags_override_it() {
    let path = temp_path("seed-override.toml");
    std::fs::write(&path, "seed = 123\n\n[suites.weyl-core]\ninstances = 4\n").unwrap();
    let config = path.to_str().unwrap();

    let from_file = run(&["verify", "weyl-core", "--config", config]);
    assert!(from_file.status.success(), "stderr: {}", stderr_of(&from_file));
    assert!(stdout_of(&from_file).contains("\"seed\": 123"));

    let flag_wins = run(&["verify", "weyl-core", "--config", config, "--seed", "9"]);
    assert!(flag_wins.status.success());
    assert!(stdout_of(&flag_wins).contains("\"seed\": 9"));
}

#[test]
fn env_var_names_the_default_config() {
    let path = temp_path("env-config.toml");
    std::fs::write(&path, "seed = 55\n\n[suites.weyl-core]\ninstances = 4\n").unwrap();
    let out = lvf()
        .env("LVF_CONFIG", &path)
        .args(["verify", "weyl-core"])
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    assert!(stdout_of(&out).contains("\"seed\": 55"));
}

#[test]
fn malformed_config_is_rejected() {
    let path = temp_path("typo-config.toml");
    std::fs::write(&path, "sede = 11\n").unwrap();
    let out = run(&["verify", "weyl-core", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compute_d_matrix_shows_the_minus_pi_diagonal() {
    let out = run(&["compute", "d-matrix", "--basis", "x2dx", "--window", "4"]);
    assert!(out.status.success());
    let stdout = stdout_of(&out);
    assert!(stdout.contains("-pi"));
    assert!(stdout.contains("(8/3)pi"));
    assert_eq!(stdout.lines().count(), 6, "title + header + four rows");
}

#[test]
fn compute_weyl_element_prints_the_canonical_form() {
    let out = run(&["compute", "weyl-element", "--op", "D(E12)"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out).trim(), "x[1] d[2]");
}

#[test]
fn compute_cuntz_element_prints_the_canonical_form() {
    let out = run(&["compute", "cuntz-element", "--op", "D(E12)"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out).trim(), "s[1] s*[2]");
}

#[test]
fn compute_cocycle_table_is_antisymmetric_with_frozen_entries() {
    let out = run(&["compute", "cocycle-table", "--algebra", "sl2", "--u", "h", "--degree", "2"]);
    assert!(out.status.success());
    let stdout = stdout_of(&out);
    assert!(stdout.contains(" 12"));
    assert!(stdout.contains("-12"));
}

#[test]
fn compute_out_flag_duplicates_stdout_into_a_file() {
    let path = temp_path("weyl-element.txt");
    let out = run(&["compute", "weyl-element", "--op", "del(e3)", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let written = std::fs::read_to_string(&path).expect("output file");
    assert_eq!(written, stdout_of(&out));
}
