//! End-to-end tests against the built binary: file parsing, report
//! semantics, exit codes and determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempered_cli::Report;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_tempered")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tempered-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_m2(dir: &Path) -> PathBuf {
    let path = dir.join("m2.json");
    std::fs::write(
        &path,
        r#"{
  "field": "rationals",
  "dim": 4,
  "labels": ["e11", "e12", "e21", "e22"],
  "structure_constants": [
    [0, 0, 0, "1"], [0, 1, 1, "1"],
    [1, 2, 0, "1"], [1, 3, 1, "1"],
    [2, 0, 2, "1"], [2, 1, 3, "1"],
    [3, 2, 2, "1"], [3, 3, 3, "1"]
  ],
  "unit": ["1", "0", "0", "1"]
}"#,
    )
    .unwrap();
    path
}

fn write_t2(dir: &Path) -> PathBuf {
    let path = dir.join("t2.json");
    std::fs::write(
        &path,
        r#"{
  "field": "rationals",
  "dim": 3,
  "labels": ["e11", "e12", "e22"],
  "structure_constants": [
    [0, 0, 0, "1"], [0, 1, 1, "1"],
    [1, 2, 1, "1"], [2, 2, 2, "1"]
  ],
  "unit": ["1", "0", "1"]
}"#,
    )
    .unwrap();
    path
}

fn write_kx3(dir: &Path) -> PathBuf {
    // k[x]/(x^3)
    let path = dir.join("kx3.json");
    std::fs::write(
        &path,
        r#"{
  "field": "rationals",
  "dim": 3,
  "labels": ["1", "x", "x^2"],
  "structure_constants": [
    [0, 0, 0, "1"], [0, 1, 1, "1"], [0, 2, 2, "1"],
    [1, 0, 1, "1"], [1, 1, 2, "1"],
    [2, 0, 2, "1"]
  ],
  "unit": ["1", "0", "0"]
}"#,
    )
    .unwrap();
    path
}

#[test]
fn well_tempered_examples() {
    let dir = temp_dir("wt");
    let m2 = write_m2(&dir);
    let out = run(&["well-tempered", "--algebra", m2.to_str().unwrap(), "--delta", "e11", "--format", "structured"]);
    assert!(out.status.success());
    let report: Report = serde_json::from_str(&stdout(&out)).unwrap();
    let criterion = report.checks.iter().find(|c| c.name == "criterion").unwrap();
    assert_eq!(criterion.data["well_tempered"], serde_json::json!(true));

    let t2 = write_t2(&dir);
    let out = run(&["well-tempered", "--algebra", t2.to_str().unwrap(), "--delta", "e12", "--format", "structured"]);
    assert!(out.status.success(), "computation succeeded, value false, exit 0");
    let report: Report = serde_json::from_str(&stdout(&out)).unwrap();
    let criterion = report.checks.iter().find(|c| c.name == "criterion").unwrap();
    assert_eq!(criterion.data["well_tempered"], serde_json::json!(false));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn oracle_runs_all_agreements() {
    let out = run(&["oracle", "--seed", "7", "--trials", "50", "--format", "structured"]);
    assert!(out.status.success());
    let report: Report = serde_json::from_str(&stdout(&out)).unwrap();
    let agreement = report.checks.iter().find(|c| c.name == "agreement").unwrap();
    assert_eq!(agreement.data["agreements"], serde_json::json!(50));
    assert_eq!(agreement.data["trials"], serde_json::json!(50));
}

#[test]
fn structured_reports_are_deterministic_and_round_trip() {
    let dir = temp_dir("det");
    let m2 = write_m2(&dir);
    let args = ["radical", "--algebra", m2.to_str().unwrap(), "--format", "structured"];
    let first = stdout(&run(&args));
    let second = stdout(&run(&args));
    assert_eq!(first, second, "byte-identical structured reports");
    let report: Report = serde_json::from_str(&first).unwrap();
    let re_emitted = serde_json::to_string_pretty(&report).unwrap() + "\n";
    assert_eq!(first, re_emitted, "structured output round-trips");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn malformed_inputs_exit_with_diagnostics() {
    let dir = temp_dir("bad");
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = run(&["check", "--algebra", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    // Out-of-range structure constant index carries location info.
    let oob = dir.join("oob.json");
    std::fs::write(
        &oob,
        r#"{"field": "rationals", "dim": 2, "structure_constants": [[0, 0, 2, "1"]]}"#,
    )
    .unwrap();
    let out = run(&["check", "--algebra", oob.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("structure_constants[0]"), "stderr: {err}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn blocks_reports_not_split_as_error() {
    let dir = temp_dir("split");
    let sqrt2 = dir.join("sqrt2.json");
    // Q[x]/(x^2 - 2)
    std::fs::write(
        &sqrt2,
        r#"{
  "field": "rationals",
  "dim": 2,
  "labels": ["1", "x"],
  "structure_constants": [
    [0, 0, 0, "1"], [0, 1, 1, "1"], [1, 0, 1, "1"], [1, 1, 0, "2"]
  ],
  "unit": ["1", "0"]
}"#,
    )
    .unwrap();
    let out = run(&["blocks", "--algebra", sqrt2.to_str().unwrap(), "--format", "structured"]);
    assert_eq!(out.status.code(), Some(1));
    let report: Report = serde_json::from_str(&stdout(&out)).unwrap();
    let blocks = report.checks.iter().find(|c| c.name == "blocks").unwrap();
    assert!(blocks.data["message"].as_str().unwrap().contains("split"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn check_and_radical_on_triangular_fixture() {
    let dir = temp_dir("t2");
    let t2 = write_t2(&dir);
    let out = run(&["check", "--algebra", t2.to_str().unwrap(), "--format", "structured"]);
    assert!(out.status.success());
    let report: Report = serde_json::from_str(&stdout(&out)).unwrap();
    let assoc = report.checks.iter().find(|c| c.name == "associative").unwrap();
    assert_eq!(assoc.data["value"], serde_json::json!(true));

    let out = run(&["radical", "--algebra", t2.to_str().unwrap(), "--format", "structured"]);
    let report: Report = serde_json::from_str(&stdout(&out)).unwrap();
    let radical = report.checks.iter().find(|c| c.name == "radical").unwrap();
    assert_eq!(radical.data["dim"], serde_json::json!(1));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn homotope_writes_a_loadable_algebra() {
    let dir = temp_dir("homotope");
    let m2 = write_m2(&dir);
    let out_path = dir.join("aug.json");
    let out = run(&[
        "homotope",
        "--algebra",
        m2.to_str().unwrap(),
        "--delta",
        "e11",
        "--augmented",
        "--write-algebra",
        out_path.to_str().unwrap(),
        "--format",
        "structured",
    ]);
    assert!(out.status.success());
    // The written algebra parses and its radical has dimension 3.
    let out = run(&["radical", "--algebra", out_path.to_str().unwrap(), "--format", "structured"]);
    assert!(out.status.success());
    let report: Report = serde_json::from_str(&stdout(&out)).unwrap();
    let radical = report.checks.iter().find(|c| c.name == "radical").unwrap();
    assert_eq!(radical.data["dim"], serde_json::json!(3));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn rep_dims_and_normal_form() {
    let dir = temp_dir("repdims");
    let m2 = write_m2(&dir);
    let out = run(&["rep-dims", "--algebra", m2.to_str().unwrap(), "--delta", "e11", "--format", "structured"]);
    assert!(out.status.success());
    let report: Report = serde_json::from_str(&stdout(&out)).unwrap();
    let dims = report.checks.iter().find(|c| c.name == "rep-dims").unwrap();
    assert_eq!(dims.data["block_ranks"], serde_json::json!([1]));
    assert_eq!(dims.data["irreducible_dims"], serde_json::json!([1, 1]));

    // normal-form on a file algebra without splitting metadata and a
    // non-semisimple radical: graceful error status.
    let t2 = write_t2(&dir);
    let out = run(&["normal-form", "--algebra", t2.to_str().unwrap(), "--delta", "e12", "--format", "structured"]);
    assert_eq!(out.status.code(), Some(1));

    // On a split commutative semisimple file algebra it works.
    let kxx = dir.join("kxx.json");
    std::fs::write(
        &kxx,
        r#"{
  "field": "rationals",
  "dim": 2,
  "labels": ["1", "x"],
  "structure_constants": [
    [0, 0, 0, "1"], [0, 1, 1, "1"], [1, 0, 1, "1"], [1, 1, 1, "1"]
  ],
  "unit": ["1", "0"]
}"#,
    )
    .unwrap();
    let out = run(&["normal-form", "--algebra", kxx.to_str().unwrap(), "--delta", "x", "--format", "structured"]);
    assert!(out.status.success(), "{}", stdout(&out));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn fiber_glue_unglue_round_trip_via_files() {
    let dir = temp_dir("fiber");
    let kx3 = write_kx3(&dir);
    // Module: the regular module of B = augmented homotope at x^2. Build
    // it by writing the augmented homotope first, then its regular
    // module document by hand through the library.
    let aug_path = dir.join("b.json");
    let out = run(&[
        "homotope",
        "--algebra",
        kx3.to_str().unwrap(),
        "--delta",
        "x^2",
        "--augmented",
        "--write-algebra",
        aug_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let b = tempered_core::io::read_algebra_file(&aug_path).unwrap();
    let reg = tempered_core::modules::regular_module(&b, tempered_core::Side::Left).unwrap();
    let reg_path = dir.join("reg.json");
    tempered_core::io::write_module_file(&reg_path, &reg).unwrap();

    let triple_path = dir.join("triple.json");
    let out = run(&[
        "fiber",
        "glue",
        "--algebra",
        kx3.to_str().unwrap(),
        "--delta",
        "x^2",
        "--module",
        reg_path.to_str().unwrap(),
        "--write-triple",
        triple_path.to_str().unwrap(),
        "--format",
        "structured",
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    let report: Report = serde_json::from_str(&stdout(&out)).unwrap();
    let glue = report.checks.iter().find(|c| c.name == "glue").unwrap();
    assert_eq!(glue.data["n_dim"], serde_json::json!(1));
    assert_eq!(glue.data["m_prime_dim"], serde_json::json!(3));

    let module_out = dir.join("unglued.json");
    let out = run(&[
        "fiber",
        "unglue",
        "--algebra",
        kx3.to_str().unwrap(),
        "--delta",
        "x^2",
        "--triple",
        triple_path.to_str().unwrap(),
        "--write-module",
        module_out.to_str().unwrap(),
        "--format",
        "structured",
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    let module = tempered_core::io::read_module_file(&module_out).unwrap();
    // dim B - dim Ann(delta) = 4 - 2.
    assert_eq!(module.dim(), 2);

    // unit-kernel with --u inside the principal ideal.
    let out = run(&[
        "fiber",
        "unit-kernel",
        "--algebra",
        kx3.to_str().unwrap(),
        "--delta",
        "x^2",
        "--u",
        "x^2",
        "--format",
        "structured",
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    let report: Report = serde_json::from_str(&stdout(&out)).unwrap();
    let kernel = report.checks.iter().find(|c| c.name == "unit-kernel").unwrap();
    assert_eq!(kernel.data["dim"], serde_json::json!(1));

    // --u outside the ideal is a usage error.
    let out = run(&[
        "fiber",
        "unit-kernel",
        "--algebra",
        kx3.to_str().unwrap(),
        "--delta",
        "x^2",
        "--u",
        "x",
    ]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn nonassoc_subcommands() {
    let out = run(&["nonassoc", "density", "--d", "2", "--p", "101", "--samples", "40", "--seed", "5", "--format", "structured"]);
    assert!(out.status.success());
    let first = stdout(&out);
    let second = stdout(&run(&["nonassoc", "density", "--d", "2", "--p", "101", "--samples", "40", "--seed", "5", "--format", "structured"]));
    assert_eq!(first, second);

    let out = run(&["nonassoc", "preimages", "--d", "2", "--p", "101", "--seed", "3", "--format", "structured"]);
    assert!(out.status.success());
    let report: Report = serde_json::from_str(&stdout(&out)).unwrap();
    let pre = report.checks.iter().find(|c| c.name == "preimages").unwrap();
    assert_eq!(pre.data["count"], serde_json::json!(4));

    let out = run(&["nonassoc", "classify", "--d", "3", "--p", "101", "--seed", "2", "--format", "structured"]);
    assert!(out.status.success());
}

#[test]
fn projective_subcommand() {
    let dir = temp_dir("proj");
    let m2 = write_m2(&dir);
    let a = tempered_core::io::read_algebra_file(&m2).unwrap();
    let reg = tempered_core::modules::regular_module(&a, tempered_core::Side::Left).unwrap();
    let reg_path = dir.join("reg.json");
    tempered_core::io::write_module_file(&reg_path, &reg).unwrap();
    let out = run(&["projective", "--module", reg_path.to_str().unwrap(), "--format", "structured"]);
    assert!(out.status.success());
    let report: Report = serde_json::from_str(&stdout(&out)).unwrap();
    let check = report.checks.iter().find(|c| c.name == "projective").unwrap();
    assert_eq!(check.data["value"], serde_json::json!(true));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn recollement_subcommand_default_samples() {
    let dir = temp_dir("rec");
    let m2 = write_m2(&dir);
    let out = run(&["recollement", "--algebra", m2.to_str().unwrap(), "--delta", "e11", "--format", "structured"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let report: Report = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report.checks.len() > 3);

    // Non-well-tempered element: identities fail, exit code 1.
    let t2 = write_t2(&dir);
    let out = run(&["recollement", "--algebra", t2.to_str().unwrap(), "--delta", "e12"]);
    assert_eq!(out.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn report_out_flag_writes_file() {
    let dir = temp_dir("out");
    let m2 = write_m2(&dir);
    let report_path = dir.join("report.json");
    let out = run(&[
        "check",
        "--algebra",
        m2.to_str().unwrap(),
        "--format",
        "structured",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let from_file: Report = serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    let from_stdout: Report = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(from_file, from_stdout);
    std::fs::remove_dir_all(&dir).ok();
}
