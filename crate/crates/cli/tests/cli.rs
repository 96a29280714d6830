//! Golden runs of the binary: report bytes, exit codes, determinism, and
//! witnesses that re-check standalone.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dimgrowth")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

/// Value of `column` in the single data row of a CSV report.
fn csv_field(text: &str, column: &str) -> String {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let at = header.iter().position(|h| *h == column).unwrap_or_else(|| panic!("no column {column}"));
    row[at].to_string()
}

#[test]
fn ehrhart_golden_row() {
    let o = run(&["ehrhart", "--k", "2", "--r", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "k,r,oracle,paper_formula,corrected,status\n2,1,5,3,5,mismatch-paper-formula\n");
}

#[test]
fn ehrhart_agrees_in_one_dimension() {
    let o = run(&["ehrhart", "--k", "1", "--r", "100"]);
    assert_eq!(code(&o), 0);
    assert_eq!(csv_field(&stdout(&o), "status"), "match");
    assert_eq!(csv_field(&stdout(&o), "oracle"), "201");
}

#[test]
fn ehrhart_without_oracle_budget_is_indeterminate() {
    let o = run(&["ehrhart", "--k", "6", "--r", "12", "--budget", "10"]);
    assert_eq!(code(&o), 2);
    assert_eq!(csv_field(&stdout(&o), "oracle"), "skipped");
}

#[test]
fn min_colors_on_a_path() {
    let o = run(&["min-colors", "--space", "zpath:21", "--lambda", "3", "--D", "0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(csv_field(&stdout(&o), "colors"), "4");
}

#[test]
fn min_colors_on_the_three_cube() {
    let o = run(&["min-colors", "--space", "cube:3", "--lambda", "1", "--D", "0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(csv_field(&stdout(&o), "colors"), "2");
}

#[test]
fn parry_matches_bfs_on_the_lamplighter() {
    let o = run(&["parry", "--instance", "z2wrz", "--radius", "8", "--oracle", "bfs"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "instance,radius,elements,max_length,mismatches\nlamplighter,8,490,8,0\n");
}

#[test]
fn parry_matches_bfs_on_integer_wreath() {
    let o = run(&["parry", "--instance", "zwrz", "--radius", "4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(csv_field(&stdout(&o), "mismatches"), "0");
}

#[test]
fn bound_calculators() {
    let o = run(&["bk-lower", "--k", "1", "--lambda", "55"]);
    assert_eq!(code(&o), 0);
    assert_eq!(csv_field(&stdout(&o), "bound"), "11");
    let o = run(&["zwg-lower", "--group", "f2", "--lambda", "5"]);
    assert_eq!(code(&o), 0);
    assert_eq!(csv_field(&stdout(&o), "bound"), "5");
    let o = run(&["ko-bk", "--k", "0", "--lambda", "3", "--m", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(csv_field(&stdout(&o), "a"), "2");
}

#[test]
fn ko_bk_reports_the_failing_control_step() {
    let o = run(&["ko-bk", "--k", "1", "--lambda", "1", "--m", "0"]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert_eq!(csv_field(&text, "control"), "125");
    assert_eq!(csv_field(&text, "control_bound"), "32");
    assert_eq!(csv_field(&text, "control_holds"), "false");
}

#[test]
fn ko_line_rules() {
    let o = run(&["ko-line", "--lambda", "3", "--m", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(csv_field(&stdout(&o), "min_colors"), "3");
    let o = run(&["ko-line", "--lambda", "3", "--m", "0", "--rule", "literal", "--format", "json"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "witness");
    assert!(v["detail"]["first_short_point"].is_string());
}

#[test]
fn ko_grid_and_power_validate() {
    let o = run(&["ko-grid", "--n", "2", "--lambda", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(csv_field(&stdout(&o), "colors_used"), "3");
    let o = run(&["ko-power", "--lambda", "2", "--m", "1", "--k", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(csv_field(&stdout(&o), "n"), "3");
}

#[test]
fn cube_checks_pass_and_reject_bad_scales() {
    let o = run(&["cube-expansion", "--n", "4", "--r", "0"]);
    assert_eq!(code(&o), 0);
    let o = run(&["cube-expansion", "--n", "4", "--r", "1"]);
    assert_eq!(code(&o), 64);
    assert!(stderr(&o).contains("--n/--r"));
    let o = run(&["boundary2", "--n", "20", "--r", "2", "--samples", "300", "--seed", "9"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn cube_subset_recheck() {
    // All of Q_2 but one vertex, at r = 2: the boundary is the missing vertex.
    let o = run(&["cube-expansion", "--n", "2", "--r", "2", "--exploratory", "--subset", "2:07"]);
    assert_eq!(code(&o), 0);
    assert_eq!(csv_field(&stdout(&o), "boundary"), "1");
    let o = run(&["cube-expansion", "--n", "3", "--r", "2", "--subset", "2:07"]);
    assert_eq!(code(&o), 64);
}

#[test]
fn property_p_finds_a_witness_on_k5() {
    let o = run(&["property-p", "--graph", "complete:5", "--epsilon", "1/2", "--r", "1"]);
    assert_eq!(code(&o), 1);
    assert_eq!(csv_field(&stdout(&o), "size"), "4");
    assert_eq!(csv_field(&stdout(&o), "boundary"), "1");
}

#[test]
fn property_p_reads_edge_lists() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("square.txt");
    std::fs::write(&path, "a b\nb c\nc d\nd a\n").unwrap();
    let graph = format!("file:{}", path.display());
    let o = run(&["property-p", "--graph", &graph, "--epsilon", "1/2", "--r", "1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn thompson_checks() {
    let o = run(&["thompson-burillo", "--radius", "4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(csv_field(&stdout(&o), "violations"), "0");
    // The cell bracket for the embedding fails on this vector: 36 cells below 44.
    let o = run(&["thompson-embed", "--n", "2", "--kvec=-3,-3,-2,3"]);
    assert_eq!(code(&o), 1);
    assert_eq!(csv_field(&stdout(&o), "cells"), "36");
}

#[test]
fn usage_errors_exit_64_and_name_the_flag() {
    assert_eq!(code(&run(&[])), 64);
    assert_eq!(code(&run(&["no-such-command"])), 64);
    let o = run(&["min-colors", "--space", "moon:3", "--lambda", "1", "--D", "0"]);
    assert_eq!(code(&o), 64);
    assert!(stderr(&o).contains("--space"));
    let o = run(&["min-colors", "--space", "zpath:5", "--lambda", "x", "--D", "0"]);
    assert_eq!(code(&o), 64);
    assert!(stderr(&o).contains("--lambda"));
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
}

#[test]
fn exhausted_budget_is_indeterminate() {
    let o = run(&["parry", "--instance", "lamplighter", "--radius", "8", "--budget", "50"]);
    assert_eq!(code(&o), 2);
}

fn report_bytes(dir: &Path, name: &str, args: &[&str]) -> Vec<u8> {
    let path = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    full.extend(["--output", p]);
    let o = run(&full);
    assert!(o.stdout.is_empty());
    std::fs::read(&path).unwrap()
}

#[test]
fn fixed_seed_gives_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["thompson-embed", "--n", "2", "--samples", "30", "--seed", "11", "--format", "json"][..],
        &["cube-expansion", "--n", "12", "--r", "1", "--samples", "3000", "--seed", "11"][..],
        &["property-p", "--graph", "cycle:12", "--epsilon", "1/3", "--r", "3", "--samples", "200", "--seed", "11"][..],
    ] {
        let a = report_bytes(dir.path(), "a", args);
        let b = report_bytes(dir.path(), "b", args);
        assert!(!a.is_empty());
        assert_eq!(a, b, "{args:?}");
    }
    let a = report_bytes(dir.path(), "a", &["thompson-embed", "--n", "2", "--samples", "30", "--seed", "1"]);
    let b = report_bytes(dir.path(), "b", &["thompson-embed", "--n", "2", "--samples", "30", "--seed", "2"]);
    assert_ne!(a, b);
}

#[test]
fn certificates_revalidate_standalone() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let p = path.to_str().unwrap();
    let o = run(&["min-colors", "--space", "box:4x4", "--lambda", "1", "--D", "2", "--format", "json", "--output", p]);
    assert_eq!(code(&o), 0);
    let o = run(&["validate", "--space", "box:4x4", "--lambda", "1", "--D", "2", "--coloring", p]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(csv_field(&stdout(&o), "valid"), "true");
    // The same coloring at a tighter control is rejected with a witness cluster.
    let o = run(&["validate", "--space", "box:4x4", "--lambda", "1", "--D", "0", "--coloring", p, "--format", "json"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["detail"]["witness_cluster"].is_array());
}

#[test]
fn unwritable_output_is_a_usage_error() {
    let o = run(&["ehrhart", "--k", "1", "--r", "1", "--output", "/nonexistent/dir/report.csv"]);
    assert_eq!(code(&o), 64);
    assert!(stderr(&o).contains("--output"));
}

#[test]
fn hex_board_certificate_revalidates() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hex.json");
    let p = path.to_str().unwrap();
    let o = run(&["hex1", "--k", "2", "--s", "4", "--format", "json", "--output", p]);
    assert_eq!(code(&o), 0);
    let o = run(&["validate", "--space", "box:4x4", "--lambda", "2", "--D", "1", "--coloring", p]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(csv_field(&stdout(&o), "colors_used"), "4");
}
