use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sqgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqgraph")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn records(out: &Output) -> Vec<Value> {
    stdout(out).lines().map(|l| serde_json::from_str(l).expect("json line")).collect()
}

fn single(args: &[&str]) -> Value {
    let out = sqgraph(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stderr(&out));
    let mut recs = records(&out);
    assert_eq!(recs.len(), 1);
    recs.remove(0)
}

#[test]
fn expi_pinned_instance_with_witness_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let rec = single(&["expi", "4", "4", "15", "--out", path.to_str().unwrap()]);
    assert_eq!(rec["value"], "216");
    assert_eq!(rec["density_approx"], "2.44948974278");
    assert_eq!(rec["optimal"], true);
    assert_eq!(rec["witness"], path.to_str().unwrap());
    let w: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let mut weights: Vec<u64> = w["edges"].as_array().unwrap().iter().map(|e| e[2].as_u64().unwrap()).collect();
    weights.sort();
    assert_eq!(weights, vec![2, 2, 2, 3, 3, 3]);
}

#[test]
fn exsum_and_amgm_instances() {
    assert_eq!(single(&["exsum", "4", "4", "15"])["value"], "15");
    assert_eq!(single(&["expi", "4", "4", "12"])["value"], "64");
    assert_eq!(single(&["count", "4", "4", "3"])["value"], "84");
    assert_eq!(single(&["count", "3", "2", "2"])["value"], "27");
}

#[test]
fn csv_output_has_header() {
    let out = sqgraph(&["exsum", "4", "4", "15", "--format", "csv"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let value = header.iter().position(|&h| h == "value").unwrap();
    assert_eq!(row[value], "15");
}

#[test]
fn construct_writes_both_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let rec = single(&["construct", "2", "2", "1", "5", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(rec["product_value"], "5832");
    assert_eq!(rec["product_sizes"], serde_json::json!([2, 3]));
    assert_eq!(rec["sum_value"], "25");
    for key in ["sum_witness", "product_witness"] {
        assert!(Path::new(rec[key].as_str().unwrap()).is_file(), "{key}");
    }
}

#[test]
fn construct_single_part_is_a_constant_clique() {
    let rec = single(&["construct", "3", "1", "0", "4"]);
    let edges = rec["product_witness"]["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 6);
    assert!(edges.iter().all(|e| e[2] == 3));
    assert_eq!(rec["product_value"], "729");
}

#[test]
fn construct_special_part_tracks_x_star() {
    let rec = single(&["construct", "2", "3", "1", "9"]);
    let v0 = rec["v0"].as_f64().unwrap();
    let target: f64 = rec["x_star_times_n_approx"].as_str().unwrap().parse().unwrap();
    assert!((v0 - target).abs() <= 1.0, "v0 {v0}, x_* n {target}");
}

#[test]
fn iterate_reports_measurements() {
    let rec = single(&["iterate", "--a", "3", "--level", "2:1", "--level", "2:1", "--sizes", "3,3", "--sizes", "1,2", "--s", "4"]);
    assert_eq!(rec["n"], 6);
    assert!(rec["max_sum_s4"].as_u64().is_some());
    let bad = sqgraph(&["iterate", "--a", "3", "--level", "2:1", "--level", "2:1", "--sizes", "3,3", "--sizes", "2,2"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    let out = sqgraph(&["expi", "5", "6", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("s <= n"));
    assert_eq!(sqgraph(&["expi", "4", "4"]).status.code(), Some(2));
    assert_eq!(sqgraph(&["expi", "4", "4", "15", "--threads", "0"]).status.code(), Some(2));
    assert_eq!(sqgraph(&["verify", "everything"]).status.code(), Some(2));
    assert_eq!(sqgraph(&["formulas", "--precision", "10"]).status.code(), Some(2));
}

#[test]
fn budget_bound_results_exit_3() {
    let out = sqgraph(&["expi", "7", "4", "15", "--budget", "1000"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(records(&out)[0]["optimal"], false);
    assert_eq!(sqgraph(&["count", "6", "3", "9", "--budget", "100"]).status.code(), Some(3));
}

#[test]
fn cache_short_circuits_and_reloads_identically() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    let args = ["expi", "5", "4", "15", "--cache", cache.to_str().unwrap()];
    let first = single(&args);
    let second = single(&args);
    assert_eq!(first["cached"], false);
    assert_eq!(second["cached"], true);
    for key in ["value", "nodes", "bound_prunes", "symmetry_prunes", "wall_ms", "density_approx"] {
        assert_eq!(first[key], second[key], "{key}");
    }
    let text = std::fs::read_to_string(&cache).unwrap();
    assert_eq!(text.lines().count(), 1);
    let rec: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(rec["key"], serde_json::json!({"n": 5, "s": 4, "q": 15, "mode": "product"}));
    assert_eq!(rec["value"], "7776");

    // another engine version is ignored and a fresh record appended
    let stale = text.replace(rec["engine_version"].as_str().unwrap(), "0.0.0-old");
    std::fs::write(&cache, stale).unwrap();
    assert_eq!(single(&args)["cached"], false);
    assert_eq!(std::fs::read_to_string(&cache).unwrap().lines().count(), 2);
    assert_eq!(single(&args)["cached"], true);
}

#[test]
fn verify_conditions_passes_on_default_grid() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = sqgraph(&["verify", "conditions", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stderr(&out).contains(" 0 hard failures"));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("suite,check,point,status,kind,left,right,notes\n"));
    assert!(!text.contains(",fail,"));
}

#[test]
fn verify_conjecture_dominance() {
    let out = sqgraph(&["verify", "conjecture", "--a", "2", "--r", "2", "--d", "1", "--n", "4..6"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let recs = records(&out);
    let dom: Vec<&Value> = recs.iter().filter(|r| r["check"] == "conjecture_dominance").collect();
    assert_eq!(dom.len(), 3);
    assert!(dom.iter().all(|r| r["status"] == "pass"));
    assert_eq!(dom[1]["right"], "5832");
    assert!(recs.iter().filter(|r| r["kind"] == "reported-only").all(|r| r["status"] == "reported"));
}

#[test]
fn empty_grid_gives_empty_report() {
    let out = sqgraph(&["verify", "conjecture", "--n", "5..4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
}

#[test]
fn hard_failures_exit_4() {
    // clone preservation fails on this grid; see the transformations suite
    let out = sqgraph(&["verify", "transformations"]);
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));
    assert!(stderr(&out).contains("aborted: transformations"));
    let recs = records(&out);
    assert_eq!(recs.iter().filter(|r| r["status"] == "fail").count(), 1);
}

#[test]
fn formulas_grid() {
    let out = sqgraph(&["formulas", "--a", "2", "--r", "2", "--d", "1"]);
    let rec = &records(&out)[0];
    assert_eq!(rec["x_star"], "0.26957728969081490087");
    assert_eq!(rec["theorem_value"], "2.2310032349914817322");
    assert_eq!(rec["sigma_coeff"], "7/3");
    assert_eq!(rec["min_r"], 3);
}
