//! End-to-end tests of the `hurwitz` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hurwitz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hurwitz")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn value_of(args: &[&str]) -> String {
    json(&hurwitz(args))["value"].as_str().expect("value string").to_string()
}

#[test]
fn compute_reference_values() {
    assert_eq!(value_of(&["compute", "--engine", "oracle", "g=1;mu=5;nu=4,1"]), "100/1");
    assert_eq!(value_of(&["compute", "--engine", "recursion", "g=0;mu=7;nu=3,4"]), "1/1");
    assert_eq!(value_of(&["compute", "--engine", "oracle", "--pruned", "g=0;mu=2;nu=2"]), "0/1");
    assert_eq!(value_of(&["compute", "--engine", "tropical", "--type", "g=1;mu=5;nu=4,1"]), "100/1");
    assert_eq!(value_of(&["compute", "--engine", "pruned-tropical", "g=1;mu=5;nu=4,1"]), "100/1");
}

#[test]
fn json_record_keys_in_order() {
    let out = hurwitz(&["compute", "--engine", "oracle", "g=0;mu=2,1;nu=1,1,1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let positions: Vec<usize> = ["\"type\"", "\"engine\"", "\"value\"", "\"objects\"", "\"elapsed_ms\""]
        .iter()
        .map(|k| text.find(k).expect("key present"))
        .collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{text}");
}

#[test]
fn single_hurwitz_engines_agree() {
    let t = "g=0;mu=2,1;nu=1,1,1";
    let oracle = value_of(&["compute", "--engine", "oracle", "--pruned-side", "right", t]);
    let dyck = value_of(&["compute", "--engine", "dyck", "--pruned", t]);
    assert_eq!(oracle, dyck);
    let classical = value_of(&["compute", "--engine", "oracle", t]);
    assert_eq!(value_of(&["compute", "--engine", "dyck", t]), classical);
    assert_eq!(value_of(&["compute", "--engine", "mobile", t]), classical);
}

#[test]
fn exit_codes() {
    assert_eq!(hurwitz(&["compute", "--engine", "oracle", "nonsense"]).status.code(), Some(2));
    assert_eq!(hurwitz(&["compute", "--engine", "oracle", "g=0;mu=3;nu=2"]).status.code(), Some(2));
    assert_eq!(hurwitz(&["compute", "--engine", "oracle", "--budget", "5", "g=1;mu=4,4;nu=4,4"]).status.code(), Some(3));
    assert_eq!(hurwitz(&["compute", "--engine", "tropical", "--pruned", "g=1;mu=5;nu=4,1"]).status.code(), Some(4));
    assert_eq!(hurwitz(&["compute", "--engine", "dyck", "g=1;mu=3;nu=1,1,1"]).status.code(), Some(4));
}

#[test]
fn warm_cache_gives_same_value() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("memo.txt");
    let cache = cache.to_str().unwrap();
    let args = ["compute", "--engine", "recursion", "--cache", cache, "g=1;mu=3,2;nu=2,2,1"];
    let cold = value_of(&args);
    assert!(Path::new(cache).exists());
    let warm = value_of(&args);
    assert_eq!(cold, warm);
    assert_eq!(cold, value_of(&["compute", "--engine", "oracle", "--pruned", "g=1;mu=3,2;nu=2,2,1"]));
}

fn manifest(engine: &str, t: &str, out: &Path) -> Value {
    let rec = json(&hurwitz(&["export-graphs", "--engine", engine, "--type", t, "--out", out.to_str().unwrap()]));
    let dir = std::fs::read_dir(out).unwrap().next().unwrap().unwrap().path();
    let m: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["count"], rec["objects"]);
    // Files are named by canonical hash, so distinct objects never collide.
    let files = std::fs::read_dir(&dir).unwrap().count() as u64;
    assert_eq!(files, m["count"].as_u64().unwrap() + 1);
    for o in m["objects"].as_array().unwrap() {
        assert!(dir.join(o["file"].as_str().unwrap()).exists());
    }
    m
}

fn weights(m: &Value) -> Vec<String> {
    let mut w: Vec<String> =
        m["objects"].as_array().unwrap().iter().map(|o| o["weight"].as_str().unwrap().to_string()).collect();
    w.sort();
    w
}

#[test]
fn export_tropical_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let m = manifest("tropical", "g=1;mu=5;nu=4,1", dir.path());
    assert_eq!(m["count"], 7);
    assert_eq!(m["total"], "100/1");
    let mut expected: Vec<String> = [20, 8, 12, 12, 30, 12, 6].iter().map(|w| format!("{w}/1")).collect();
    expected.sort();
    assert_eq!(weights(&m), expected);
}

#[test]
fn export_pruned_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let m = manifest("pruned-tropical", "g=2;mu=1,1,1;nu=3", dir.path());
    assert_eq!(m["count"], 8);
    let mut expected: Vec<String> = [72, 24, 12, 72, 36, 108, 96, 30].iter().map(|w| format!("{w}/1")).collect();
    expected.sort();
    assert_eq!(weights(&m), expected);

    let dir = tempfile::tempdir().unwrap();
    assert_eq!(manifest("pruned-tropical", "g=2;mu=2;nu=1,1", dir.path())["count"], 1);
}

#[test]
fn export_paths_and_mobiles() {
    let dir = tempfile::tempdir().unwrap();
    let m = manifest("dyck", "g=0;mu=2,1;nu=1,1,1", dir.path());
    assert_eq!(m["count"], 12);
    let pruned = m["objects"].as_array().unwrap().iter().filter(|o| o["pruned"] == true).count();
    assert_eq!(pruned, 3);

    let dir = tempfile::tempdir().unwrap();
    assert_eq!(manifest("mobile", "g=0;mu=2,1;nu=1,1,1", dir.path())["count"], 48);
}

#[test]
fn crosscheck_small_sweep_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = hurwitz(&["crosscheck", "--max-d", "4", "--max-b", "3", "--out", dir.path().to_str().unwrap()]);
    let report = json(&out);
    assert_eq!(report["pass"], true);
    assert!(report["types"].as_u64().unwrap() > 30);
    let written: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("crosscheck.json")).unwrap()).unwrap();
    assert_eq!(written["types"], report["types"]);
}

#[test]
fn poly_lab_fits_pruned_chambers() {
    let report = json(&hurwitz(&["poly", "--m", "2", "--n", "2", "--pruned", "--max-part", "8", "--max-degree", "10"]));
    assert_eq!(report["pass"], true);
    assert_eq!(report["walls"].as_array().unwrap().len(), 7);
}
