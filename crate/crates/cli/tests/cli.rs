use std::path::PathBuf;
use std::process::{Command, Output};

use brauer_triples::chartab::TableExport;
use brauer_triples::io::GroupJson;
use brauer_triples::modrep::BrauerExport;
use serde_json::Value;

fn bt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bt")).args(args).output().expect("bt runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bt-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn ibr_a5_at_two() {
    let o = bt(&["ibr", "--group", "builtin:A5", "--ell", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t: BrauerExport = serde_json::from_str(&stdout(&o)).unwrap();
    let mut degrees: Vec<i64> = t.characters.iter().map(|c| c[0].to_i64().unwrap()).collect();
    degrees.sort();
    assert_eq!(degrees, [1, 2, 2, 4]);
}

#[test]
fn fake_galois_example_succeeds() {
    let o = bt(&["fake-galois", "--group", "builtin:SL23_semi_C2", "--normal", "SL23", "--ell", "7", "--m", "5", "--recipe", "auto"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["verdict"]["success"], Value::Bool(true));
    assert!(!v[0]["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn non_coprime_m_is_a_usage_failure() {
    let o = bt(&["check-approx", "--group", "builtin:SL23_semi_C2", "--normal", "SL23", "--ell", "7", "--m", "4", "--theta", "0", "--theta2", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("(m, |N|) = 1"), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
}

#[test]
fn refutation_exits_two() {
    let o = bt(&["check-approx", "--group", "builtin:Q8", "--normal", "Z", "--ell", "3", "--m", "5", "--theta", "0", "--theta2", "1"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["results"][0]["status"], "refuted");
    let w = bt(&["check-approx", "--group", "builtin:Q8", "--normal", "Z", "--ell", "3", "--m", "5", "--theta", "1", "--theta2", "1"]);
    assert_eq!(w.status.code(), Some(0));
}

#[test]
fn reports_are_deterministic() {
    let args = ["fake-galois", "--group", "builtin:SL23_semi_C2", "--normal", "SL23", "--ell", "7", "--m", "1,5,7,11", "--recipe", "search"];
    let a = bt(&args);
    let b = bt(&[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = bt(&["decmat", "--group", "builtin:SL23", "--ell", "2", "--seed", "0"]);
    let d = bt(&["decmat", "--group", "builtin:SL23", "--ell", "2", "--seed", "0"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn group_export_round_trips() {
    let first = bt(&["export-group", "--group", "builtin:SL23_semi_C2"]);
    assert_eq!(first.status.code(), Some(0));
    let path = scratch("sl23c2.json");
    std::fs::write(&path, &first.stdout).unwrap();
    let second = bt(&["export-group", "--group", path.to_str().unwrap()]);
    assert_eq!(first.stdout, second.stdout);
    let parsed = GroupJson::parse(&stdout(&second)).unwrap();
    assert_eq!(parsed.name, "SL23_semi_C2");
    let ok = bt(&["fake-galois", "--group", path.to_str().unwrap(), "--normal", "SL23", "--ell", "7", "--m", "5"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
}

#[test]
fn table_json_round_trips() {
    let o = bt(&["chartab", "--group", "builtin:S4"]);
    let t: TableExport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(t.characters.len(), 5);
    assert_eq!(serde_json::to_string_pretty(&t).unwrap(), stdout(&o).trim_end());
}

#[test]
fn malformed_group_file_names_the_position() {
    let path = scratch("bad.json");
    std::fs::write(&path, "{\n  \"version\": \"v1\",\n  \"degree\": 3,\n  \"generators\": [[1, 2, 0]\n}\n").unwrap();
    let o = bt(&["classes", "--group", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("line 5") && err.contains("column"), "{err}");
}

#[test]
fn order_bound_is_a_resource_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_bt")).args(["classes", "--group", "builtin:S4"]).env("BT_MAX_ORDER", "10").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("group order = 24 > 10"), "{}", stderr(&o));
}

#[test]
fn bad_arguments_exit_one() {
    assert_eq!(bt(&["ibr", "--group", "builtin:A5", "--ell", "4"]).status.code(), Some(1));
    assert_eq!(bt(&["ibr", "--group", "builtin:A5"]).status.code(), Some(1));
    assert_eq!(bt(&["classes", "--group", "builtin:Nope"]).status.code(), Some(1));
    assert_eq!(bt(&["--help"]).status.code(), Some(0));
}

#[test]
fn stabilizer_reports_for_both_actions() {
    for g in ["builtin:S3_on_C2xC2", "builtin:D8_on_C3xC3"] {
        let o = bt(&["stab-cyclicity", "--group", g]);
        assert_eq!(o.status.code(), Some(0), "{g}");
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["all_nontrivial_cyclic"], Value::Bool(true));
    }
}

#[test]
fn goursat_audit_exit_codes() {
    let o = bt(&["goursat-audit", "--a", "1", "--format", "tsv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().nth(1), Some("1\t30\t0"));
    // S4 × C2 has subgroups with no complement witness; they are reported, not hidden.
    let o = bt(&["goursat-audit", "--a", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], Value::Bool(false));
    assert!(!v["reports"][0]["records"].as_array().unwrap().is_empty());
}
