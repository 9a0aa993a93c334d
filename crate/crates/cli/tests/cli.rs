use std::path::PathBuf;
use std::process::{Command, Output};

use qcob::report::{DTableReport, IndependenceReport, PropositionReport, RhoSurgeryReport, VerdictReport};

fn qcob(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcob")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qcob-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn surgery_exit_codes() {
    let o = qcob(&["check-surgery", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("infinite order, ρ(t₀)=1"), "{}", stdout(&o));
    let o = qcob(&["check-surgery", "--n", "9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("inconclusive"));
    let o = qcob(&["check-surgery", "--n", "-3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(qcob(&["check-surgery", "--n", "6"]).status.code(), Some(1));
}

#[test]
fn proposition_example() {
    let o = qcob(&["verify-proposition", "--p", "3", "--n", "1", "--m", "2", "--form", "sum4-unit1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: PropositionReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.holds && !r.vacuous);
    assert_eq!((r.copies, r.metabolizers.len()), (4, 8));
    assert!(r.metabolizers.iter().all(|c| c.forced_zero == [1] && c.targets == [1]));
    // --jobs changes nothing in the output
    let parallel =
        qcob(&["verify-proposition", "--p", "3", "--n", "1", "--m", "2", "--form", "sum4-unit1", "--format", "json", "--jobs", "3"]);
    assert_eq!(parallel.stdout, o.stdout);
    let o = qcob(&["verify-proposition", "--p", "3", "--n", "1", "--m", "1", "--form", "sum4-unit1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn seeded_random_forms_are_reproducible() {
    let args = ["verify-proposition", "--p", "7", "--n", "1", "--m", "1", "--form", "random", "--seed", "4", "--format", "json"];
    let a = qcob(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, qcob(&args).stdout);
    let r: PropositionReport = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(r.units.len(), 2);
}

#[test]
fn json_reports_round_trip() {
    let o = qcob(&["rho-surgery", "--n", "7", "--format", "json"]);
    let text = stdout(&o);
    let r: RhoSurgeryReport = serde_json::from_str(&text).unwrap();
    assert_eq!(r.rho0, "3/2");
    assert_eq!(serde_json::to_string_pretty(&serde_json::to_value(&r).unwrap()).unwrap() + "\n", text);
    let o = qcob(&["check-surgery", "--n", "5", "--format", "json"]);
    let v: VerdictReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v.conclusion.as_str(), v.rho0.as_deref()), ("infinite_order", Some("1")));
}

#[test]
fn rejected_before_computation() {
    assert_eq!(qcob(&["check-surgery", "--n", "5", "--bogus"]).status.code(), Some(1));
    assert_eq!(qcob(&["no-such-verb"]).status.code(), Some(1));
    assert_eq!(qcob(&["check-surgery"]).status.code(), Some(1));
    assert_eq!(qcob(&["--help"]).status.code(), Some(0));
}

#[test]
fn parse_errors_name_field_and_line() {
    let f = fixture("bad.json", "{\"manifolds\": [\n  {\"surgery\": 3},\n  {\"surgery\": \"x\"}\n]}");
    let o = qcob(&["check-independence", "--file", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("manifolds[1].surgery") && err.contains("line 3"), "{err}");
}

#[test]
fn capacity_errors_are_verbatim() {
    let f = fixture("big.json", r#"{"diagonal": {"p": 3, "n": 9, "units": [1, 1, 1, 1]}}"#);
    let o = qcob(&["enumerate-metabolizers", "--file", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("exceeds the enumeration limit 100000000"), "{err}");
}

#[test]
fn independence_files() {
    let f = fixture("family.json", r#"{"manifolds": [{"h1": [[3, 1, 1]]}, {"surgery": 7}, {"name": "Z", "h1": [[11, 1, 1]]}]}"#);
    let o = qcob(&["check-independence", "--file", f.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: IndependenceReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.independent);
    assert_eq!(r.assignment.iter().map(|a| a.prime).collect::<Vec<_>>(), [3, 7, 11]);

    let o = qcob(&["check-independence", "--file", f.to_str().unwrap(), "--p", "3", "--n", "1", "--m", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: IndependenceReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.main.unwrap().conclusion, "nonzero");

    let f = fixture("square.json", r#"{"manifolds": [{"h1": [[3, 1, 1]]}, {"h1": [[3, 1, 1], [7, 1, 1]]}]}"#);
    let o = qcob(&["check-independence", "--file", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("FAILED"));
}

#[test]
fn knot_files() {
    let f = fixture(
        "knots.json",
        r#"{"knots": [{"name": "a", "determinant": 3, "cyclic": true}, {"name": "b", "goeritz": [[7]]},
                      {"name": "c", "determinant": 11, "cyclic": true}]}"#,
    );
    let o = qcob(&["check-knots", "--file", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let f = fixture("det5.json", r#"{"knots": [{"name": "figure eight", "determinant": 5, "cyclic": true}]}"#);
    let o = qcob(&["check-knots", "--file", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = qcob(&["check-knots", "--file", f.to_str().unwrap(), "--p", "5", "--n", "1", "--m", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("[FAILED] prime_3_mod_4"), "{}", stdout(&o));
}

#[test]
fn d_table_files() {
    let f = fixture("sphere.json", r#"{"0": "0"}"#);
    assert_eq!(qcob(&["validate-dtable", "--file", f.to_str().unwrap()]).status.code(), Some(0));
    let f = fixture("shifted.json", r#"{"0": "1"}"#);
    let o = qcob(&["validate-dtable", "--file", f.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(2));
    let r: Vec<DTableReport> = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!r[0].valid);
    // -lambda(1,1) = 1/3, refined to 2/3 in Q/2Z; d(t_0) = rho(t_0) = 1/2 for n = 3
    let f = fixture("l3.json", r#"{"0": "1/2", "1": "-1/6", "2": "-1/6"}"#);
    let o = qcob(&["validate-dtable", "--file", f.to_str().unwrap(), "--n", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let f = fixture("l3bad.json", r#"{"0": "1/2", "1": "1/6", "2": "1/6"}"#);
    let o = qcob(&["validate-dtable", "--file", f.to_str().unwrap(), "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("mod_two"));
    let f = fixture(
        "family.json",
        r#"{"manifolds": [{"surgery": 5}, {"name": "L3", "surgery": 3, "d_table": {"0": "1/2", "1": "-1/6", "2": "-1/6"}}]}"#,
    );
    let o = qcob(&["validate-dtable", "--file", f.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: Vec<DTableReport> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r[0].skipped, ["no d-table"]);
    assert_eq!(r[1].skipped, ["additivity: not a connected sum"]);
    let f = fixture("nodata.json", r#"{"surgery": 3}"#);
    assert_eq!(qcob(&["validate-dtable", "--file", f.to_str().unwrap()]).status.code(), Some(1));
}
