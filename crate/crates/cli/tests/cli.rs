//! End-to-end runs of the `jcreduce` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use jcreduce::family::{self, FamilyInstance};
use jcreduce::io;
use serde_json::Value;

const CUBIC: &str = r#"{"version":"jcreduce-system/1","nvars":1,"degree":3,"components":[
  {"nvars":1,"terms":[{"exp":[1],"re":"1/1","im":"0/1"},{"exp":[3],"re":"-1/1","im":"0/1"}]}]}"#;

const SHEAR: &str = r#"{"version":"jcreduce-system/1","nvars":2,"degree":3,"components":[
  {"nvars":2,"terms":[{"exp":[1,0],"re":"1/1","im":"0/1"},{"exp":[0,3],"re":"1/1","im":"0/1"}]},
  {"nvars":2,"terms":[{"exp":[0,1],"re":"1/1","im":"0/1"}]}]}"#;

const IDENTITY: &str = r#"{"version":"jcreduce-system/1","nvars":2,"degree":1,"components":[
  {"nvars":2,"terms":[{"exp":[1,0],"re":"1/1","im":"0/1"}]},
  {"nvars":2,"terms":[{"exp":[0,1],"re":"1/1","im":"0/1"}]}]}"#;

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jcreduce"))
        .args(args)
        .current_dir(dir)
        .env_remove("JCREDUCE_ORDER")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn workspace() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("cubic.json"), CUBIC).unwrap();
    fs::write(dir.path().join("shear.json"), SHEAR).unwrap();
    fs::write(dir.path().join("id.json"), IDENTITY).unwrap();
    dir
}

#[test]
fn identity_has_unit_determinant() {
    let dir = workspace();
    let out = run(&["check-jlin", "id.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["verdict"], "member");
    assert_eq!(v["result"]["constant"]["re"], "1/1");
    assert_eq!(v["result"]["constant"]["im"], "0/1");
}

#[test]
fn non_constant_determinant_exits_one_with_witness() {
    let dir = workspace();
    let out = run(&["check-jlin", "cubic.json", "--format", "pretty"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdict: non_member"));
    assert!(text.contains("offending_term: -3*z1^2"));
}

#[test]
fn reduced_file_keeps_the_class_of_its_source() {
    let dir = workspace();
    for variant in ["algebraic", "qft"] {
        let red = format!("shear-{variant}.json");
        let out = run(&["reduce", "shear.json", "--variant", variant, "--out", &red], dir.path());
        assert_eq!(out.status.code(), Some(0), "{variant}");
        let sf = io::parse_system_file(&fs::read_to_string(dir.path().join(&red)).unwrap()).unwrap();
        let prov = sf.provenance.expect("provenance");
        assert_eq!(prov.source_dim, Some(2));
        assert_eq!(prov.variant.as_deref(), Some(variant));
        assert_eq!(sf.nvars, 2 + 4);

        let lin = run(&["check-partial", &red, "--lin"], dir.path());
        assert_eq!(lin.status.code(), Some(0), "{variant}");
        assert_eq!(json(&lin)["result"]["verdict"], "member");
        let inv = run(&["check-partial", &red], dir.path());
        assert_eq!(inv.status.code(), Some(0), "{variant}");
        assert_eq!(json(&inv)["result"]["verdict"], "member");
    }
    let red = run(&["reduce", "cubic.json", "--variant", "algebraic", "--out", "cubic-red.json"], dir.path());
    assert_eq!(red.status.code(), Some(0));
    let lin = run(&["check-partial", "cubic-red.json", "--lin"], dir.path());
    assert_eq!(lin.status.code(), Some(1));
    assert_eq!(json(&lin)["result"]["verdict"], "non_member");
}

#[test]
fn eliminate_reports_the_block_identity() {
    let dir = workspace();
    run(&["reduce", "shear.json", "--variant", "algebraic", "--out", "r.json"], dir.path());
    let out = run(&["eliminate", "r.json", "--n1", "2"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    assert_eq!(v["r_inverse_closed_form"], true);
}

#[test]
fn formal_inverse_matches_the_tree_sum() {
    let dir = workspace();
    let out = run(&["invert", "cubic.json", "--order", "5", "--oracle", "trees"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["tree_oracle_grades_equal"].as_array().unwrap().len(), 6);
    assert!(v["tree_oracle_grades_equal"].as_array().unwrap().iter().all(|b| b == true));
    assert_eq!(v["certified_inverse"]["verdict"], "non_member");
}

#[test]
fn order_falls_back_to_the_environment() {
    let dir = workspace();
    let out = Command::new(env!("CARGO_BIN_EXE_jcreduce"))
        .args(["partition", "cubic.json"])
        .current_dir(dir.path())
        .env("JCREDUCE_ORDER", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["order"], 3);
    assert_eq!(v["ln_z"].as_array().unwrap().len(), 4);
    let default = json(&run(&["partition", "cubic.json"], dir.path()));
    assert_eq!(default["order"], 5);
}

#[test]
fn emitted_family_instances_parse_back() {
    let dir = workspace();
    let out = run(&["example-s4", "--d", "3", "--seed", "11", "--count", "4", "--emit", "fam"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["seed"], 11);
    assert_eq!(v["command"]["seed"], 11);
    let corpus = family::corpus(3, 11, 4);
    for (id, expected) in corpus.iter().enumerate() {
        let text = fs::read_to_string(dir.path().join(format!("fam/instance-{id:04}.json"))).unwrap();
        let sf = io::parse_system_file(&text).unwrap();
        let prov = sf.provenance.clone().unwrap();
        assert_eq!(prov.seed, Some(11));
        assert_eq!(prov.instance, Some(id));
        let back = FamilyInstance::from_system(&sf.to_system().unwrap()).unwrap();
        assert_eq!(&back, expected);
    }
}

#[test]
fn reports_are_deterministic() {
    let dir = workspace();
    let args = ["example-s4", "--d", "2", "--count", "5"];
    let a = run(&args, dir.path());
    let b = run(&args, dir.path());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let p = run(&["invert", "shear.json", "--format", "pretty"], dir.path());
    let q = run(&["invert", "shear.json", "--format", "pretty"], dir.path());
    assert_eq!(p.stdout, q.stdout);
}

#[test]
fn out_flag_writes_the_report() {
    let dir = workspace();
    let out = run(&["check-jlin", "shear.json", "--out", "report.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn malformed_input_exits_two_and_names_the_problem() {
    let dir = workspace();
    fs::write(dir.path().join("broken.json"), "{").unwrap();
    let out = run(&["check-jlin", "broken.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("broken.json"));
    assert!(err.contains("schema error"));

    let bad_coeff = SHEAR.replacen("\"re\":\"1/1\"", "\"re\":\"1/0\"", 1);
    fs::write(dir.path().join("coeff.json"), bad_coeff).unwrap();
    let out = run(&["check-jlin", "coeff.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("coeff.json"));
    assert!(err.contains("component 1, term 1, field re"));

    let out = run(&["check-jlin", "missing.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("missing.json"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = workspace();
    assert_eq!(run(&["nonsense"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["reduce", "shear.json", "--variant", "other"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["check-partial", "shear.json"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["verify-all", "--only", "99"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["example-s4", "--d", "1"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn verify_all_subset() {
    let dir = workspace();
    let out = run(&["verify-all", "--only", "2,9", "--seed", "5"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["seed"], 5);
    let lines: Vec<&str> = v["summary"].as_array().unwrap().iter().map(|l| l.as_str().unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert!(lines.iter().all(|l| l.starts_with("PASS")));

    let red = run(&["verify-all", "--only", "7b"], dir.path());
    assert_eq!(red.status.code(), Some(1));
    assert!(json(&red)["summary"][0].as_str().unwrap().starts_with("FAIL"));
}
