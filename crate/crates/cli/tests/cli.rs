use std::process::{Command, Output};

use serde_json::Value;

fn l2burau(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_l2burau")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = l2burau(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).expect("valid JSON")
}

fn num(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn burau_generator_under_winding() {
    let o = l2burau(&["burau", "-b", "1", "-n", "2", "-f", "phi"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "[(-1)t^1 [z]]");
}

#[test]
fn burau_empty_braid_is_identity() {
    let o = l2burau(&["burau", "-b", "", "-n", "3", "-f", "id"]);
    assert_eq!(stdout(&o), "[1 [e] | 0]\n[0 | 1 [e]]\n");
}

#[test]
fn burau_counterexample_matrix_json() {
    let v = json(&["burau", "-b", "-1 2", "-f", "id", "--json"]);
    assert_eq!(v["strands"], 3);
    assert_eq!(v["size"], 2);
    assert_eq!(v["rows"][0][0], "(-1)t^-1 [g1^-1]");
    assert_eq!(v["rows"][0][1], "-1 [g3 g2^-1 g1^-1]");
    assert_eq!(v["rows"][1][0], "(1)t^-1 [g1^-1]");
    assert_eq!(v["rows"][1][1], "(-1)t^1 [g3 g2^-1] + 1 [g3 g2^-1 g1^-1]");
}

#[test]
fn fq_abelianization_value() {
    let v = json(&["fq", "-b", "-1 2", "-f", "ab", "-t", "1", "--json"]);
    assert!((num(&v["value"]) - 1.381_356_444_518_497).abs() < 1e-3);
    for key in ["value", "error_bound", "method", "diagnostics"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["method"], "quad");
}

#[test]
fn fq_several_t_values() {
    let v = json(&["fq", "-b", "1 -2 1 -2", "-f", "phi", "-t", "0.5,1,2", "--json"]);
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 3);
    assert!((num(&arr[1]["value"]) - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-9);
    assert_eq!(arr[2]["normalization"], 8.0);
}

#[test]
fn fq_csv() {
    let o = l2burau(&["fq", "-b", "1 1 1", "-f", "phi", "-t", "1,2", "--csv"]);
    let text = stdout(&o);
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][0], "1");
    assert!((rows[0][1].parse::<f64>().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn markov_report_schema() {
    let v = json(&["markov", "-b", "-1", "-f", "ab", "-t", "1", "--moves", "stab +1", "--json"]);
    assert_eq!(v["verdict"], "violation");
    assert_eq!(v["family"], "ab");
    let stages = v["stages"].as_array().unwrap();
    assert_eq!(stages.len(), 2);
    assert!(stages[0]["move"].is_null());
    assert_eq!(stages[1]["move"], "stab +1");
    assert!((num(&stages[1]["value"]) - 1.381_356_444_518_497).abs() < 1e-3);
    assert!(num(&v["max_deviation"]) > 0.3);
}

#[test]
fn markov_winding_invariant() {
    let v = json(&["markov", "-b", "1 1 1", "-f", "phi", "--moves", "conj 1; stab +1", "--json"]);
    assert_eq!(v["verdict"], "invariant");
    for s in v["stages"].as_array().unwrap() {
        assert!((num(&s["value"]) - 1.0).abs() < 1e-6);
    }
}

#[test]
fn alexander_trefoil() {
    let o = l2burau(&["alexander", "-b", "1 1 1"]);
    assert_eq!(stdout(&o), "s^2 - s + 1\n");
    let v = json(&["alexander", "-b", "1 -2 1 -2", "--json"]);
    assert_eq!(v["polynomial"], "s^2 - 3 s + 1");
    assert!((num(&v["mahler"]) - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-9);
}

#[test]
fn counterexamples_pass() {
    let o = l2burau(&["counterexample", "identity"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("PASS"));
    let v = json(&["counterexample", "abelianization", "--json"]);
    assert_eq!(v["pass"], true);
    assert!((num(&v["values"][0]["value"]) - 1.0).abs() < 1e-9);
}

#[test]
fn exit_codes() {
    assert_eq!(l2burau(&["fq", "-b", "1 x"]).status.code(), Some(2));
    assert_eq!(l2burau(&["fq", "-b", "1", "-t", "-1"]).status.code(), Some(2));
    assert_eq!(l2burau(&["fq", "-b", "1", "-f", "nope"]).status.code(), Some(2));
    assert_eq!(l2burau(&["markov", "-b", "1", "--moves", "twist 1"]).status.code(), Some(2));
    assert_eq!(l2burau(&["burau", "-b", "3", "-n", "2"]).status.code(), Some(2));
    assert_eq!(l2burau(&["alexander", "-b", "1 1"]).status.code(), Some(3));
    assert_eq!(l2burau(&["fq", "-b", "1", "-f", "id", "--method", "quad"]).status.code(), Some(3));
    assert_eq!(l2burau(&["fq", "-b", "1", "-f", "custom:/nonexistent/family"]).status.code(), Some(1));
}

#[test]
fn custom_family_file_and_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let fam = dir.path().join("family.txt");
    std::fs::write(&fam, "# one row per strand\n1 0\n0 1\n").unwrap();
    let out = dir.path().join("out.json");
    let tag = format!("custom:{}", fam.display());
    let o = l2burau(&["fq", "-b", "-1 2", "-f", &tag, "--json", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(num(&v["value"]) > 0.0);
}

#[test]
fn thread_cap_keeps_results() {
    let run = |threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_l2burau"))
            .args(["fq", "-b", "-1 2", "-f", "ab", "-t", "0.5,1,2", "--json"])
            .env("L2BURAU_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        stdout(&o)
    };
    assert_eq!(run("1"), run("4"));
    let o = Command::new(env!("CARGO_BIN_EXE_l2burau")).args(["fq", "-b", "1"]).env("L2BURAU_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}
