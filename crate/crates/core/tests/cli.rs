mod common;

use std::process::Command;

use common::*;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("vkh").chain(args.iter().copied());
    let code = vkh::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn compute_trefoil_text() {
    let (code, out, _) = run(&["compute", "--pd", KNOT21]);
    assert_eq!(code, 0);
    assert!(out.contains("crossings: 2  n+: 0  n-: 2"), "{out}");
    assert!(out.contains("poincare: q^-6*t^-2 + q^-2*t^-1 + q^-3 + q^-1"), "{out}");
    assert!(out.contains("torsion(2): q^-4*t^-1"), "{out}");
    assert!(out.contains("  t=-1 q=-4: Z/2"), "{out}");
}

#[test]
fn compute_json_schema_and_stability() {
    let args = ["compute", "--pd", KNOT21, "--format", "json"];
    let (code, a, _) = run(&args);
    assert_eq!(code, 0);
    let (_, b, _) = run(&args);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["mode", "ring", "betti", "torsion", "poincare", "euler"]);
    assert_eq!(v["torsion"][0]["factors"][0], "2");
    assert_eq!(v["betti"].as_array().unwrap().len(), 4);
    let threaded = run(&["compute", "--pd", KNOT21, "--format", "json", "--threads", "3"]).1;
    assert_eq!(threaded, a);
}

#[test]
fn verify_figure_eight() {
    let (code, out, _) = run(&["verify", "--gauss", KNOT41_GAUSS]);
    assert_eq!(code, 0);
    assert!(out.trim_end().ends_with("d2=0: OK, faces: OK"), "{out}");
}

#[test]
fn malformed_and_invalid_requests_exit_one() {
    let (code, _, err) = run(&["compute", "--pd", "CD[X[1,1]]"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error:"), "{err}");
    assert_eq!(run(&["compute", "--tqft", "bn1", "--ring", "Z", "--pd", KNOT21]).0, 1);
    assert_eq!(run(&["compute", "--gauss", "O1+U2+"]).0, 1);
    assert_eq!(run(&["compute"]).0, 1);
    assert_eq!(run(&["torsion", "--ring", "Q", "--pd", KNOT21]).0, 1);
    assert_eq!(run(&["compute", "--pd", KNOT53, "--max-crossings", "2"]).0, 1);
}

#[test]
fn jones_and_torsion() {
    let (_, out, _) = run(&["jones", "--pd", KNOT21]);
    assert!(out.contains("jones: q^-5 + -q^-3 + q^-2"), "{out}");
    let (code, out, _) = run(&["torsion", "--pd", KNOT21]);
    assert_eq!(code, 0);
    assert!(out.contains("2-torsion: q^-4*t^-1"), "{out}");
}

#[test]
fn lee_and_signs() {
    let (code, out, _) = run(&["lee", "--pd", RASEXAMPLE]);
    assert_eq!(code, 0);
    assert!(out.contains("word 011 homdeg 0"), "{out}");
    assert!(out.contains("degeneration: OK"), "{out}");
    let (_, out, _) = run(&["signs", "--pd", KNOT21]);
    assert_eq!(out.lines().count(), 4);
    assert!(out.lines().any(|l| l.starts_with("*1 theta +1")), "{out}");
}

#[test]
fn batch_file_gives_json_lines() {
    let dir = std::env::temp_dir().join(format!("vkh-batch-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("codes.txt");
    std::fs::write(&path, format!("{KNOT21}\n\n{KNOT41_GAUSS}\nbogus\n")).unwrap();
    let (code, out, _) = run(&["compute", "--file", path.to_str().unwrap()]);
    let lines: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["input"], KNOT21);
    assert!(lines[1]["poincare"].is_string());
    assert!(lines[2]["error"].is_string());
    assert_eq!(code, 1);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn binary_entry_point() {
    let out = Command::new(env!("CARGO_BIN_EXE_vkh"))
        .args(["compute", "--pd", KNOT21, "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), run(&["compute", "--pd", KNOT21, "--format", "json"]).1);
    let bad = Command::new(env!("CARGO_BIN_EXE_vkh")).args(["compute", "--pd", "CD[X[1,1]]"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let help = Command::new(env!("CARGO_BIN_EXE_vkh")).arg("--help").output().unwrap();
    assert!(help.status.success());
}
