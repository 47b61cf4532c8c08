use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_contlogic")).args(args).output().unwrap()
}

fn record(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(v["schema"], 1);
    v
}

fn tmp(name: &str, body: &str) -> String {
    let dir = std::env::temp_dir().join(format!("contlogic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn lambda_lower_on_the_integers() {
    let cfg = tmp("z.cfg", "generators = u\nbackend = abelian\n");
    let v = record(&["norm", "--group", &cfg, "--element", "u + u^-1", "--lambda-lower", "5"]);
    let l = &v["lambda_lower"];
    assert_eq!(l["moment"], "252");
    assert_eq!(l["root"], 10);
    // 252^(1/10) lies in [1.7383, 1.7384]
    let lower: f64 = l["approx"].as_f64().unwrap();
    assert!((1.7383..1.7384).contains(&lower));
}

#[test]
fn code_f_appends_a_power_of_two() {
    let enc = record(&["code", "encode", "--formula", "d(c1, c2)"]);
    let code = enc["code"].as_str().unwrap();
    let f = record(&["code", "f", "--code", code, "--n", "2"]);
    assert_eq!(f["formula"], "d(c1, c2) -. half(half(1))");
    let back = record(&["code", "decode", "--code", f["code"].as_str().unwrap()]);
    assert_eq!(back["formula"], f["formula"]);
}

#[test]
fn classify_labels() {
    assert_eq!(record(&["classify", "--prefix", "forall2", "--relation", "le"])["label"], "Π_1^d");
    assert_eq!(record(&["classify", "--prefix", "forall2", "--relation", "lt"])["label"], "Σ_2^d");
    let out = run(&["classify", "--prefix", "forall4", "--relation", "le", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(String::from_utf8_lossy(&out.stderr).lines().last().unwrap().as_bytes()).unwrap();
    assert_eq!(err["error"], "WrongPrefixClass");
}

#[test]
fn errors_are_machine_readable() {
    let out = run(&["code", "decode", "--code", "12345"]);
    assert_eq!(out.status.code(), Some(2));
    let last = String::from_utf8(out.stderr).unwrap();
    let err: Value = serde_json::from_str(last.lines().last().unwrap()).unwrap();
    assert_eq!(err["error"], "NotACode");
    let out = run(&["parse", "--formula", "d(x, y"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn forcing_examples() {
    assert_eq!(record(&["force", "check", "--psi", "d(x, x)", "--r", "0"])["answer"], "YES");
    let no = record(&["force", "check", "--psi", "d(x, c1)", "--r", "1/2"]);
    assert_eq!(no["answer"], "NO");
    assert_eq!(no["witness"]["value"], "0.75");
    let c = record(&["force", "condition", "--condition", "d(c1,c2) < 1/4; d(c2,c3) < 1/4; 1 -. d(c1,c3) < 1/4"]);
    assert_eq!(c["is_condition"], false);
    let fp = record(&["force", "fp", "--condition", "d(c1,c2) < 1/8", "--formula", "d(c1, c2)"]);
    assert_eq!(fp["upper"], "0.125");
}

#[test]
fn games_replay_byte_exactly() {
    let path = tmp("game.jsonl", "");
    let a = run(&["force", "game", "--strategy-forall", "random:3", "--rounds", "6", "--out", &path]);
    assert!(a.status.success());
    let b = run(&["force", "game", "--strategy-forall", "random:3", "--rounds", "6"]);
    assert_eq!(a.stdout, b.stdout);
    let r = record(&["force", "replay", "--transcript", &path]);
    assert_eq!(r["byte_exact"], true);
    assert_eq!(r["metric_axioms"], true);
    assert_eq!(r["rounds"], 6);
}

#[test]
fn eval_on_presentations() {
    let v = record(&["eval", "--presentation", "C2w", "--sentence", "inf x. 1 -. d(x, x)"]);
    assert_eq!(v["certified_upper"], "1");
    let cfg = tmp("z2.cfg", "generators = u\nbackend = abelian\n");
    let v = record(&["eval", "--presentation", "L", "--group", &cfg, "--sentence", "sup x. tr_re(x)", "--budget-n", "8"]);
    assert_eq!(v["certified_lower"], "1");
    let file = tmp("sentence.txt", "d(c1, c1)\n");
    let v = record(&["eval", "--presentation", "R", "--sentence", &file, "--bind", "c1=3"]);
    assert_eq!(v["certified_upper"], "0");
}
