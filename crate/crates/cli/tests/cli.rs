use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gauge_core::doc::{parse_document, Document, LoadedForm};

const THEOREMS: [&str; 7] = ["prop1", "prop2", "prop3", "prop4", "curvature", "corollary", "eq1-failure"];

fn gauge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gauge"))
        .args(args)
        .env_remove("GAUGE_CEILING")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("gauge-cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn shipped(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../models")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn generate(name: &str, args: &[&str]) -> String {
    let path = scratch(name);
    let p = path.to_str().unwrap();
    let mut all = vec!["generate"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["-o", p]);
    let o = gauge(&all);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    p.to_string()
}

#[test]
fn generated_model_validates() {
    let p = generate("k2-z2.json", &["--model", "trivial", "--base", "K2", "--group", "Z2"]);
    let o = gauge(&["validate", &p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("valid"));
}

#[test]
fn two_connections_on_an_edge_with_z2() {
    let p = generate("k2-z2-enum.json", &["--model", "trivial", "--base", "K2", "--group", "Z2"]);
    let o = gauge(&["enumerate", &p, "--what", "connections"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().last(), Some("2 connections"));
    assert_eq!(out.lines().filter(|l| l.starts_with('#')).count(), 2);
}

#[test]
fn half_the_triangle_connections_are_flat() {
    let p = generate("k3-z2-flat.json", &["--model", "trivial", "--base", "K3", "--group", "Z2"]);
    let o = gauge(&["enumerate", &p, "--what", "flat"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().last(), Some("4 of 8 connections are flat"));
    assert!(out.contains("a-b=[(a,0),(b,0)] a-c=[(a,0),(c,0)] b-c=[(b,0),(c,0)]"));
}

#[test]
fn bent_triangle_has_curvature_one() {
    let o = gauge(&["curvature", &shipped("trivial-k3-z2.json"), "--connection", "bent"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.split_whitespace().eq(["a,b,c", "[(a,1),(a,0)]", "1"])));
    assert!(out.lines().any(|l| l.split_whitespace().eq(["a,b,a", "[(a,0),(a,0)]", "0"])));
    let flat = stdout(&gauge(&["curvature", &shipped("trivial-k3-z2.json"), "--connection", "flat"]));
    assert!(flat.lines().skip(1).all(|l| l.ends_with(" 0")));
}

#[test]
fn curvature_file_reloads_as_a_gauge_form() {
    let model = shipped("trivial-k2-s3.json");
    let out = scratch("k2-s3-curvature.json");
    let o = gauge(&["curvature", &model, "--connection", "bent", "--format", "file", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let Document::Model(m) = parse_document(&std::fs::read_to_string(&model).unwrap()).unwrap() else {
        panic!("model expected")
    };
    let m = m.to_model().unwrap();
    let Document::Form(f) = parse_document(&std::fs::read_to_string(&out).unwrap()).unwrap() else {
        panic!("form expected")
    };
    match f.load(&m.bn).unwrap() {
        LoadedForm::Gauge(r) => assert_eq!(r.degree(), 2),
        LoadedForm::Group(..) => panic!("curvature should be arrow-valued"),
    }
    let v = gauge(&["validate", out.to_str().unwrap(), "--model", &model]);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
}

#[test]
fn non_free_action_is_rejected_with_a_witness() {
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/not-free.json");
    let o = gauge(&["validate", fixture.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("freeness [(a,0), 1]"));
    let json = gauge(&["validate", fixture.to_str().unwrap(), "--report"]);
    assert_eq!(json.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["valid"], false);
    assert_eq!(v["violations"][0]["axiom"], "freeness");
    assert_eq!(v["violations"][0]["witness"][0], "(a,0)");
}

#[test]
fn non_commutative_group_yields_a_counterexample() {
    let o = gauge(&["verify", &shipped("trivial-k2-s3.json"), "--theorem", "eq1-failure"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("shifted by"));
    let o = gauge(&["verify", &shipped("trivial-k3-z2.json"), "--theorem", "eq1-failure"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("no representative changes its value"));
}

#[test]
fn malformed_json_exits_65() {
    let p = scratch("broken.json");
    std::fs::write(&p, "{\"kind\": \"model\",\n").unwrap();
    let o = gauge(&["validate", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(65));
    assert!(stderr(&o).contains("line 2"));
    let o = gauge(&["validate", "/nonexistent/model.json"]);
    assert_eq!(o.status.code(), Some(65));
}

#[test]
fn unknown_names_exit_65() {
    let text = std::fs::read_to_string(shipped("trivial-k2-z2.json")).unwrap();
    let p = scratch("unknown-name.json");
    std::fs::write(&p, text.replacen("\"(b,1)\": \"b\"", "\"(b,1)\": \"q\"", 1)).unwrap();
    let o = gauge(&["validate", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(65), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_64() {
    let m = shipped("trivial-k2-z2.json");
    assert_eq!(gauge(&["verify", &m, "--theorem", "prop9"]).status.code(), Some(64));
    assert_eq!(gauge(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(gauge(&["generate", "--model", "trivial", "--base", "Q3", "--group", "Z2"]).status.code(), Some(64));
    assert_eq!(
        gauge(&["generate", "--model", "trivial", "--base", "K2", "--group", "Z2", "--twist", "flat"]).status.code(),
        Some(64)
    );
    assert_eq!(gauge(&["--help"]).status.code(), Some(0));
}

#[test]
fn ceiling_exits_2() {
    let m = shipped("trivial-k3-z2.json");
    let o = gauge(&["enumerate", &m, "--what", "connections", "--ceiling", "7"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains('8'));
    let o = Command::new(env!("CARGO_BIN_EXE_gauge"))
        .args(["enumerate", &m, "--what", "flat"])
        .env("GAUGE_CEILING", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(gauge(&["enumerate", &m, "--what", "connections", "--ceiling", "8"]).status.code(), Some(0));
}

#[test]
fn every_theorem_holds_on_every_shipped_model() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../models");
    let mut models: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    models.sort();
    assert!(models.len() >= 5);
    for m in &models {
        let m = m.to_str().unwrap();
        assert_eq!(gauge(&["validate", m]).status.code(), Some(0), "{m}");
        for t in THEOREMS {
            let o = gauge(&["verify", m, "--theorem", t]);
            assert_eq!(o.status.code(), Some(0), "{m} {t}: {}", stdout(&o));
        }
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    let m = shipped("trivial-k3-z4.json");
    for args in [
        vec!["verify", m.as_str(), "--theorem", "prop2", "--report"],
        vec!["curvature", m.as_str(), "--connection", "bent", "--format", "file"],
        vec!["enumerate", m.as_str(), "--what", "flat"],
    ] {
        assert_eq!(gauge(&args).stdout, gauge(&args).stdout, "{args:?}");
    }
    let a = gauge(&["generate", "--model", "twisted", "--base", "C4", "--group", "S3", "--connection", "x:a-b=(12)"]);
    let b = gauge(&["generate", "--model", "twisted", "--base", "C4", "--group", "S3", "--connection", "x:a-b=(12)"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn shipped_models_match_the_generator() {
    let text = std::fs::read_to_string(shipped("trivial-k3-z2.json")).unwrap();
    let o = gauge(&[
        "generate", "--model", "trivial", "--base", "K3", "--group", "Z2", "--connection", "flat", "--connection", "bent:c-a=1",
    ]);
    assert_eq!(stdout(&o), text);
}

#[test]
fn unliftable_twist_is_written_but_flagged() {
    // a twist of 1 on one edge of a triangle leaves no simplex over a,b,c
    let o = gauge(&["generate", "--model", "twisted", "--base", "K3", "--group", "Z3", "--twist", "a-b=1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with('{'));
    assert!(stderr(&o).contains("simplex lifting [a, b, c, (a,0)]"));
    let ok = gauge(&["generate", "--model", "twisted", "--base", "K3", "--group", "Z3", "--twist", "a-b=0|1"]);
    assert_eq!(ok.status.code(), Some(0));
}
