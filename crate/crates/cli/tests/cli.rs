use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use g2fib_core::fixtures::model4;
use g2fib_core::format::to_json;
use g2fib_core::{Component, FiberGraph, Geom, IntersectionPoint};

fn g2fib(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2fib")).args(args).env_remove("G2FIB_OUT_DIR").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, g: &FiberGraph) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, to_json(g)).unwrap();
    p.to_str().unwrap().to_string()
}

/// Two rational `−3` curves meeting in three points.
fn theta() -> FiberGraph {
    FiberGraph::new(
        2,
        vec![Component::new("A", 1, -3, 1, Geom::SmoothRational), Component::new("B", 1, -3, 1, Geom::SmoothRational)],
        (1..=3).map(|i| IntersectionPoint::node(format!("p{i}"), "A", "B")).collect(),
    )
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "model4.fiber.json", &model4());
    assert_eq!(code(&g2fib(&["validate", &good])), 0);
    let mut broken = model4();
    broken.components[6].mult = 5;
    let bad = write(&dir, "broken.fiber.json", &broken);
    let o = g2fib(&["validate", &bad]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("violation"));
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{ not json").unwrap();
    assert_eq!(code(&g2fib(&["validate", junk.to_str().unwrap()])), 2);
    assert_eq!(code(&g2fib(&["validate", "/nonexistent/file.json"])), 2);
}

#[test]
fn classify_germ() {
    let o = g2fib(&["classify-germ", "x^2 - y^5"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("generation 4, terminal"));
    let o = g2fib(&["--format", "json", "classify-germ", "y^2 * (x^2 - y^3)"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["class"]["generation"], 3);
    assert_eq!(v["class"]["terminal"], false);
    assert_eq!(code(&g2fib(&["classify-germ", "x * x"])), 2);
}

#[test]
fn usage_errors() {
    assert_eq!(code(&g2fib(&["frobnicate"])), 64);
    assert_eq!(code(&g2fib(&[])), 64);
    assert_eq!(code(&g2fib(&["--help"])), 0);
}

#[test]
fn indices_table_and_uniqueness() {
    let dir = TempDir::new().unwrap();
    let m4 = write(&dir, "model4.fiber.json", &model4());
    let o = g2fib(&["indices", &m4, "--no-mults"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("p4\tS4, S7\t-4/3, -3/4\t(3, 4)"));
    assert!(stdout(&o).contains("multiplicities: [1, 2, 2, 3, 2, 1, 4]"));
    let th = write(&dir, "theta.fiber.json", &theta());
    assert_eq!(code(&g2fib(&["indices", &th, "--no-mults"])), 3);
    assert_eq!(code(&g2fib(&["indices", &th])), 0);
}

#[test]
fn resolve_writes_files() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = g2fib(&["--format", "json", "resolve", "y^4 / x^10", "--dot", "--out", out]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["resolution"]["blowups"], 4);
    assert!(dir.path().join("pencil-0.fiber.json").exists());
    assert!(dir.path().join("pencil-0.dot").exists());

    let o = Command::new(env!("CARGO_BIN_EXE_g2fib"))
        .args(["resolve", "--global", "--fiber", "inf"])
        .env("G2FIB_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("note: self-intersection 3"));
    let inf = dir.path().join("global-inf.fiber.json");
    assert!(inf.exists());
    assert_eq!(code(&g2fib(&["validate", inf.to_str().unwrap()])), 0);
    assert_eq!(code(&g2fib(&["resolve", "y^4 / "])), 2);
}

#[test]
fn holonomy_and_isotriviality() {
    let dir = TempDir::new().unwrap();
    let m4 = write(&dir, "model4.fiber.json", &model4());
    let o = g2fib(&["--format", "json", "holonomy", &m4]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["monodromy_order"], 12);
    assert_eq!(v["transmission_consistent"], true);
    assert_eq!(code(&g2fib(&["isotrivial-check", &m4])), 0);

    let out = dir.path().to_str().unwrap();
    g2fib(&["resolve", "--global", "--fiber", "inf", "--out", out]);
    let inf = dir.path().join("global-inf.fiber.json");
    let o = g2fib(&["isotrivial-check", inf.to_str().unwrap()]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).contains("[7]"));
}

#[test]
fn export_dot() {
    let dir = TempDir::new().unwrap();
    let m4 = write(&dir, "model4.fiber.json", &model4());
    let o = g2fib(&["export-dot", &m4]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("graph fiber {"));
    let target = dir.path().join("m4.dot");
    assert_eq!(code(&g2fib(&["export-dot", &m4, "--out", target.to_str().unwrap()])), 0);
    assert_eq!(std::fs::read_to_string(&target).unwrap(), stdout(&o));
}

#[test]
fn catalog_manifest() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = g2fib(&["catalog", "--case", "iii", "--depth", "16", "--chain-bound", "3", "--out", out]);
    assert_eq!(code(&o), 0);
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    let entries = manifest["entries"].as_array().unwrap();
    assert!(!entries.is_empty());
    for e in entries {
        assert_eq!(e["case"], "iii");
        assert_eq!(e["outcome"], "valid");
        assert!(Path::new(out).join(e["file"].as_str().unwrap()).exists());
    }
    assert_eq!(code(&g2fib(&["catalog", "--case", "vi", "--out", out])), 2);
}
