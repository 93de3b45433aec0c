use std::path::Path;
use std::process::{Command, Output};

use kernel_factor::weyl::GridSymbol;
use kernel_factor::CoeffTensor;
use serde_json::Value;

fn kf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kernel-factor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn seeded_generation_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = kf(&["--seed", "42", "--output", path(p), "generate", "random-gs", "--n", "8", "--dim", "2"]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let c = kf(&["--seed", "43", "generate", "random-gs", "--n", "8", "--dim", "2"]);
    assert_ne!(c.stdout, std::fs::read(&a).unwrap());
}

#[test]
fn random_generation_needs_a_seed() {
    assert_eq!(kf(&["generate", "random-gs"]).status.code(), Some(1));
}

#[test]
fn factorize_reports_pair_and_verification() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    kf(&["--output", path(&m), "generate", "mehler", "--tau", "0.5", "--n", "16"]);
    let v = json(&kf(&["factorize", path(&m), "--space", "Ss", "--s", "0.5"]));
    assert_eq!(v["branch"], "roumieu");
    assert_eq!(v["diagonal"], "right");
    assert_eq!(v["verification"]["positive_diagonal"], true);
    assert!(v["verification"]["reconstruction_error"].as_f64().unwrap() <= 1e-12);
    let b: CoeffTensor = serde_json::from_value(v["B"].clone()).unwrap();
    assert_eq!(b.trunc_left(), &[16]);

    let ext = json(&kf(&["factorize", path(&m), "--space", "schwartz", "--d0", "2"]));
    assert_eq!(ext["d0"], 2);
    assert_eq!(ext["tensor_order"], serde_json::json!([0]));

    let chain = json(&kf(&["factorize", path(&m), "--chain", "3"]));
    assert_eq!(chain["factors"].as_array().unwrap().len(), 3);
    assert!(chain["verification"]["reconstruction_error"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn validation_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let z = dir.path().join("z.json");
    std::fs::write(&z, CoeffTensor::zeros(vec![4], vec![4]).unwrap().to_json().unwrap()).unwrap();
    assert_eq!(kf(&["factorize", path(&z), "--space", "Sigmas", "--s", "1"]).status.code(), Some(1));
    let m = dir.path().join("m.json");
    kf(&["--output", path(&m), "generate", "mehler", "--n", "4"]);
    assert_eq!(kf(&["factorize", path(&m), "--space", "Sigmas", "--s", "0.5"]).status.code(), Some(1));
    assert_eq!(kf(&["factorize", path(&m), "--space", "schwartz", "--r", "1"]).status.code(), Some(1));
    assert_eq!(kf(&["--grid", "-8,8,15", "generate", "projector-symbol"]).status.code(), Some(1));
    assert_eq!(kf(&["decay", "/nonexistent/file.json"]).status.code(), Some(1));
    assert_eq!(kf(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(kf(&["--help"]).status.code(), Some(0));
}

#[test]
fn numerical_failures_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.json");
    kf(&["--grid", "-3,3,32", "--output", path(&p), "generate", "projector-symbol"]);
    assert_eq!(kf(&["quantize", path(&p), "--from", "0.5", "--to", "0"]).status.code(), Some(2));
    let m = dir.path().join("m.json");
    kf(&["--output", path(&m), "generate", "mehler", "--n", "3"]);
    assert_eq!(kf(&["verify", path(&m), "--check", "decay"]).status.code(), Some(2));
}

#[test]
fn quantize_to_same_parameter_keeps_values() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.json");
    kf(&["--output", path(&p), "generate", "projector-symbol"]);
    let out = kf(&["quantize", path(&p), "--from", "0.5", "--to", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let original = std::fs::read(&p).unwrap();
    assert_eq!(out.stdout, original);
    let a = GridSymbol::from_json(std::str::from_utf8(&original).unwrap()).unwrap();
    assert_eq!(a.grid().axis1.n, 256);
}

#[test]
fn symbol_commands_compose() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.json");
    let k = dir.path().join("k.json");
    kf(&["--output", path(&p), "generate", "projector-symbol"]);
    assert!(kf(&["--output", path(&k), "kernel", path(&p), "--t", "0.5"]).status.success());
    let back = kf(&["kernel", path(&k), "--t", "0.5", "--direction", "to-symbol"]);
    let a = GridSymbol::from_json(&std::fs::read_to_string(&p).unwrap()).unwrap();
    let b = GridSymbol::from_json(std::str::from_utf8(&back.stdout).unwrap()).unwrap();
    assert!(a.max_diff(&b).unwrap() <= 1e-8);
    let sq = kf(&["sharp", path(&p), path(&p)]);
    let sq = GridSymbol::from_json(std::str::from_utf8(&sq.stdout).unwrap()).unwrap();
    assert!(sq.max_diff(&a).unwrap() <= 1e-6);
    let f = json(&kf(&["factorize-symbol", path(&p)]));
    assert!(f["reconstruction_error"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn schatten_and_checks() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    kf(&["--output", path(&m), "generate", "mehler", "--tau", "0.5", "--n", "64"]);
    let v = json(&kf(&["schatten", path(&m), "--p", "2,inf"]));
    let hs = v["norms"][0]["value"].as_f64().unwrap();
    let exact = (-0.5f64).exp() / (1.0 - (-2.0f64).exp()).sqrt();
    assert!((hs - exact).abs() <= 1e-10 * exact);
    assert_eq!(v["norms"][1]["p"], "inf");

    let w = dir.path().join("w.json");
    std::fs::write(&w, r#"{"[0]": 2.0, "3": 0.5}"#).unwrap();
    for check in ["hs", "embed", "decay"] {
        let r = json(&kf(&["verify", path(&m), "--check", check, "--w1", path(&w)]));
        assert_eq!(r["pass"], true, "{check}");
        assert_eq!(r["inputs_digest"].as_str().unwrap().len(), 64);
    }
    let r = json(&kf(&["verify", path(&m), "--check", "hoelder", "--with", path(&m), "--p1", "1", "--p2", "inf"]));
    assert_eq!(r["pass"], true);
    assert_eq!(kf(&["verify", path(&m), "--check", "hoelder"]).status.code(), Some(1));
}

#[test]
fn classify_and_decay() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    kf(&["--output", path(&m), "generate", "mehler", "--tau", "0.5", "--n", "32"]);
    let c = json(&kf(&["classify", path(&m), "--s", "0.5"]));
    assert_eq!(c["class"], "Roumieu");
    let d = json(&kf(&["decay", path(&m), "--s", "0.5"]));
    assert!((d["r_hat"].as_f64().unwrap() - 0.5).abs() <= 1e-6);
    let one = dir.path().join("one.json");
    kf(&["--output", path(&one), "generate", "rank-one", "--n", "2"]);
    let d = json(&kf(&["decay", path(&one)]));
    assert_eq!(d["r_hat"], "inf");
}
