use std::process::{Command, Output};

use serde_json::Value;

fn gkgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gkgraph"))
        .args(args)
        .env_remove("GKGRAPH_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = gkgraph(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn column(v: &Value, name: &str) -> Vec<Value> {
    let i = v["columns"].as_array().unwrap().iter().position(|c| c == name).unwrap();
    v["rows"].as_array().unwrap().iter().map(|r| r[i].clone()).collect()
}

#[test]
fn betti_of_w0gk_1_1() {
    let v = json(&["betti", "--complex", "w0gk", "-g", "1", "-n", "1"]);
    assert_eq!(column(&v, "dim"), vec![Value::from(1), Value::from(1)]);
    assert!(column(&v, "betti").iter().all(|b| b == 0));
    assert_eq!(v["summary"]["certified"], true);
    assert_eq!(v["summary"]["euler_from_betti"], 0);
}

#[test]
fn d2_check_passes() {
    let out = gkgraph(&["check", "--d2", "-g", "2", "-n", "1", "--complex", "w0gk"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("status: OK"));
}

#[test]
fn compare_w0gk_with_hgc() {
    let out = gkgraph(&["compare", "--left", "w0gk", "--right", "hgc", "-g", "2", "-n", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("EQUAL"));
    let out = gkgraph(&["compare", "--left", "labeled-antiinvariants", "--right", "hairy", "-g", "1", "-n", "3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn exit_codes() {
    assert_eq!(gkgraph(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(gkgraph(&["betti", "-g", "1", "-n", "1", "--format", "xml"]).status.code(), Some(1));
    let unstable = gkgraph(&["betti", "-g", "1", "-n", "0"]);
    assert_eq!(unstable.status.code(), Some(2));
    assert!(unstable.stdout.is_empty());
    assert_eq!(gkgraph(&["total", "-g", "2", "--max-degree", "3", "--threads", "0"]).status.code(), Some(2));
    assert_eq!(
        gkgraph(&["betti", "--complex", "decorated", "-g", "1", "-n", "1", "--decoration-file", "/nonexistent.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(gkgraph(&["--version"]).status.code(), Some(0));
}

#[test]
fn broken_decoration_fails_the_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let mut f: Value = serde_json::from_str(include_str!("../data/synthetic_decoration.json")).unwrap();
    // turn one leg transposition into the identity
    f["blocks"][1]["transpositions"][0] = serde_json::json!([["1", "0"], ["0", "1"]]);
    std::fs::write(&path, f.to_string()).unwrap();
    let p = path.to_str().unwrap();
    let out = gkgraph(&["check", "--decoration", "--decoration-file", p, "-g", "2", "-n", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
    let out = gkgraph(&["betti", "--complex", "decorated", "--decoration-file", p, "-g", "1", "-n", "2"]);
    assert_eq!(out.status.code(), Some(2));

    let shipped = concat!(env!("CARGO_MANIFEST_DIR"), "/data/synthetic_decoration.json");
    let out = gkgraph(&["check", "--decoration", "--decoration-file", shipped, "-g", "2", "-n", "2"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn decorated_weight_zero_matches_w0gk() {
    let a = json(&["betti", "--complex", "w0gk", "-g", "1", "-n", "3"]);
    let b = json(&["betti", "--complex", "decorated", "--decoration-file", "trivial", "-g", "1", "-n", "3"]);
    assert_eq!(a["rows"], b["rows"]);
}

#[test]
fn reports_do_not_depend_on_threads() {
    for args in [
        vec!["enumerate", "-g", "2", "-n", "1", "--mode", "hairy"],
        vec!["betti", "--complex", "hgc", "-g", "1", "-n", "4"],
        vec!["total", "-g", "2", "--max-degree", "6"],
        vec!["export", "--complex", "w0gk", "-g", "1", "-n", "3"],
    ] {
        let mut one = args.clone();
        one.extend(["--threads", "1", "--format", "json"]);
        let mut many = args.clone();
        many.extend(["--threads", "8", "--format", "json"]);
        assert_eq!(gkgraph(&one).stdout, gkgraph(&many).stdout, "{args:?}");
    }
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_gkgraph"))
            .args(["enumerate", "-g", "1", "-n", "3"])
            .env("GKGRAPH_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert!(first.status.success());
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    assert_eq!(run().stdout, first.stdout);
}

#[test]
fn export_writes_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let out = gkgraph(&["export", "-g", "0", "-n", "5", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v.is_object());
}

#[test]
fn csv_mirrors_table() {
    let out = gkgraph(&["euler", "-g", "0", "-n", "4", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "degree,dim,truncated\n0,1,false\n1,3,false\n");
}
