use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn write_input(name: &str, v: &Value) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("subrank-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, v.to_string()).unwrap();
    path
}

fn subrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subrank"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn run_ok(args: &[&str]) -> Value {
    let out = subrank(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    json_of(&out)
}

fn k3() -> Value {
    json!({"n": 3, "edges": [[0, 1], [1, 2], [0, 2]]})
}

#[test]
fn rho_duplicate_planes() {
    let p = write_input(
        "planes.json",
        &json!({"field": "q", "ambient_dim": 3,
                "subspaces": [[[1, 0, 0], [0, 1, 0]], [[1, 1, 0], [1, -1, 0]]]}),
    );
    let v = run_ok(&["rho", "--input", p.to_str().unwrap()]);
    assert_eq!(v, json!({"value": "1", "partition": [[0, 1]]}));
    for sfm in ["exhaustive", "mnp"] {
        let w = run_ok(&[
            "rho",
            "--input",
            p.to_str().unwrap(),
            "--c",
            "1",
            "--sfm",
            sfm,
        ]);
        assert_eq!(w, v);
    }
    let half = run_ok(&["rho", "--input", p.to_str().unwrap(), "--c", "1/2"]);
    assert_eq!(half["value"], json!("3/2"));
}

#[test]
fn rho_rejects_float_c() {
    let p = write_input(
        "line.json",
        &json!({"field": "q", "ambient_dim": 2, "subspaces": [[[1, 0]]]}),
    );
    let out = subrank(&["rho", "--input", p.to_str().unwrap(), "--c", "0.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("c:"));
}

#[test]
fn rho_with_field_override() {
    let p = write_input(
        "lines.json",
        &json!({"field": "q", "ambient_dim": 2, "subspaces": [[[1, 0]], [[0, 1]], [[1, 1]]]}),
    );
    let q = run_ok(&["rho", "--input", p.to_str().unwrap()]);
    let fp = run_ok(&["rho", "--input", p.to_str().unwrap(), "--field", "fp:10007"]);
    assert_eq!(q, fp);
    assert_eq!(q["value"], json!("0"));
}

#[test]
fn rigidity_k3() {
    let p = write_input("k3.json", &k3());
    let v = run_ok(&["rigidity", "--input", p.to_str().unwrap()]);
    assert_eq!(v["rank"], json!(3));
    assert_eq!(v["rigid"], json!(true));
    assert_eq!(v["dof"], json!(0));
    assert_eq!(v["method"], json!("deterministic"));
    assert_eq!(v["required"], json!(3));
}

#[test]
fn rigidity_in_three_dimensions_is_randomized() {
    let p = write_input(
        "k4.json",
        &json!({"n": 4, "edges": [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]}),
    );
    let v = run_ok(&["rigidity", "--input", p.to_str().unwrap(), "--t", "3"]);
    assert_eq!(v["rank"], json!(6));
    assert_eq!(v["method"], json!("randomized"));
    assert_eq!(v["rigid"], json!(true));
}

#[test]
fn pit_r2_single_row() {
    let p = write_input(
        "r2.json",
        &json!({"field": "q", "ambient_dim": 2, "rows": [{"u": [1, 0], "v": [0, 1]}]}),
    );
    let v = run_ok(&["pit-r2", "--input", p.to_str().unwrap()]);
    assert_eq!(v, json!({"rank": 1, "dropped_rows": []}));
}

#[test]
fn pit_r2_reports_degenerate_rows() {
    let p = write_input(
        "r2deg.json",
        &json!({"field": "q", "ambient_dim": 3,
                "rows": [{"u": [1, 0, 0], "v": [2, 0, 0]}, {"u": [1, 0, 0], "v": [0, 1, 0]}]}),
    );
    let v = run_ok(&["pit-r2", "--input", p.to_str().unwrap()]);
    assert_eq!(v, json!({"rank": 1, "dropped_rows": [0]}));
}

#[test]
fn pit_rk_and_rand_rank_agree() {
    let inst = json!({"field": "q", "ambient_dim": 4, "k": 3, "tensors": [
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]],
        [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
        [[1, 1, 0, 0], [0, 0, 1, 1], [1, 0, 0, 1]]
    ]});
    let p = write_input("rk.json", &inst);
    let exact = run_ok(&["pit-rk", "--input", p.to_str().unwrap()]);
    let random = run_ok(&["rand-rank", "--input", p.to_str().unwrap()]);
    assert_eq!(exact["rank"], random["rank"]);
    assert_eq!(random["trials"], json!(5));
    assert_eq!(random["prime"], json!(2305843009213693951u64));
}

#[test]
fn rand_rank_on_graph_and_r2() {
    let g = write_input("k3r.json", &k3());
    assert_eq!(
        run_ok(&["rand-rank", "--input", g.to_str().unwrap()])["rank"],
        json!(3)
    );
    let r = write_input(
        "r2r.json",
        &json!({"field": "q", "ambient_dim": 3,
                "rows": [{"u": [1, 0, 0], "v": [0, 1, 0]}, {"u": [0, 0, 1], "v": [0, 1, 0]}]}),
    );
    let v = run_ok(&[
        "rand-rank",
        "--input",
        r.to_str().unwrap(),
        "--trials",
        "2",
        "--prime",
        "10007",
    ]);
    assert_eq!(v, json!({"rank": 2, "trials": 2, "prime": 10007}));
    let out = subrank(&[
        "rand-rank",
        "--input",
        r.to_str().unwrap(),
        "--prime",
        "10005",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_is_reproducible() {
    let p = write_input(
        "repro.json",
        &json!({"field": {"fp": 10007}, "ambient_dim": 4,
                "subspaces": [[[1, 0, 0, 0], [0, 1, 0, 0]], [[0, 0, 1, 0], [0, 0, 0, 1]],
                              [[1, 0, 1, 0]], [[0, 1, 0, 1], [1, 1, 1, 1]]]}),
    );
    let args = ["rho", "--input", p.to_str().unwrap(), "--c", "3/2"];
    let a = subrank(&args);
    let b = subrank(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let reparsed: Value = json_of(&a);
    assert_eq!(format!("{reparsed}\n").as_bytes(), a.stdout.as_slice());
}

#[test]
fn input_errors_exit_one_and_name_the_field() {
    let cases = [
        (
            "zero.json",
            json!({"field": "q", "ambient_dim": 2, "subspaces": [[[1, 0]], [[0, 0]]]}),
            "rho",
            "1",
        ),
        (
            "loop.json",
            json!({"n": 3, "edges": [[2, 2]]}),
            "rigidity",
            "loop",
        ),
        (
            "composite.json",
            json!({"field": {"fp": 15}, "ambient_dim": 1, "subspaces": [[[1]]]}),
            "rho",
            "15",
        ),
        (
            "scalar.json",
            json!({"field": "q", "ambient_dim": 2, "subspaces": [[[1, "x"]]]}),
            "rho",
            "subspaces[0][0][1]",
        ),
        (
            "missing.json",
            json!({"field": "q", "subspaces": []}),
            "rho",
            "ambient_dim",
        ),
        (
            "dup.json",
            json!({"n": 3, "edges": [[0, 1], [1, 0]]}),
            "rigidity",
            "edge",
        ),
    ];
    for (name, v, cmd, needle) in cases {
        let p = write_input(name, &v);
        let out = subrank(&[cmd, "--input", p.to_str().unwrap()]);
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert_eq!(out.status.code(), Some(1), "{name}: {stderr}");
        assert!(stderr.contains(needle), "{name}: {stderr}");
    }
    let out = subrank(&["rho", "--input", "/nonexistent/file.json"]);
    assert_eq!(out.status.code(), Some(1));
    let out = subrank(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn text_output() {
    let p = write_input("k3t.json", &k3());
    let out = subrank(&[
        "rigidity",
        "--input",
        p.to_str().unwrap(),
        "--output",
        "text",
    ]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("rank: 3"));
    assert!(text.contains("method: deterministic"));
}

#[test]
fn verify_single_suite() {
    let v = run_ok(&["verify", "--suite", "named-instances"]);
    assert_eq!(v["passed"], json!(true));
    assert_eq!(v["suites"][0]["name"], json!("named-instances"));
    let out = subrank(&["verify", "--suite", "nope"]);
    assert_eq!(out.status.code(), Some(1));
}
