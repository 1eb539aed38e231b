use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn semiheap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semiheap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn spin_env(dir: &Path) -> PathBuf {
    let path = dir.join("spin.json");
    fs::write(
        &path,
        r#"{"dim": 2,
            "kets": {"up": [[1,0],[0,0]], "down": [[0,0],[1,0]]},
            "ops": {"X": [[[0,0],[1,0]],[[1,0],[0,0]]],
                    "Z": [[[1,0],[0,0]],[[0,0],[-1,0]]],
                    "O": [[[0,0],[0,0]],[[0,0],[0,0]]],
                    "H": [[[0.7071067811865476,0],[0.7071067811865476,0]],[[0.7071067811865476,0],[-0.7071067811865476,0]]],
                    "B": [[[1,0],[1,0]],[[0,0],[1,0]]]}}"#,
    )
    .unwrap();
    path
}

#[test]
fn check_exit_codes() {
    let out = semiheap(&["check", "--law", "para-assoc-vector", "--dim", "4", "--trials", "1000", "--seed", "42"]);
    assert_eq!(code(&out), 0);
    let report = stdout_json(&out);
    assert_eq!(report["pass"], true);
    assert_eq!(report["rng"], "chacha8");
    assert_eq!(report["tolerance"]["atol"], 1e-12);

    let out = semiheap(&["check", "--law", "malcev-right", "--dim", "3", "--trials", "10", "--seed", "7"]);
    assert_eq!(code(&out), 1);
    assert!(stdout_json(&out)["counterexample"].is_object());

    let out = semiheap(&["check", "--law", "no-such-law"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("unknown-law") && err.contains("heap-unitary"), "{err}");
}

#[test]
fn check_writes_json_file_even_on_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = semiheap(&["check", "--law", "malcev-left", "--trials", "5", "--json", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let report: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["pass"], false);
}

#[test]
fn counterexample_replays_through_eval() {
    let dir = tempfile::tempdir().unwrap();
    let out = semiheap(&["check", "--law", "malcev-right", "--dim", "3", "--trials", "10", "--seed", "7"]);
    let report = stdout_json(&out);
    let env_path = dir.path().join("cex.json");
    fs::write(&env_path, report["counterexample"].to_string()).unwrap();
    let out = semiheap(&["eval", "--env", env_path.to_str().unwrap(), "--expr", "[a,b,b] - a"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let norm: f64 = v["value"]
        .as_array()
        .unwrap()
        .iter()
        .map(|z| z[0].as_f64().unwrap().powi(2) + z[1].as_f64().unwrap().powi(2))
        .sum::<f64>()
        .sqrt();
    assert!(norm > 1e-6);
}

#[test]
fn determinism_modulo_timing() {
    let run = || {
        let mut v = stdout_json(&semiheap(&["check", "--law", "heap-unitary", "--dim", "4", "--trials", "200", "--seed", "3"]));
        v.as_object_mut().unwrap().remove("wall_time_ms");
        v.to_string()
    };
    assert_eq!(run(), run());
}

#[test]
fn group_laws() {
    let out = semiheap(&["check", "--law", "projective-rep", "--trials", "20"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["cocycle"]["cocycle_residual"], 0.0);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trivial.json");
    let one = "[1,0]";
    let omega = format!("[{}]", vec![format!("[{}]", vec![one; 4].join(",")); 4].join(","));
    let ops = r#"[[[[1,0],[0,0]],[[0,0],[1,0]]],
                  [[[0,0],[1,0]],[[1,0],[0,0]]],
                  [[[1,0],[0,0]],[[0,0],[-1,0]]],
                  [[[0,0],[-1,0]],[[1,0],[0,0]]]]"#;
    fs::write(
        &path,
        format!(r#"{{"order":4,"identity":0,"cayley":[[0,1,2,3],[1,0,3,2],[2,3,0,1],[3,2,1,0]],"omega":{omega},"ops":{ops}}}"#),
    )
    .unwrap();
    let out = semiheap(&["check", "--law", "projective-rep", "--trials", "5", "--group", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["first_failure"], serde_json::json!([2, 1]));
    let out = semiheap(&["check", "--law", "cocycle", "--group", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
}

#[test]
fn eval_examples() {
    let dir = tempfile::tempdir().unwrap();
    let env = spin_env(dir.path());
    let env = env.to_str().unwrap();

    let out = semiheap(&["eval", "--env", env, "--expr", "[up,down,down]"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out), serde_json::json!({"kind": "ket", "value": [[1.0, 0.0], [0.0, 0.0]]}));

    let out = semiheap(&["eval", "--env", env, "--expr", "<up|up>"]);
    assert_eq!(stdout_json(&out), serde_json::json!({"kind": "scalar", "value": [1.0, 0.0]}));

    let out = semiheap(&["eval", "--env", env, "--expr", "[up,down]"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("parse-error") && err.contains("1:9"), "{err}");

    let out = semiheap(&["eval", "--env", env, "--expr", "up*down"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("type-error"));

    let out = semiheap(&["eval", "--env", "/nonexistent/env.json", "--expr", "up"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_examples() {
    let vars = "a:ket[4],b:ket[4],c:ket[4],d:ket[4],e:ket[4]";
    let out = semiheap(&["verify", "--lhs", "[[a,b,c],d,e]", "--rhs", "[a,b,[c,d,e]]", "--vars", vars, "--trials", "500", "--seed", "1"]);
    assert_eq!(code(&out), 0);

    let out = semiheap(&["verify", "--lhs", "[a,b,b]", "--rhs", "a", "--vars", "a:ket[3],b:ket[3]", "--trials", "50"]);
    assert_eq!(code(&out), 1);

    let out = semiheap(&["verify", "--lhs", "a", "--rhs", "A", "--vars", "a:ket[2],A:op[2]"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("kind-mismatch"));

    let out = semiheap(&["verify", "--lhs", "a", "--rhs", "a", "--vars", "a:ket"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn corpus_modes() {
    assert_eq!(code(&semiheap(&["corpus"])), 0);
    let shipped = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/identities.jsonl");
    assert_eq!(code(&semiheap(&["corpus", "--file", shipped])), 0);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wrong.jsonl");
    fs::write(
        &path,
        r#"{"name":"wrong","lhs":"[a,b,b]","rhs":"a","vars":[{"name":"a","kind":"ket","dim":3},{"name":"b","kind":"ket","dim":3}],"expect":"pass"}"#,
    )
    .unwrap();
    assert_eq!(code(&semiheap(&["corpus", "--file", path.to_str().unwrap()])), 1);
}

#[test]
fn decompose_examples() {
    let dir = tempfile::tempdir().unwrap();
    let env = spin_env(dir.path());
    let env = env.to_str().unwrap();

    let out = semiheap(&["decompose", "--env", env, "--op", "X", "--ket", "up"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["residual"], 0.0);
    let terms = v["decomposition"]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!((terms[0]["l"].clone(), terms[0]["m"].clone(), terms[0]["n"].clone()), (2.into(), 1.into(), 1.into()));

    let out = semiheap(&["decompose", "--env", env, "--op", "O", "--ket", "up"]);
    assert_eq!(code(&out), 0);
    assert!(stdout_json(&out)["decomposition"]["terms"].as_array().unwrap().is_empty());

    let out = semiheap(&["decompose", "--env", env, "--op", "Z", "--ket", "down", "--basis", "H"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["decomposition"]["basis"], "H");

    let out = semiheap(&["decompose", "--env", env, "--op", "X", "--ket", "up", "--basis", "B"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid basis"));

    let basis = dir.path().join("basis.json");
    fs::write(&basis, "[[[1,0],[1,0]],[[0,0],[1,0]]]").unwrap();
    let out = semiheap(&["decompose", "--env", env, "--op", "X", "--ket", "up", "--basis-file", basis.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid basis"));

    let out = semiheap(&["decompose", "--env", env, "--op", "nope", "--ket", "up"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn version_flag() {
    let out = semiheap(&["--version"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("semiheap "));
}
