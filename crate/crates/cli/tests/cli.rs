use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn carnot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_carnot"))
        .args(args)
        .env_remove("CARNOT_SEED")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    serde_json::from_str(text.lines().next().expect("a report line")).unwrap()
}

fn spec_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("carnot-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn validate_passes_on_presets() {
    for group in ["heisenberg", "heisenberg:2", "free_step2:3", "engel", "abelian:3"] {
        let out = carnot(&["validate", "--group", group]);
        assert_eq!(out.status.code(), Some(0), "{group}");
        let r = report(&out);
        assert_eq!(r["status"], "pass");
        assert_eq!(r["task"], "validate");
        assert!(r["group"]["hash"].as_str().unwrap().len() == 64);
        assert!(r["version"].is_string());
    }
}

#[test]
fn failed_check_exits_one() {
    let g = spec_file("bad-group.json", r#"{"step": 2, "layer_dims": [2, 1], "brackets": [[1, 2, 3, "1"], [2, 1, 3, "1"]]}"#);
    let out = carnot(&["validate", "--group", g.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["status"], "fail");
    let anti = &r["result"]["checks"][0];
    assert_eq!(anti["passed"], false);
    assert_eq!(anti["witness"]["triple"], serde_json::json!([1, 2, 3]));
}

#[test]
fn split_spec_gives_six_steps() {
    let s = spec_file("split.json", r#"{"task": "split", "preset": "heisenberg", "U": [1, 0], "V": [0, 1]}"#);
    let out = carnot(&["run", s.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let split = &r["result"]["splittings"][0];
    assert_eq!(split["N"], 6);
    assert_eq!(split["exact"], true);
    assert_eq!(split["endpoint"], serde_json::json!(["1", "1", "0"]));
    // the shorthand is resolved into the echoed parameters
    assert_eq!(r["parameters"]["pairs"], serde_json::json!([[["1", "0"], ["0", "1"]]]));
}

#[test]
fn pansu_spec_on_heisenberg_sqrt() {
    let s = spec_file("pansu.json", r#"{"task": "pansu", "field": "heis-sqrt", "point": [0, 0, 0]}"#);
    let out = carnot(&["run", s.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["group"]["spec"]["preset"], "heisenberg");
    let est = &r["result"]["estimate"];
    assert_eq!(est["verdict"], "not-differentiable");
    for v in est["values"].as_array().unwrap() {
        assert!((v.as_f64().unwrap() - 1.0).abs() < 0.1);
    }
}

#[test]
fn reports_are_byte_identical() {
    let s = spec_file("probe.json", r#"{"task": "probe", "preset": "heisenberg", "lemma": "conjugation", "samples": 200}"#);
    let a = carnot(&["--seed", "9", "run", s.to_str().unwrap()]);
    let b = carnot(&["--seed", "9", "run", s.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(report(&a)["seed"], 9);
    let c = carnot(&["--seed", "10", "run", s.to_str().unwrap()]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn seed_falls_back_to_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_carnot"))
        .args(["decompose", "split", "--u", "1,0", "--v", "0,1"])
        .env("CARNOT_SEED", "17")
        .output()
        .unwrap();
    assert_eq!(report(&out)["seed"], 17);
}

#[test]
fn parse_errors_exit_two_with_position() {
    let s = spec_file("trailing.json", "{\"task\": \"split\",\n \"U\": [1, 0],}");
    let out = carnot(&["run", s.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(stderr.contains("line 2 column"), "{stderr}");
    assert_eq!(report(&out)["status"], "error");

    let s = spec_file("unknown.json", r#"{"task": "integrate"}"#);
    assert_eq!(carnot(&["run", s.to_str().unwrap()]).status.code(), Some(2));
    let s = spec_file("extra.json", r#"{"task": "validate", "colour": 1}"#);
    assert_eq!(carnot(&["run", s.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(carnot(&["run", "/nonexistent/spec.json"]).status.code(), Some(2));
    assert_eq!(carnot(&["suite", "nope"]).status.code(), Some(2));
}

#[test]
fn wall_time_goes_to_stderr_unless_asked() {
    let out = carnot(&["validate"]);
    assert!(String::from_utf8_lossy(&out.stderr).into_owned().contains("wall time"));
    assert!(report(&out).get("wall_time_s").is_none());
    let out = carnot(&["--wall-time", "validate"]);
    assert!(report(&out)["wall_time_s"].is_f64());
}

#[test]
fn algebra_suite_passes() {
    let out = carnot(&["--seed", "1", "suite", "algebra"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let ids: Vec<&str> = r["result"]["criteria"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["AC1", "AC2", "AC5"]);
}

#[test]
fn json_flag_writes_a_file() {
    let path = spec_file("out.json", "");
    let input = spec_file("points.json", "[[0, 0, 1]]");
    let out = carnot(&["--json", path.to_str().unwrap(), "decompose", "path", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(std::fs::read_to_string(path).unwrap().lines().next().unwrap()).unwrap();
    assert_eq!(r["task"], "path");
}
