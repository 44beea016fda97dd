use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_irrstokes"))
        .args(args)
        .output()
        .expect("spawn");
    let stdout = String::from_utf8_lossy(&out.stdout).to_string();
    let stderr = String::from_utf8_lossy(&out.stderr).to_string();
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), json, stderr)
}

#[test]
fn solve_ramified_cubic() {
    let (code, j, _) = run(&["solve", "--family", "ramified", "-n", "3", "-a", "0,0,0"]);
    assert_eq!(code, 0);
    assert_eq!(j["schema_version"], "1");
    assert_eq!(j["outputs"]["x01"], "3");
    assert_eq!(j["outputs"]["x21"], "-3");
    assert_eq!(j["outputs"]["residual"], 0.0);
    assert!(j["timing"].is_null());
}

#[test]
fn nonzero_exponent_sum_is_usage_error() {
    let (code, j, err) = run(&["solve", "--family", "ramified", "-n", "3", "-a", "1,1,1"]);
    assert_eq!(code, 2);
    assert!(err.contains("sum of a must be 0"));
    assert_eq!(j["exit_code"], 2);
}

#[test]
fn bad_arguments_exit_two() {
    let (code, j, _) = run(&["bogus"]);
    assert_eq!(code, 2);
    assert_eq!(j["exit_code"], 2);
    assert_eq!(run(&["solve", "-n", "3"]).0, 2);
    assert_eq!(run(&["newton", "--op", "delta^^"]).0, 2);
    assert_eq!(run(&["qde", "--name", "nope"]).0, 2);
}

#[test]
fn newton_reports_katz() {
    let (code, j, _) = run(&["newton", "--op", "delta^3 - z"]);
    assert_eq!(code, 0);
    assert_eq!(j["outputs"]["katz"], "1/3");
    let (code, j, _) = run(&["newton", "--op", "delta^2 - t*z", "--bind", "t=2"]);
    assert_eq!(code, 0);
    assert_eq!(j["outputs"]["katz"], "1/2");
}

#[test]
fn formal_and_directions() {
    let (code, j, _) = run(&["formal", "--family", "ramified", "-n", "4", "-a", "0,0,0,0"]);
    assert_eq!(code, 0);
    assert_eq!(j["outputs"]["katz"], "1/4");
    assert_eq!(j["outputs"]["dim"], 4);
    let (code, j, _) = run(&[
        "directions", "--family", "ramified", "-n", "3", "-a", "0,0,0", "--window", "0,1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(j["outputs"]["directions"].as_array().unwrap().len(), 2);
}

#[test]
fn solve_pdq_cross_checks() {
    let (code, j, _) = run(&[
        "solve", "--family", "pdq", "-p", "1", "-q", "3", "--mu", "1/5", "--nu", "1/3,1/2,3/7",
    ]);
    assert_eq!(code, 0);
    assert!(j["residuals"]["cross_check"].as_f64().unwrap() < 1e-8);
    assert_eq!(j["outputs"]["x10"], "1");
}

#[test]
fn monodromy_with_timing_and_out_file() {
    let dir = std::env::temp_dir().join(format!("irrstokes-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("m.json");
    let p = path.to_str().unwrap();
    let (code, _, _) = run(&[
        "monodromy", "--family", "ramified", "-n", "2", "-a", "0,0", "--timing", "--out", p,
    ]);
    assert_eq!(code, 0);
    let j: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(j["timing"]["elapsed_ms"].as_f64().is_some());
    let cp = j["outputs"]["charpoly"].as_array().unwrap();
    assert_eq!(cp.len(), 3);
    assert!((cp[2]["re"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn qde_catalog_and_check() {
    let (code, j, _) = run(&["qde", "--name", "V22"]);
    assert_eq!(code, 0);
    assert_eq!(j["outputs"]["katz"], "1");
    let (code, j, _) = run(&["qde", "--name", "P^{n-1}", "-n", "3", "--check"]);
    assert_eq!(code, 0);
    assert!(j["outputs"]["dubrovin"]["verdict"].is_string());
}

#[test]
fn piii_solve_has_small_residual() {
    let (code, j, _) = run(&["piii-d7", "solve", "--alpha", "2", "--c1", "1", "--c2", "3"]);
    assert_eq!(code, 0);
    assert!(j["residuals"]["relation"].as_f64().unwrap() < 1e-12);
    let (code, _, _) = run(&[
        "piii-d7", "torus", "--alpha", "2", "--c1", "1", "--c2", "3", "--torus", "2,3,5",
    ]);
    assert_eq!(code, 0);
}

#[test]
fn reports_have_the_documented_top_level_keys() {
    let schema: Value = serde_json::from_str(
        &std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/report-schema.json"))
            .unwrap(),
    )
    .unwrap();
    let keys = |def: &str| -> Vec<String> {
        let mut k: Vec<String> = schema["$defs"][def]["required"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_str().unwrap().to_string())
            .collect();
        k.sort();
        k
    };
    let top = |j: &Value| -> Vec<String> {
        let mut k: Vec<String> = j.as_object().unwrap().keys().cloned().collect();
        k.sort();
        k
    };
    let (_, ok, _) = run(&["formal", "--family", "ramified", "-n", "3", "-a", "0,0,0"]);
    assert_eq!(top(&ok), keys("report"));
    let (_, err, _) = run(&["solve", "--family", "ramified", "-n", "3", "-a", "1,1,1"]);
    assert_eq!(top(&err), keys("error"));
}

#[test]
fn exact_runs_are_deterministic() {
    let args = ["solve", "--family", "ramified", "-n", "4", "-a", "1/4,-1/4,1/3,-1/3"];
    let once = Command::new(env!("CARGO_BIN_EXE_irrstokes")).args(args).output().unwrap();
    let twice = Command::new(env!("CARGO_BIN_EXE_irrstokes")).args(args).output().unwrap();
    assert_eq!(once.stdout, twice.stdout);
}

#[test]
fn unramified_directions_accept_a_constant_part() {
    let (code, j, _) = run(&[
        "directions", "--family", "unramified", "--lambda", "0,1", "--t", "0,1/2;-1,0",
    ]);
    assert_eq!(code, 0);
    assert_eq!(j["outputs"]["directions"].as_array().unwrap().len(), 2);
    let (code, _, _) = run(&[
        "monodromy", "--family", "unramified", "--lambda", "0,1", "--t", "0,1/2;-1,0", "--tol", "1e-10",
    ]);
    assert_eq!(code, 0);
}
