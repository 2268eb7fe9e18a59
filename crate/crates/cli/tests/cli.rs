//! End-to-end runs of the `mocktheta` binary.

use std::process::{Command, Output};

use mocktheta_core::lerch::mordell_h;
use mocktheta_core::C64;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mocktheta")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).expect("stderr is JSON")
}

fn value(v: &Value) -> C64 {
    C64::new(v["value"][0].as_f64().unwrap(), v["value"][1].as_f64().unwrap())
}

#[test]
fn eval_matches_library() {
    let o = run(&["eval", "mordell_h", "--z", "0.1+0.2i", "--tau", "0.3+1.1i"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    let lib = mordell_h(C64::new(0.1, 0.2), C64::new(0.3, 1.1)).unwrap();
    assert!((value(&v) - lib).norm() < 1e-14);
    assert!(v["certified_tol"].as_f64().unwrap() > 0.0);
    assert!(v["flags"].is_array());
}

#[test]
fn eval_accepts_nome() {
    let t = run(&["eval", "dedekind_eta", "--tau", "i"]);
    let q = run(&["eval", "dedekind_eta", "--q", &format!("{}", (-2.0 * std::f64::consts::PI).exp())]);
    assert_eq!(code(&t), 0);
    assert_eq!(code(&q), 0);
    assert!((value(&stdout_json(&t)) - value(&stdout_json(&q))).norm() < 1e-12);
}

#[test]
fn lower_half_plane_is_an_input_error() {
    let o = run(&["eval", "mordell_h", "--z", "0", "--tau", "-i"]);
    assert_eq!(code(&o), 2);
    let e = stderr_json(&o);
    assert_eq!(e["error"]["kind"], "not_in_upper_half_plane");
    assert!(e["error"]["message"].as_str().unwrap().contains("tau not in upper half plane"));
}

#[test]
fn unknown_ids_exit_with_three() {
    assert_eq!(code(&run(&["eval", "no_such_function", "--tau", "i"])), 3);
    assert_eq!(code(&run(&["qcheck", "no_such_identity"])), 3);
    assert_eq!(code(&run(&["list", "no_such_category"])), 3);
}

#[test]
fn qcheck_passes_known_identities() {
    for id in ["in5", "example2_1"] {
        let o = run(&["qcheck", id, "--order", "40"]);
        assert_eq!(code(&o), 0, "{id}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(stdout_json(&o)["comparison"]["equal"], true);
    }
}

#[test]
fn verify_is_byte_identical_for_a_fixed_seed() {
    let dir = std::env::temp_dir().join(format!("mocktheta-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for p in [&a, &b] {
        let o = run(&["verify", "--suite", "all", "--seed", "42", "--out", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let ta = std::fs::read(&a).unwrap();
    assert_eq!(ta, std::fs::read(&b).unwrap());
    let r: Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(r["summary"]["failed"], 0);
    assert!(r["entries"].as_array().unwrap().len() > 50);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_rejects_bad_options() {
    assert_eq!(code(&run(&["verify", "--suite", "ch9"])), 3);
    assert_eq!(code(&run(&["verify", "--suite", "qseries", "--tau-grid", "fine"])), 2);
    assert_eq!(code(&run(&["verify", "--suite", "qseries", "--tol", "-1"])), 2);
}

#[test]
fn zero_tolerance_makes_numeric_checks_fail() {
    let o = run(&["verify", "--suite", "ch1", "--tol", "0"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL"));
}

#[test]
fn list_names_every_suite() {
    let o = run(&["list", "suites"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
    assert_eq!(names, ["qseries", "ch1", "ch2", "ch3", "ch4"]);
    let all = stdout_json(&run(&["list"]));
    assert!(all["evaluators"].as_array().unwrap().iter().any(|e| e["id"] == "F7"));
}

#[test]
fn data_file_override_is_honoured() {
    let dir = std::env::temp_dir().join(format!("mocktheta-data-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let copy = dir.join("families.json");
    std::fs::write(&copy, mocktheta_core::families::EMBEDDED_DATA).unwrap();
    let args = ["eval", "F7", "--component", "1", "--tau", "i"];
    let base = run(&args);
    let over = Command::new(env!("CARGO_BIN_EXE_mocktheta"))
        .args(args)
        .env("MOCKTHETA_DATA", &copy)
        .output()
        .unwrap();
    assert_eq!(code(&over), 0);
    assert_eq!(value(&stdout_json(&base)), value(&stdout_json(&over)));
    let missing = Command::new(env!("CARGO_BIN_EXE_mocktheta"))
        .args(args)
        .env("MOCKTHETA_DATA", dir.join("absent.json"))
        .output()
        .unwrap();
    assert_eq!(code(&missing), 2);
    assert_eq!(stderr_json(&missing)["error"]["kind"], "data_error");
    std::fs::remove_dir_all(&dir).ok();
}
