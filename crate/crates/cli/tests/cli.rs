use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pptgeo"))
        .args(args)
        .env_remove("PPTGEO_SEED")
        .output()
        .expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.ends_with('\n'), "missing trailing newline");
    serde_json::from_str(&text).unwrap()
}

fn code(args: &[&str]) -> Option<i32> {
    run(args).status.code()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pptgeo-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn state_json(m: usize, n: usize, entry: impl Fn(usize, usize) -> f64) -> String {
    let d = m * n;
    let entries: Vec<Value> = (0..d * d).map(|k| serde_json::json!([entry(k / d, k % d), 0.0])).collect();
    serde_json::json!({"m": m, "n": n, "matrix": {"rows": d, "cols": d, "entries": entries}}).to_string()
}

fn construct(family: &str, b: &str, theta: &str) -> String {
    let out = run(&["state", "construct", "--family", family, "--b", b, "--theta", theta]);
    assert_eq!(out.status.code(), Some(0));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn construct_has_p_theta_on_the_diagonal() {
    let v: Value = serde_json::from_str(&construct("rho", "2", "pi/6")).unwrap();
    let re = v["matrix"]["entries"][0][0].as_f64().unwrap();
    assert!((re - 3f64.sqrt()).abs() <= 1e-12, "{v}");
}

#[test]
fn construct_is_byte_identical_across_runs() {
    assert_eq!(construct("sigma", "0.7", "5*pi/12"), construct("sigma", "0.7", "5*pi/12"));
}

#[test]
fn classify_boundary_family_state() {
    let path = temp_file("rho_2_pi.json", &construct("rho", "2", "pi"));
    let v = ok_json(&["state", "classify", "--in", path.to_str().unwrap()]);
    assert_eq!(v["ppt"], true);
    assert_eq!(v["type"], serde_json::json!([4, 4]));
    assert_eq!(v["arc"], "BOUNDARY");
}

#[test]
fn classify_maximally_mixed_state_is_interior() {
    let state = state_json(3, 3, |i, j| if i == j { 1.0 / 9.0 } else { 0.0 });
    let path = temp_file("identity.json", &state);
    let v = ok_json(&["state", "classify", "--in", path.to_str().unwrap()]);
    assert_eq!(v["interior_T"], true);
    assert_eq!(v["interior_S_sufficient"], true);
    assert_eq!(v["type"], serde_json::json!([9, 9]));
}

#[test]
fn extremality_of_the_extreme_family_point() {
    let v = ok_json(&["extremality", "--family", "rho", "--b", "2", "--theta", "pi/6"]);
    assert_eq!(v["dim_ker_D"], 25);
    assert_eq!(v["dim_ker_E"], 25);
    assert_eq!(v["dim_intersection"], 1);
    assert_eq!(v["is_extreme"], true);
}

#[test]
fn extremality_of_a_separable_point() {
    let v = ok_json(&["extremality", "--family", "rho", "--b", "1", "--theta", "pi"]);
    assert_eq!(v["is_extreme"], false);
}

#[test]
fn extremality_rejects_non_ppt_input() {
    // |00⟩⟨00| + |11⟩⟨11| + |00⟩⟨11| + h.c. on 2⊗2 is entangled, not PPT
    let state = state_json(2, 2, |i, j| if i % 3 == 0 && j % 3 == 0 { 1.0 } else { 0.0 });
    let path = temp_file("bell.json", &state);
    assert_eq!(code(&["extremality", "--in", path.to_str().unwrap()]), Some(3));
}

#[test]
fn verify_appendix_reports_combination_residual() {
    let v = ok_json(&["extremality", "--family", "rho", "--b", "2", "--theta", "pi/6", "--verify-appendix"]);
    assert_eq!(v["extremality"]["is_extreme"], true);
    let x = v["appendix"]["combination"]["x_residual"].as_f64().unwrap();
    assert!(x <= 1e-10, "{v}");
    assert_eq!(v["appendix"]["y_rank"], 25);
}

#[test]
fn combine_across_arcs_lands_in_the_interior() {
    let spec = r#"[{"family":"rho","b":2,"theta":"pi/6","weight":0.5},
                   {"family":"rho","b":2,"theta":"5*pi/6","weight":0.5}]"#;
    let v = ok_json(&["combine", "--spec", spec]);
    assert_eq!(v["classification"]["interior_T"], true);
    assert_eq!(v["classification"]["type"], serde_json::json!([9, 9]));
}

#[test]
fn combine_antipodal_pair_is_diagonal() {
    let spec = r#"[{"family":"rho","b":1,"theta":"pi/6","weight":0.5},
                   {"family":"rho","b":1,"theta":"7*pi/6","weight":0.5}]"#;
    let v = ok_json(&["combine", "--spec", spec]);
    assert_eq!(v["classification"]["interior_S_sufficient"], true);
}

#[test]
fn combine_single_state_echoes_classification() {
    let spec = r#"[{"family":"rho","b":2,"theta":"pi/6","weight":1}]"#;
    let v = ok_json(&["combine", "--spec", spec]);
    assert_eq!(v["classification"]["type"], serde_json::json!([5, 5]));
    assert_eq!(v["classification"]["interior_T"], false);
    assert_eq!(v["classification"]["arc"], "ZERO");
}

#[test]
fn combine_rejects_bad_weights() {
    let spec = r#"[{"family":"rho","b":2,"theta":"pi/6","weight":-1}]"#;
    assert_eq!(code(&["combine", "--spec", spec]), Some(2));
}

#[test]
fn trace_decompositions_are_exact() {
    let v = ok_json(&["map", "trace-decomp", "--m", "3"]);
    assert_eq!(v["choi_is_identity"], true);
    let v = ok_json(&["map", "trace-decomp", "--m", "2", "--mu", "3"]);
    assert_eq!(v["choi_is_identity"], true);
}

#[test]
fn antipodal_sum_is_diagonal() {
    let v = ok_json(&["map", "antipodal-sum", "--theta", "pi/6", "--t", "1", "--s", "1"]);
    assert_eq!(v["diagonal_positive"], true);
    assert_eq!(v["interior_P_sufficient"], true);
}

#[test]
fn pair_prints_a_finite_value() {
    let state = temp_file("pair_state.json", &construct("rho", "2", "pi"));
    let out = run(&["map", "phi-theta", "--theta", "pi", "--t", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let map = temp_file("pair_map.json", &String::from_utf8(out.stdout).unwrap());
    let v = ok_json(&["map", "pair", "--state", state.to_str().unwrap(), "--map", map.to_str().unwrap()]);
    assert!(v["pairing"].as_f64().unwrap().is_finite());
}

#[test]
fn boundary_witness_is_seed_deterministic() {
    let v = |i: usize, j: usize| if i == j && i < 2 { 1.0 } else { 0.0 };
    let entries: Vec<Value> = (0..9).map(|k| serde_json::json!([v(k / 3, k % 3), 0.0])).collect();
    let spec = serde_json::json!({"Vs": [{"rows": 3, "cols": 3, "entries": entries}], "Ws": []}).to_string();
    let path = temp_file("spec.json", &spec);
    let args = ["map", "boundary-witness", "--spec", path.to_str().unwrap(), "--restarts", "20"];
    let a = run(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_pptgeo")).args(args).env("PPTGEO_SEED", "0").output().unwrap();
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["found"], true);
    let c = Command::new(env!("CARGO_BIN_EXE_pptgeo")).args(args).env("PPTGEO_SEED", "9").output().unwrap();
    let w: Value = serde_json::from_slice(&c.stdout).unwrap();
    assert_eq!(w["seed"], 9);
}

#[test]
fn krawtchouk_commands() {
    let v = ok_json(&["krawtchouk", "solve", "--m", "3", "--n", "3"]);
    let pairs: Vec<(u64, u64)> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|s| (s["k"].as_u64().unwrap(), s["l"].as_u64().unwrap()))
        .collect();
    assert_eq!(pairs, vec![(1, 3), (3, 1)]);
    let v = ok_json(&["krawtchouk", "nu", "--m", "3", "--n", "3"]);
    assert_eq!((v["S"].clone(), v["T"].clone(), v["P"].clone()), (9.into(), 2.into(), 2.into()));
    assert_eq!(v["D"]["value"], 4);
    assert_eq!(v["D"]["status"], "exact");
    let v = ok_json(&["krawtchouk", "nu", "--m", "2", "--n", "6"]);
    assert_eq!(v["D"]["value"], 6);
    assert_eq!(v["D"]["status"], "exact");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&["krawtchouk", "nu", "--m", "1", "--n", "3"]), Some(2));
    assert_eq!(code(&["state", "construct", "--family", "rho", "--b", "-1", "--theta", "pi"]), Some(2));
    assert_eq!(code(&["state", "construct", "--family", "rho", "--b", "1", "--theta", "pi/0"]), Some(2));
    assert_eq!(code(&["map", "phi-theta", "--theta", "pi", "--t", "-1"]), Some(2));
    assert_eq!(code(&["state", "frobnicate"]), Some(2));
    assert_eq!(code(&["state", "classify", "--in", "/nonexistent/state.json"]), Some(2));
}

#[test]
fn angle_forms_are_equivalent() {
    assert_eq!(construct("rho", "1.5", "-pi/3"), construct("rho", "1.5", "-1*pi/3"));
    assert_eq!(construct("rho", "1.5", "pi"), construct("rho", "1.5", "π"));
}
