use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tautrel")).args(args).current_dir(root()).output().expect("runs")
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tautrel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn frame_reports_a2_canonical_coordinates() {
    let v = json(&run(&["frame", "--chart", "charts/a2.json", "--precision", "3"]));
    assert_eq!(v["schema_version"], "tautrel.frame/1");
    let u: Vec<&str> = v["canonical_coordinates"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert!(u.contains(&"t0 + 2/3*t1^(3/2)") && u.contains(&"t0 - 2/3*t1^(3/2)"));
    assert_eq!(v["structure"]["m"], "1/2");
}

#[test]
fn frame_reports_a3_difference() {
    let v = json(&run(&["frame", "--chart", "charts/a3.json", "--precision", "3"]));
    let diffs: Vec<&str> = v["canonical_differences"].as_object().unwrap().values().map(|x| x.as_str().unwrap()).collect();
    assert!(diffs.iter().any(|d| *d == "1/4*z3*phi^3" || *d == "-1/4*z3*phi^3"), "{diffs:?}");
}

#[test]
fn malformed_chart_is_an_input_error() {
    let bad = scratch("bad.json");
    std::fs::write(&bad, "{ \"name\": ").unwrap();
    let out = run(&["frame", "--chart", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse"));
    assert_eq!(run(&["frame", "--chart", "charts/missing.json"]).status.code(), Some(2));
    assert_eq!(run(&["frame"]).status.code(), Some(2));
    assert_eq!(run(&["frame", "--chart", "A2", "--z-order", "0"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    let cfg = scratch("unknown.json");
    std::fs::write(&cfg, "{\"chart\": \"A2\", \"bogus\": 1}").unwrap();
    assert_eq!(run(&["frame", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn insufficient_order_is_a_computation_error() {
    let out = run(&["reconstruct", "--chart", "A2", "--z-order", "1", "--g", "1", "--n", "2", "--input", "0,1", "--input", "0,1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn one_one_relation_file() {
    let v = json(&run(&["relations", "--chart", "charts/a2.json", "--gn", "1,1", "--codim", "1", "--no-close"]));
    let cells = v["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 1);
    assert_eq!(cells[0]["dimension"], 1);
    assert_eq!(v["config"]["cells"], serde_json::json!([[1, 1]]));
}

#[test]
fn compare_a2_with_its_extension() {
    let v = json(&run(&["compare", "A2", "A2xA1", "--gn", "1,1", "--gn", "0,4", "--codim", "1"]));
    assert_eq!(v["equal"], true);
    assert!(v["cells"].as_array().unwrap().iter().all(|c| c["verdict"] == "equal"));
}

#[test]
fn family_gamma_in_diagnostics() {
    let v = json(&run(&["rmatrix", "--family", "f=t*(t+1)"]));
    assert_eq!(v["diagnostics"]["gamma"], "1/12 + 1/6*t");
}

#[test]
fn rmatrix_of_a_chart_is_flat_and_symplectic() {
    let v = json(&run(&["rmatrix", "--chart", "A2", "--z-order", "2"]));
    assert_eq!(v["diagnostics"]["flatness_residual_zero"], true);
    assert_eq!(v["diagnostics"]["symplectic"], true);
}

#[test]
fn genus_one_potential_matches_correlator() {
    let v = json(&run(&["genus1", "--chart", "A2", "--direction", "1,0"]));
    assert_eq!(v["agree"], true);
    assert_eq!(run(&["genus1", "--chart", "A2", "--direction", "1"]).status.code(), Some(2));
}

#[test]
fn verify_accepts_relations_and_flags_corruption() {
    let file = scratch("rel.json");
    let out = run(&["relations", "--chart", "A2", "--gn", "1,1", "--gn", "0,4", "--codim", "1", "-o", file.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&run(&["verify", file.to_str().unwrap()]));
    assert_eq!(v["ok"], true);
    let mut rel: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    let cell = rel["cells"].as_array_mut().unwrap().iter_mut().find(|c| c["g"] == 1).unwrap();
    cell["relations"][0][0]["coefficient"] = serde_json::json!("7");
    let bad = scratch("rel_bad.json");
    std::fs::write(&bad, serde_json::to_string(&rel).unwrap()).unwrap();
    let out = run(&["verify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ok"], false);
}

#[test]
fn output_is_deterministic_across_runs_and_pool_sizes() {
    let args = ["relations", "--chart", "A2", "--gn", "1,2", "--gn", "0,5", "--codim", "2"];
    let a = run(&[&args[..], &["--workers", "1"]].concat());
    let b = run(&[&args[..], &["--workers", "4"]].concat());
    let c = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn config_file_with_flag_override() {
    let v = json(&run(&["relations", "--config", "charts/a2_relations.config.json", "--gn", "1,1", "--codim", "1"]));
    assert_eq!(v["config"]["chart"], "charts/a2.json");
    assert_eq!(v["config"]["max_codim"], 1);
    assert_eq!(v["config"]["cells"], serde_json::json!([[1, 1]]));
    let dir = scratch("outdir");
    let out = run(&["frame", "--chart", "A2", "--output-dir", dir.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    assert!(dir.join("frame.json").exists());
}
