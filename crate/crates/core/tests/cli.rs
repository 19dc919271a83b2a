use std::process::{Command, Output};

use serde_json::Value;

fn coercheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coercheck"))
        .args(args)
        .env_remove("COERCHECK_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn certify_examples_and_exit_codes() {
    let o = coercheck(&["certify", "x^4 + x^3*y + y^4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "Coercive (CircuitChar)");

    let o = coercheck(&["certify", "x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "NotCoercive (C3)");

    let o = coercheck(&["certify", "x^2 + y^2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "Coercive (GemRegularChar)");

    let o = coercheck(&["certify", "x^4 + 1.5*x^3*y + 1.5*x*y^3 + y^4"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout(&o).trim(), "Unknown");
}

#[test]
fn borderline_exit_code() {
    // |f*| equals Θ exactly here; only the integer power comparison settles it
    let o = coercheck(&["certify", "--seeds", "0", "3/4*x^4 + 1/4*y^4 - x^3*y"]);
    assert_eq!(o.status.code(), Some(1), "exact fallback settles equality");
    let o = coercheck(&["nonneg", "x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(coercheck(&["certify", "x^^2"]).status.code(), Some(2));
    assert_eq!(coercheck(&["certify"]).status.code(), Some(2));
    assert_eq!(coercheck(&["frobnicate"]).status.code(), Some(2));
    let o = coercheck(&["certify", "--vars", "x", "x^2 + y^2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn certify_json_schema() {
    let o = coercheck(&["certify", "--json", "x^4 + 0.95*x^3*y + 0.95*x*y^3 + y^4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verdict"], "Coercive");
    assert_eq!(v["theorem"], "TheoremMain");
    assert_eq!(v["exact"], true);
    assert_eq!(v["meta"]["precision_bits"], 192);
    assert!(v["meta"]["tool_version"].is_string());
    let table = v["witness"]["h_alpha_table"].as_array().unwrap();
    assert_eq!(table.len(), 2);
    assert_eq!(table[0]["h"], "19/20");
    assert_eq!(table[0]["margin"], "1/20");
    assert_eq!(v["witness"]["map"]["seed"], Value::Null);
    assert!(v["witness"]["map"]["entries"].is_array());
}

#[test]
fn precision_flag_and_env() {
    let o = coercheck(&["certify", "--json", "--precision", "64", "x^4 + x^3*y + y^4"]);
    assert_eq!(json(&o)["meta"]["precision_bits"], 64);
    let o = Command::new(env!("CARGO_BIN_EXE_coercheck"))
        .args(["certify", "--json", "x^4 + x^3*y + y^4"])
        .env("COERCHECK_PRECISION", "512")
        .output()
        .unwrap();
    assert_eq!(json(&o)["meta"]["precision_bits"], 512);
}

#[test]
fn analyze_outputs() {
    let v = json(&coercheck(&["analyze", "x^4 + x^3*y + y^4"]));
    assert_eq!(v["d"], serde_json::json!([[3, 1]]));
    assert_eq!((v["c1"].clone(), v["c2"].clone(), v["c3"].clone()), (true.into(), true.into(), true.into()));
    assert_eq!(v["gem_regular"], false);
    assert_eq!(v["map"]["entries"][0]["alpha_star"], serde_json::json!([3, 1]));

    let v = json(&coercheck(&["analyze", "x^2 + y^2"]));
    assert_eq!(v["gem_regular"], true);

    let o = coercheck(&["analyze", "x^2 - x^2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["polynomial"], "0");
    assert_eq!((v["c1"].clone(), v["c2"].clone(), v["c3"].clone()), (false.into(), false.into(), false.into()));
}

#[test]
fn nonneg_examples() {
    let o = coercheck(&["nonneg", "--json", "x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verdict"], "Nonnegative");
    assert_eq!(v["comparison"], "exact-power");
    assert!(v["theta"]["lo"].as_str().unwrap().starts_with("2.99999") || v["theta"]["lo"].as_str().unwrap().starts_with("3.0"));

    let o = coercheck(&["nonneg", "x^4 - 4*x^3*y + y^4"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(1), "NotNonnegative"));
    let o = coercheck(&["nonneg", "x^4 + x^3*y + y^4"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "Nonnegative"));
    let o = coercheck(&["nonneg", "x^4 + x^3*y + x*y^3 + y^4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a circuit"));
}

#[test]
fn input_from_file() {
    let dir = std::env::temp_dir().join(format!("coercheck-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("f.txt");
    std::fs::write(&path, "x^4 + 2*x^3*y + y^4\n").unwrap();
    let o = coercheck(&["certify", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn region_scan_is_deterministic() {
    let args = [
        "region-scan",
        "x^4 + A*x^3*y + B*x*y^3 + y^4",
        "--p1",
        "A:-2.5:2.5:11",
        "--p2",
        "B:-2.5:2.5:11",
    ];
    let a = coercheck(&args);
    let b = coercheck(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let csv = stdout(&a);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "p1,p2,verdict,theorem");
    assert_eq!(lines.len(), 1 + 121);
    // negative along x = y, but the necessary conditions hold, so no verdict
    assert_eq!(lines[1], "-2.5,-2.5,Unknown,none");
    assert!(lines.contains(&"0,0,Coercive,GemRegularChar"));
}

#[test]
fn region_scan_single_cell_and_errors() {
    let o = coercheck(&[
        "region-scan",
        "x^4 + A*x^3*y + B*x*y^3 + y^4",
        "--p1",
        "A:0:0:1",
        "--p2",
        "B:0:0:1",
    ]);
    assert_eq!(stdout(&o), "p1,p2,verdict,theorem\n0,0,Coercive,GemRegularChar\n");

    let o = coercheck(&["region-scan", "x^4 + A*x^3*y + y^4", "--p1", "A:0:1:2", "--p2", "B:0:1:2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("placeholder"));
}

#[test]
fn region_scan_compare_mode() {
    let o = coercheck(&[
        "region-scan",
        "--compare",
        "x^4 + A*x^3*y + B*x*y^3 + y^4",
        "--p1",
        "A:0.95:1.5:2",
        "--p2",
        "B:0.1:0.95:2",
    ]);
    let csv = stdout(&o);
    assert!(csv.contains("0.95,0.95,Coercive,TheoremMain\n"), "{csv}");
    assert!(csv.contains("1.5,0.1,Coercive,Posynomial\n"), "{csv}");
    assert!(csv.contains("0.95,0.1,Coercive,TheoremMain+Posynomial\n"), "{csv}");
    assert!(csv.contains("1.5,0.95,Unknown,none\n"), "{csv}");
}

#[test]
fn radial_scan_command() {
    let o = coercheck(&["radial-scan", "--json", "--radii", "1,10,100", "x^4 + y^4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let minima: Vec<f64> = v["minima"].as_array().unwrap().iter().map(|m| m.as_f64().unwrap()).collect();
    assert!((minima[0] - 0.5).abs() < 1e-9);
    assert!((minima[2] - 5e7).abs() < 1e-3);
    assert_eq!(v["diverges"], true);
    let o = coercheck(&["radial-scan", "--radii", "10,1", "x^4 + y^4"]);
    assert_eq!(o.status.code(), Some(2));
}
