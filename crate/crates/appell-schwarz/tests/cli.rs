//! End-to-end tests of the `schwarz` binary: output schemas, exit codes,
//! determinism, and the config/flag machinery.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schwarz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn forward_json_schema_and_determinism() {
    let a = run(&["forward", "0.2", "0.2"]);
    assert!(a.status.success());
    let b = run(&["forward", "0.2", "0.2"]);
    assert_eq!(a.stdout, b.stdout, "output must be byte-identical");
    let v: serde_json::Value = serde_json::from_str(stdout(&a).trim()).unwrap();
    // tau purely imaginary on the chamber
    assert!(v["tau"][0].as_f64().unwrap().abs() < 1e-9);
    assert!(v["tau"][1].as_f64().unwrap() > 0.0);
    assert!(v["image_residual"].as_f64().unwrap() < 1e-9);
}

#[test]
fn forward_rejects_singular_locus_with_exit_2() {
    let o = run(&["forward", "0.5", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn forward_csv_row() {
    let o = run(&["forward", "0.2", "0.2", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("x1,x2,"));
    assert_eq!(lines.count(), 1);
}

#[test]
fn inverse_round_trip_and_exit_codes() {
    let f = run(&["forward", "0.3", "0.1"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&f).trim()).unwrap();
    let g = |k: &str, i: usize| v[k][i].as_f64().unwrap().to_string();
    let o = run(&[
        "inverse",
        &g("y1", 0),
        &g("y1", 1),
        &g("y2", 0),
        &g("y2", 1),
        &g("tau", 0),
        &g("tau", 1),
    ]);
    assert!(o.status.success());
    let w: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!((w["x1"][0].as_f64().unwrap() - 0.3).abs() < 1e-8);
    assert!((w["x2"][0].as_f64().unwrap() - 0.1).abs() < 1e-8);

    // perturbed y exits 4, negative Im tau exits 2
    let bad = run(&[
        "inverse",
        "0.9",
        "0.0",
        &g("y2", 0),
        &g("y2", 1),
        &g("tau", 0),
        &g("tau", 1),
    ]);
    assert_eq!(bad.status.code(), Some(4));
    let neg = run(&["inverse", "0.1", "0.0", "0.1", "0.0", "0.0", "-1.0"]);
    assert_eq!(neg.status.code(), Some(2));
}

#[test]
fn periods_json() {
    let o = run(&["periods", "0.2", "0.3"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    // f1 positive real, f2 purely imaginary on the chamber
    assert!(v["f1"][0].as_f64().unwrap() > 0.0);
    assert!(v["f1"][1].as_f64().unwrap().abs() < 1e-10);
    assert!(v["f2"][0].as_f64().unwrap().abs() < 1e-10);
    assert!(v["f2"][1].as_f64().unwrap() > 0.0);
}

#[test]
fn verify_monodromy_suite_exits_zero() {
    let o = run(&["verify", "monodromy"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["pass"], serde_json::Value::Bool(true));
    let ids: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["id"].as_str().unwrap())
        .collect();
    assert!(ids.contains(&"igusa_index"));
    let bad = run(&["verify", "no-such-suite"]);
    assert_eq!(bad.status.code(), Some(5));
}

#[test]
fn monodromy_check_and_decompose() {
    let m4 = r#"{"phase":0,"entries":[[[2,0],[1,0],[0,0],[0,0]],[[-1,0],[0,0],[0,0],[0,0]],[[-1,0],[-1,0],[1,0],[0,0]],[[0,0],[0,0],[0,0],[1,0]]]}"#;
    let o = run(&["monodromy", "check", m4]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\"member\":true"));

    let minus_e = r#"{"phase":2,"entries":[[[1,0],[0,0],[0,0],[0,0]],[[0,0],[1,0],[0,0],[0,0]],[[0,0],[0,0],[1,0],[0,0]],[[0,0],[0,0],[0,0],[1,0]]]}"#;
    let o = run(&["monodromy", "check", minus_e]);
    assert!(stdout(&o).contains("\"member\":false"));

    let o = run(&["monodromy", "decompose", m4]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("{\"word\":["));

    let o = run(&["monodromy", "decompose", "{bad json"]);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn table_sweep_confined_to_chamber() {
    let o = run(&["table", "--grid", "0.1:0.9:0.2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("x1,x2,z,"));
    for line in lines {
        let cols: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        assert!(
            cols[0] + cols[1] < 1.0,
            "grid point outside the chamber: {line}"
        );
    }
}

#[test]
fn unvalidated_flag_gates_non_chamber_points() {
    // (0.2, -0.3) lies in the regular locus but outside the real chamber:
    // without the flag the domain gate fires (exit 2); with it the
    // evaluation proceeds and reports honestly that the straight-line
    // path crosses a branch point (exit 3)
    let o = run(&["forward", "0.2", "--", "-0.3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["forward", "--unvalidated", "0.2", "--", "-0.3"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn table_deterministic() {
    let a = run(&["table", "--grid", "0.2:0.6:0.2"]);
    let b = run(&["table", "--grid", "0.2:0.6:0.2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_file_overridden_by_flags() {
    let dir = std::env::temp_dir().join("schwarz-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("conf.txt");
    std::fs::write(&path, "format = csv\nabs_eps = 1e-10\n").unwrap();
    // config requests csv; flag forces json
    let o = run(&[
        "forward",
        "0.2",
        "0.2",
        "--config",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).trim_start().starts_with('{'));
    // without the flag the config applies
    let o = run(&["forward", "0.2", "0.2", "--config", path.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("x1,x2,"));
}
