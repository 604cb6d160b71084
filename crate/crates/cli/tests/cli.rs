//! End-to-end tests of the binary: payload schemas, exit codes, config
//! resolution, and the stdout/stderr split.

use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cubicfeyn"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(output: &Output) -> Value {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is valid JSON")
}

fn write(dir: &TempDir, name: &str, contents: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path.display().to_string()
}

fn scalar_model(dir: &TempDir) -> String {
    write(
        dir,
        "model.json",
        r#"{
  "quadratic": [[1.0]],
  "cubic": {"n": 1, "entries": [[0, 0, 0, 2.0]]}
}"#,
    )
}

fn theta_graph(dir: &TempDir) -> String {
    write(
        dir,
        "theta.json",
        r#"{"vertices": 2, "matching": [[0, 3], [1, 4], [2, 5]]}"#,
    )
}

fn circle_points(center: [f64; 3], radius: f64, plane: &str, n: usize) -> String {
    let points: Vec<String> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            let (x, y, z) = match plane {
                "xy" => (radius * t.cos(), radius * t.sin(), 0.0),
                _ => (radius * t.cos(), 0.0, radius * t.sin()),
            };
            format!(
                "[{}, {}, {}]",
                center[0] + x,
                center[1] + y,
                center[2] + z
            )
        })
        .collect();
    format!("{{\"points\": [{}]}}", points.join(", "))
}

#[test]
fn graphs_census_payload() {
    let output = run(&["graphs", "--loops", "1"]);
    let json = stdout_json(&output);
    assert_eq!(json["subcommand"], "graphs");
    let classes = json["payload"]["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 2);
    let mut auts: Vec<u64> = classes
        .iter()
        .map(|c| c["aut_order"].as_u64().unwrap())
        .collect();
    auts.sort_unstable();
    assert_eq!(auts, [8, 12]);
    assert_eq!(json["payload"]["multiplicity_sum"], 15);
    assert_eq!(json["payload"]["total_matchings"], 15);
}

#[test]
fn graphs_csv_format() {
    let output = run(&["graphs", "--loops", "1", "--format", "csv"]);
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("matching,aut_order,multiplicity,connected"));
    assert_eq!(lines.clone().count(), 2);
    assert!(lines.all(|l| l.ends_with(",true")));
}

#[test]
fn aut_reports_theta_order() {
    let dir = TempDir::new().unwrap();
    let graph = theta_graph(&dir);
    let json = stdout_json(&run(&["aut", "--graph", &graph]));
    assert_eq!(json["payload"]["aut_order"], 12);
    assert_eq!(json["payload"]["connected"], true);
    assert_eq!(json["payload"]["loop_order"], 1);
    let digest = json["inputs"][&graph].as_str().unwrap();
    assert_eq!(digest.len(), 64);
}

#[test]
fn weight_matches_library() {
    let dir = TempDir::new().unwrap();
    let model = scalar_model(&dir);
    let graph = theta_graph(&dir);
    let json = stdout_json(&run(&["weight", "--model", &model, "--graph", &graph]));
    // One-dimensional theta: v^2 (q^{-1})^3 = 4.
    assert!((json["payload"]["weight"].as_f64().unwrap() - 4.0).abs() < 1e-12);
}

#[test]
fn series_emits_coefficients_and_ledger() {
    let dir = TempDir::new().unwrap();
    let model = scalar_model(&dir);
    let json = stdout_json(&run(&["series", "--model", &model, "--order", "1"]));
    let c1 = json["payload"]["coefficients"][1].as_array().unwrap();
    assert!((c1[0].as_f64().unwrap()).abs() < 1e-15);
    assert!((c1[1].as_f64().unwrap() - 5.0 * 4.0 / 24.0).abs() < 1e-12);
    assert_eq!(json["payload"]["ledger"].as_array().unwrap().len(), 2);

    let connected = stdout_json(&run(&[
        "series", "--model", &model, "--order", "1", "--connected",
    ]));
    let c0 = connected["payload"]["coefficients"][0].as_array().unwrap();
    assert_eq!(c0[0].as_f64().unwrap(), 0.0);
    assert_eq!(c0[1].as_f64().unwrap(), 0.0);

    let csv = run(&["series", "--model", &model, "--order", "1", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("order,re,im\n0,1,0\n1,"));
}

#[test]
fn lie_weight_of_theta_under_su2_trace_form() {
    let dir = TempDir::new().unwrap();
    let lie = write(
        &dir,
        "su2.json",
        r#"{
  "dim": 3,
  "b": [[-0.5, 0.0, 0.0], [0.0, -0.5, 0.0], [0.0, 0.0, -0.5]],
  "c": [[0, 1, 2, -0.5]]
}"#,
    );
    let graph = theta_graph(&dir);
    let json = stdout_json(&run(&["lie-weight", "--lie", &lie, "--graph", &graph]));
    assert!((json["payload"]["weight"].as_f64().unwrap() + 12.0).abs() < 1e-12);
}

#[test]
fn link_writhe_selflink_subcommands() {
    let dir = TempDir::new().unwrap();
    let c1 = write(&dir, "c1.json", &circle_points([0.0, 0.0, 0.0], 1.0, "xy", 48));
    let c2 = write(&dir, "c2.json", &circle_points([1.0, 0.0, 0.0], 1.0, "xz", 48));
    let link = stdout_json(&run(&["link", "--c1", &c1, "--c2", &c2]));
    let payload = &link["payload"];
    assert_eq!(payload["nearest_integer"].as_i64().unwrap().abs(), 1);
    assert_eq!(payload["crossing_oracle"], payload["nearest_integer"]);
    assert_eq!(payload["within_tol"], true);

    let writhe = stdout_json(&run(&["writhe", "--c", &c1]));
    assert_eq!(writhe["payload"]["value"].as_f64().unwrap(), 0.0);

    let selflink = stdout_json(&run(&["selflink", "--c", &c1, "--offset", "0.05"]));
    assert_eq!(selflink["payload"]["nearest_integer"], 0);
    assert_eq!(selflink["payload"]["within_tol"], true);
}

#[test]
fn quotient_profiles_and_samples_file() {
    let gauss = stdout_json(&run(&["quotient", "--integrand", "gauss", "--rmax", "8"]));
    assert!((gauss["payload"]["value"].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-10);

    let disc = stdout_json(&run(&["quotient", "--integrand", "disc", "--rmax", "1"]));
    assert!((disc["payload"]["value"].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-12);

    let dir = TempDir::new().unwrap();
    let samples = write(
        &dir,
        "ramp.json",
        r#"{"samples": [[0.0, 0.0], [2.0, 2.0]]}"#,
    );
    let arg = format!("file:{samples}");
    let ramp = stdout_json(&run(&["quotient", "--integrand", &arg, "--rmax", "2"]));
    let want = 16.0 * std::f64::consts::PI / 3.0;
    assert!((ramp["payload"]["value"].as_f64().unwrap() - want).abs() < 1e-9);
    assert!(ramp["inputs"][&samples].is_string());

    let unknown = run(&["quotient", "--integrand", "nope", "--rmax", "1"]);
    assert_eq!(unknown.status.code(), Some(3));
}

#[test]
fn verify_quick_passes_and_exits_zero() {
    let output = run(&["verify", "--level", "quick"]);
    let json = stdout_json(&output);
    assert_eq!(json["payload"]["all_passed"], true);
    let properties = json["payload"]["properties"].as_array().unwrap();
    assert_eq!(properties.len(), 15);
    assert!(properties.iter().all(|p| p["passed"] == true));
}

#[test]
fn exit_codes_reflect_error_kinds() {
    let dir = TempDir::new().unwrap();
    // Usage error.
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    // Missing input file.
    assert_eq!(
        run(&["aut", "--graph", "/nonexistent/g.json"]).status.code(),
        Some(2)
    );
    // Loop order beyond the configured bound.
    let model = scalar_model(&dir);
    assert_eq!(
        run(&["series", "--model", &model, "--order", "9"]).status.code(),
        Some(4)
    );
    // Degenerate quadratic form.
    let degenerate = write(
        &dir,
        "degenerate.json",
        r#"{
  "quadratic": [[1.0, 1.0], [1.0, 1.0]],
  "cubic": {"n": 2, "entries": []}
}"#,
    );
    assert_eq!(
        run(&["series", "--model", &degenerate, "--order", "1"]).status.code(),
        Some(3)
    );
    // Touching curves.
    let c1 = write(&dir, "t1.json", &circle_points([0.0, 0.0, 0.0], 1.0, "xy", 24));
    let c2 = write(&dir, "t2.json", &circle_points([0.5, 0.0, 0.0], 1.0, "xy", 24));
    assert_eq!(
        run(&["link", "--c1", &c1, "--c2", &c2]).status.code(),
        Some(3)
    );
}

#[test]
fn config_flag_overrides_environment() {
    let dir = TempDir::new().unwrap();
    let tight = write(&dir, "tight.json", r#"{"max_loop_order": 1}"#);

    // The environment variable alone caps enumeration at one loop.
    let output = bin()
        .args(["graphs", "--loops", "2"])
        .env("CUBICFEYN_CONFIG", &tight)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(4));

    // An explicit flag wins over a broken environment path.
    let output = bin()
        .args(["graphs", "--loops", "2", "--config", &tight])
        .env("CUBICFEYN_CONFIG", "/nonexistent/config.json")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(4));

    // Invalid config contents are a validation error.
    let broken = write(&dir, "broken.json", r#"{"max_loop_order": 99}"#);
    let output = run(&["graphs", "--loops", "1", "--config", &broken]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn diagnostics_stay_on_stderr() {
    let dir = TempDir::new().unwrap();
    let asymmetric = write(
        &dir,
        "asym.json",
        r#"{
  "quadratic": [[1.0, 0.0], [0.0, 1.0]],
  "cubic": {"n": 2, "entries": [[0, 1, 0, 3.0]]}
}"#,
    );
    let output = run(&["series", "--model", &asymmetric, "--order", "1"]);
    assert!(output.status.success());
    // Stdout parses as pure JSON even with notices present.
    let _: Value = serde_json::from_slice(&output.stdout).unwrap();
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("notice:"));
    assert!(stderr.contains("elapsed:"));
}
