//! End-to-end tests of the hydroshape binary: output formats, exit codes,
//! determinism, and the validate battery including its negative control.

use std::process::{Command, Output};

fn hydroshape(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hydroshape"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 output")
}

/// Parse a CSV body into (header, records) without quoting subtleties
/// beyond the quoted mu column.
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    let mut rows = Vec::new();
    for line in lines {
        let mut fields = Vec::new();
        let mut cur = String::new();
        let mut quoted = false;
        for c in line.chars() {
            match c {
                '"' => quoted = !quoted,
                ',' if !quoted => fields.push(std::mem::take(&mut cur)),
                _ => cur.push(c),
            }
        }
        fields.push(cur);
        rows.push(fields);
    }
    (header, rows)
}

#[test]
fn compute_ground_closed_prints_reference_values() {
    let out = hydroshape(&["compute", "--dim", "3", "--state", "ground", "--method", "closed"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("2.51069212"), "missing C_pos: {text}");
    assert!(text.contains("2.35448356"), "missing C_mom: {text}");
}

#[test]
fn compute_all_methods_agree() {
    let out = hydroshape(&[
        "compute", "--dim", "3", "--n", "2", "--mu", "1,1", "--method", "all", "--format", "csv",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (header, rows) = parse_csv(&stdout(&out));
    let ci = header.iter().position(|h| h == "complexity").unwrap();
    let si = header.iter().position(|h| h == "space").unwrap();
    assert_eq!(rows.len(), 6); // 3 methods x 2 spaces
    for space in ["position", "momentum"] {
        let values: Vec<f64> = rows
            .iter()
            .filter(|r| r[si] == space)
            .map(|r| r[ci].parse::<f64>().unwrap())
            .collect();
        assert_eq!(values.len(), 3);
        for v in &values[1..] {
            let rel = (v - values[0]).abs() / values[0];
            assert!(rel < 1e-6, "{space}: {values:?}");
        }
    }
}

#[test]
fn compute_rejects_dim_one_citing_the_bound() {
    let out = hydroshape(&["compute", "--dim", "1", "--state", "ground"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("D ≥ 2"), "{}", stderr(&out));
}

#[test]
fn compute_rejects_invalid_tower_naming_the_inequality() {
    let out = hydroshape(&["compute", "--dim", "4", "--n", "3", "--mu", "1,2,0"]);
    assert_eq!(out.status.code(), Some(1));
    let msg = stderr(&out);
    assert!(msg.contains("μ1 ≥ μ2"), "{msg}");
}

#[test]
fn compute_closed_on_noncircular_state_is_a_usage_error() {
    let out = hydroshape(&["compute", "--dim", "3", "--n", "2", "--mu", "0,0", "--method", "closed"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("circular"), "{}", stderr(&out));
}

#[test]
fn sweep_ground_momentum_column_matches_reference_values() {
    let out = hydroshape(&["sweep", "--state", "ground", "--dim-range", "2..4", "--format", "csv"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (header, rows) = parse_csv(&stdout(&out));
    let ci = header.iter().position(|h| h == "complexity").unwrap();
    let si = header.iter().position(|h| h == "space").unwrap();
    let momentum: Vec<f64> = rows
        .iter()
        .filter(|r| r[si] == "momentum")
        .map(|r| r[ci].parse::<f64>().unwrap())
        .collect();
    let reference = [1.7926, 2.3545, 3.0799];
    assert_eq!(momentum.len(), 3);
    for (got, want) in momentum.iter().zip(reference) {
        assert!((got - want).abs() < 1e-4, "{got} vs {want}");
    }
}

#[test]
fn sweep_rows_are_ordered_and_deterministic() {
    let args = [
        "sweep", "--state", "circular", "--dim-range", "2..3", "--n-range", "1..3", "--format",
        "csv", "--method", "closed",
    ];
    let a = hydroshape(&args);
    let b = hydroshape(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "sweep output not byte-identical");
    let (header, rows) = parse_csv(&stdout(&a));
    let di = header.iter().position(|h| h == "D").unwrap();
    let ni = header.iter().position(|h| h == "n").unwrap();
    let keys: Vec<(u32, u32)> =
        rows.iter().map(|r| (r[di].parse().unwrap(), r[ni].parse().unwrap())).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted, "rows not lexicographic in (D, n)");
}

#[test]
fn sweep_empty_range_is_a_usage_error() {
    let out = hydroshape(&["sweep", "--state", "ground", "--dim-range", "5..3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_writes_output_file_and_plot_script() {
    let dir = std::env::temp_dir().join(format!("hydroshape-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("sweep.csv");
    let script = dir.join("plot.py");
    let out = hydroshape(&[
        "sweep",
        "--state",
        "circular",
        "--dim",
        "3",
        "--n-range",
        "1..5",
        "--output",
        csv.to_str().unwrap(),
        "--plot-script",
        script.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let body = std::fs::read_to_string(&csv).unwrap();
    assert!(body.starts_with("D,n,mu,Z,space,method,"));
    // position complexities start 2.5106921, 1.8115096, ...
    assert!(body.contains("2.5106921"), "{body}");
    assert!(body.contains("1.8115096"), "{body}");
    let plot = std::fs::read_to_string(&script).unwrap();
    assert!(plot.contains("complexity") && plot.contains("sweep.csv"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn compute_json_is_deterministic_and_carries_triplets() {
    let args = [
        "compute", "--dim", "4", "--n", "2", "--mu", "1,1,-1", "--method", "pipeline", "--format",
        "json",
    ];
    let a = hydroshape(&args);
    let b = hydroshape(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout, "json output not byte-identical");
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let report = &v["reports"][0];
    for key in [
        "disequilibrium_pos",
        "shannon_pos",
        "complexity_pos",
        "disequilibrium_mom",
        "shannon_mom",
        "complexity_mom",
        "product",
    ] {
        for field in ["value", "err_est", "method"] {
            assert!(!report[key][field].is_null(), "missing {key}.{field}: {report}");
        }
    }
    // 17 significant digits in the raw text
    let text = stdout(&a);
    assert!(text.contains("e0") || text.contains("e-"), "{text}");
}

#[test]
fn z_invariance_visible_through_cli() {
    let mut values = Vec::new();
    for z in ["1", "2", "5", "10"] {
        let out = hydroshape(&[
            "compute", "--dim", "3", "--state", "circular", "--n", "2", "--z", z, "--method",
            "pipeline", "--format", "csv",
        ]);
        assert!(out.status.success());
        let (header, rows) = parse_csv(&stdout(&out));
        let ci = header.iter().position(|h| h == "complexity").unwrap();
        values.push(rows[0][ci].parse::<f64>().unwrap());
    }
    for v in &values[1..] {
        assert!((v - values[0]).abs() <= 1e-9 * values[0], "{values:?}");
    }
}

#[test]
fn validate_passes_by_default() {
    let out = hydroshape(&["validate"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], serde_json::Value::Bool(true));
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() >= 5);
    for c in checks {
        assert_eq!(c["pass"], serde_json::Value::Bool(true), "{c}");
        assert!(!c["tolerance"].is_null() && !c["max_residual"].is_null());
    }
}

#[test]
fn validate_negative_control_fails_naming_route_disagreement() {
    let out = hydroshape(&["validate", "--inject-k1-exponent-bug"]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], serde_json::Value::Bool(false));
    let failed: Vec<&serde_json::Value> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == serde_json::Value::Bool(false))
        .collect();
    assert!(!failed.is_empty());
    assert!(
        failed.iter().any(|c| c["name"] == "route-agreement"
            && c["detail"].as_str().unwrap().contains("route-disagreement")),
        "{failed:?}"
    );
}

#[test]
fn too_tight_tolerance_is_a_usage_error() {
    let out = hydroshape(&[
        "compute", "--dim", "3", "--n", "2", "--mu", "1,0", "--method", "pipeline", "--rel-tol",
        "1e-20",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("tolerance"), "{}", stderr(&out));
}

#[test]
fn rel_tol_env_var_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_hydroshape"))
        .args(["compute", "--dim", "2", "--state", "ground", "--method", "oracle", "--format", "csv"])
        .env("HYDROSHAPE_REL_TOL", "not-a-number")
        .output()
        .unwrap();
    // clap rejects a malformed env value as a usage error
    assert_eq!(out.status.code(), Some(1));

    let out = Command::new(env!("CARGO_BIN_EXE_hydroshape"))
        .args(["compute", "--dim", "2", "--state", "ground", "--method", "oracle", "--format", "csv"])
        .env("HYDROSHAPE_REL_TOL", "1e-8")
        .output()
        .unwrap();
    assert!(out.status.success());
}
