//! Contract tests for the `bellvol` binary: output shapes, determinism,
//! and exit codes.

use std::io::Write;
use std::process::{Command, Output};

fn bellvol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellvol"))
        .args(args)
        .env_remove("BELLVOL_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(output.status.success(), "stderr: {}", stderr_text(output));
    serde_json::from_slice(&output.stdout).expect("stdout is exactly one JSON object")
}

fn stderr_text(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn stdout_text(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn analytic_exact_reports_one_third() {
    let output = bellvol(&["analytic", "--method", "exact", "--format", "json"]);
    let record = stdout_json(&output);
    assert_eq!(record["results"]["relative"].as_f64().unwrap(), 1.0 / 3.0);
    assert_eq!(record["results"]["method"], "closed_form");
    assert_eq!(record["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn analytic_methods_agree_through_the_cli() {
    let quadrature = stdout_json(&bellvol(&[
        "analytic",
        "--method",
        "quadrature",
        "--tol",
        "1e-10",
        "--format",
        "json",
    ]));
    let series = stdout_json(&bellvol(&[
        "analytic",
        "--method",
        "series",
        "--terms",
        "100000",
        "--format",
        "json",
    ]));
    let exact = 16.0 * std::f64::consts::PI * std::f64::consts::PI / 3.0;
    let quadrature_volume = quadrature["results"]["volume"].as_f64().unwrap();
    let series_volume = series["results"]["volume"].as_f64().unwrap();
    assert!((quadrature_volume - exact).abs() < 1e-10);
    assert!(series_volume < exact && exact - series_volume < 1e-6);
}

#[test]
fn analytic_tolerance_floor_is_a_runtime_error() {
    let output = bellvol(&["analytic", "--method", "quadrature", "--tol", "1e-16"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr_text(&output).contains("floor"));
}

#[test]
fn invalid_flag_values_exit_2() {
    for args in [
        vec!["analytic", "--method", "bogus"],
        vec!["analytic", "--format", "yaml"],
        vec!["mc", "--inequality", "cglmp"],
        vec!["mc", "--inequality", "bell1", "--samples", "0"],
        vec!["mc", "--inequality", "bell1", "--confidence", "1.0"],
        vec!["mc", "--inequality", "bell1", "--chunk", "0"],
        vec!["mc", "--inequality", "bell1", "--state", "werner:oops"],
        vec!["mc", "--inequality", "bell1", "--state", "werner:1.5"],
        vec!["mc", "--inequality", "bell1", "--state", "ghz"],
        vec!["boundary", "--z", "1.5"],
        vec!["boundary", "--z", "0.5", "--z-grid", "3"],
        vec!["boundary"],
        vec!["boundary", "--z", "0.5", "--x-grid", "1"],
        vec!["sweep", "--inequality", "bell1", "--from", "0.9", "--to", "0.1", "--steps", "3"],
        vec!["sweep", "--inequality", "bell1", "--from", "0.0", "--to", "1.0", "--steps", "0"],
        vec![
            "sweep", "--inequality", "bell1", "--family", "bell-diagonal", "--from", "0.0",
            "--to", "1.0", "--steps", "3",
        ],
        vec!["--threads", "0", "analytic"],
    ] {
        let output = bellvol(&args);
        assert_eq!(
            output.status.code(),
            Some(2),
            "expected usage exit for {args:?}, stderr: {}",
            stderr_text(&output)
        );
    }
}

#[test]
fn mc_json_is_deterministic_up_to_timestamp() {
    let args = [
        "mc",
        "--inequality",
        "bell1",
        "--state",
        "singlet",
        "--samples",
        "200000",
        "--seed",
        "7",
        "--format",
        "json",
    ];
    let first = bellvol(&args);
    let second = bellvol(&args);
    assert!(first.status.success() && second.status.success());

    let strip = |raw: &[u8]| {
        let mut value: serde_json::Value = serde_json::from_slice(raw).unwrap();
        let timestamp = value["timestamp"].take();
        assert!(timestamp.is_string());
        serde_json::to_string(&value).unwrap()
    };
    assert_eq!(strip(&first.stdout), strip(&second.stdout));
}

#[test]
fn mc_fraction_lands_near_one_third_for_the_singlet() {
    let output = bellvol(&[
        "mc",
        "--inequality",
        "bell1",
        "--state",
        "singlet",
        "--samples",
        "200000",
        "--seed",
        "42",
        "--format",
        "json",
    ]);
    let record = stdout_json(&output);
    let results = &record["results"];
    let fraction = results["fraction"].as_f64().unwrap();
    let stderr = results["stderr"].as_f64().unwrap();
    assert!((fraction - 1.0 / 3.0).abs() < 5.0 * stderr);
    let ci_low = results["ci_low"].as_f64().unwrap();
    let ci_high = results["ci_high"].as_f64().unwrap();
    assert!(ci_low <= fraction && fraction <= ci_high);
    assert_eq!(record["parameters"]["seed"].as_u64(), Some(42));
}

#[test]
fn mc_threads_flag_does_not_change_the_numbers() {
    let run = |threads: &str| {
        let output = bellvol(&[
            "--threads",
            threads,
            "mc",
            "--inequality",
            "chsh",
            "--state",
            "singlet",
            "--samples",
            "150000",
            "--seed",
            "9",
            "--format",
            "json",
        ]);
        stdout_json(&output)["results"].clone()
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn mc_reads_state_files_and_reports_field_errors() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("werner07.json");
    std::fs::write(
        &good,
        r#"{"r": [0, 0, 0], "s": [0, 0, 0],
           "T": [[-0.7, 0, 0], [0, -0.7, 0], [0, 0, -0.7]],
           "label": "from-file"}"#,
    )
    .unwrap();
    let file_arg = format!("file:{}", good.display());
    let output = bellvol(&[
        "mc",
        "--inequality",
        "bell1",
        "--state",
        &file_arg,
        "--samples",
        "100000",
        "--seed",
        "5",
        "--format",
        "json",
    ]);
    let record = stdout_json(&output);
    assert_eq!(record["results"]["state_label"], "from-file");

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"r": [0, 0], "s": [0, 0, 0], "T": []}"#).unwrap();
    let file_arg = format!("file:{}", bad.display());
    let output = bellvol(&["mc", "--inequality", "bell1", "--state", &file_arg]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr_text(&output).contains("field `r`"));

    let output = bellvol(&["mc", "--inequality", "bell1", "--state", "file:/no/such.json"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn mc_fix_a_requires_symmetry() {
    let dir = tempfile::tempdir().unwrap();
    let biased = dir.path().join("biased.json");
    std::fs::write(
        &biased,
        r#"{"r": [0, 0, 0.5], "s": [0, 0, 0], "T": [[0,0,0],[0,0,0],[0,0,0]]}"#,
    )
    .unwrap();
    let file_arg = format!("file:{}", biased.display());
    let output = bellvol(&[
        "mc",
        "--inequality",
        "bell1",
        "--state",
        &file_arg,
        "--samples",
        "1000",
        "--fix-a",
    ]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr_text(&output).contains("rotationally invariant"));

    // Werner states qualify.
    let output = bellvol(&[
        "mc",
        "--inequality",
        "bell1",
        "--state",
        "werner:0.4",
        "--samples",
        "1000",
        "--fix-a",
    ]);
    assert!(output.status.success());
}

#[test]
fn sweep_streams_the_documented_csv() {
    let output = bellvol(&[
        "sweep",
        "--inequality",
        "bell1",
        "--family",
        "werner",
        "--from",
        "0",
        "--to",
        "1",
        "--steps",
        "11",
        "--samples",
        "100000",
        "--seed",
        "3",
    ]);
    assert!(output.status.success());
    let text = stdout_text(&output);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines[0], "p,fraction,stderr,ci_low,ci_high,n");
    assert_eq!(lines.len(), 12);

    let parse_row = |line: &str| -> Vec<f64> {
        line.split(',').map(|v| v.parse().unwrap()).collect()
    };
    let first = parse_row(lines[1]);
    assert_eq!(first[0], 0.0);
    assert_eq!(first[1], 0.0, "p = 0 must not violate");
    let last = parse_row(lines[11]);
    assert_eq!(last[0], 1.0);
    assert!((last[1] - 1.0 / 3.0).abs() < 0.01);
    assert_eq!(last[5] as u64, 100_000);
}

#[test]
fn boundary_tabulates_the_known_curves() {
    let output = bellvol(&["boundary", "--z", "1", "--x-grid", "3"]);
    assert!(output.status.success());
    let text = stdout_text(&output);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines[0], "z,x,y_boundary,area_closed");
    assert_eq!(lines.len(), 4);
    for line in &lines[1..] {
        let fields: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(fields[1], fields[2], "y = x at z = 1");
        assert_eq!(fields[3], 2.0);
    }

    let output = bellvol(&["boundary", "--z", "0", "--x-grid", "3"]);
    assert!(output.status.success());
    let text = stdout_text(&output);
    for line in text.trim_end().lines().skip(1) {
        let fields: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(fields[2], 1.0, "y = 1 at z = 0");
        assert_eq!(fields[3], 0.0);
    }

    let output = bellvol(&["boundary", "--z-grid", "5", "--x-grid", "21"]);
    assert!(output.status.success());
    let text = stdout_text(&output);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines.len(), 1 + 5 * 21);
    for line in &lines[1..] {
        let fields: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert!((0.0..=2.0).contains(&fields[3]), "area out of range: {line}");
        assert!((-1.0..=1.0).contains(&fields[2]));
    }
}

#[test]
fn json_output_is_a_single_object_with_logs_on_stderr() {
    let output = bellvol(&[
        "mc",
        "--inequality",
        "bell1",
        "--state",
        "singlet",
        "--samples",
        "50000",
        "--format",
        "json",
    ]);
    assert!(output.status.success());
    // Whole stdout parses as one JSON value; progress noise goes to stderr.
    let value: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert!(value.is_object());
    assert!(!stderr_text(&output).is_empty());
}

#[test]
fn env_var_supplies_the_thread_count() {
    let output = Command::new(env!("CARGO_BIN_EXE_bellvol"))
        .args(["analytic", "--method", "exact"])
        .env("BELLVOL_THREADS", "2")
        .output()
        .unwrap();
    assert!(output.status.success());

    let output = Command::new(env!("CARGO_BIN_EXE_bellvol"))
        .args(["analytic", "--method", "exact"])
        .env("BELLVOL_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn csv_record_round_trips_at_full_precision() {
    let output = bellvol(&[
        "mc",
        "--inequality",
        "bell1",
        "--state",
        "singlet",
        "--samples",
        "100000",
        "--seed",
        "11",
        "--format",
        "csv",
    ]);
    assert!(output.status.success());
    let text = stdout_text(&output);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines.len(), 2);
    let header: Vec<&str> = lines[0].split(',').collect();
    let row: Vec<&str> = lines[1].split(',').collect();
    let fraction_column = header.iter().position(|h| *h == "fraction").unwrap();
    let csv_fraction: f64 = row[fraction_column].parse().unwrap();

    let json = stdout_json(&bellvol(&[
        "mc",
        "--inequality",
        "bell1",
        "--state",
        "singlet",
        "--samples",
        "100000",
        "--seed",
        "11",
        "--format",
        "json",
    ]));
    let json_fraction = json["results"]["fraction"].as_f64().unwrap();
    assert_eq!(csv_fraction.to_bits(), json_fraction.to_bits());
}

#[test]
fn stdin_is_not_consumed_and_help_succeeds() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_bellvol"))
        .args(["--help"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(b"ignored")
        .unwrap();
    let output = child.wait_with_output().unwrap();
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("analytic"));
    assert!(text.contains("boundary"));
}
