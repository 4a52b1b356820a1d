//! End-to-end CLI tests against the compiled binary: exit codes, output
//! files, and the synth -> analyze round trip.

use std::fs;
use std::process::{Command, Output};

use tempfile::TempDir;

fn pvperf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pvperf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&pvperf(&["--help"])), 0);
    assert_eq!(code(&pvperf(&["--version"])), 0);
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = pvperf(&["frobnicate"]);
    assert_eq!(code(&out), 1);
    assert!(!out.stderr.is_empty());
}

#[test]
fn missing_input_file_is_a_data_error() {
    let out = pvperf(&["analyze", "/nonexistent/gen.csv", "/nonexistent/wx.csv"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn config_errors_exit_three_and_lenient_recovers() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("config.json");

    fs::write(&path, r#"{"finance": {"tariff_per_kwh": 0.25, "typo_key": 1}}"#).unwrap();
    let strict = pvperf(&["--config", path.to_str().unwrap(), "validate"]);
    assert_eq!(code(&strict), 3);
    assert!(String::from_utf8_lossy(&strict.stderr).contains("typo_key"));

    let lenient = pvperf(&["--config", path.to_str().unwrap(), "--lenient", "validate"]);
    assert_eq!(code(&lenient), 0);

    fs::write(&path, "{ not json").unwrap();
    assert_eq!(
        code(&pvperf(&["--config", path.to_str().unwrap(), "validate"])),
        3
    );
}

#[test]
fn validate_reports_violations_as_data() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("config.json");
    // Albedo out of range and a nameplate that contradicts the module count.
    fs::write(
        &path,
        r#"{"system": {"albedo": 1.5, "p_rated_kwp": 9.99}}"#,
    )
    .unwrap();
    let out = pvperf(&["--config", path.to_str().unwrap(), "validate"]);
    assert_eq!(code(&out), 3);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).expect("json on stdout");
    let violations = report["violations"].as_array().unwrap();
    assert!(violations.iter().any(|v| v["field"] == "system.albedo"));
    assert!(violations.iter().any(|v| v["field"] == "system.p_rated_kwp"));
}

#[test]
fn synth_analyze_round_trip() {
    let dir = TempDir::new().unwrap();
    let gen = dir.path().join("generation.csv");
    let wx = dir.path().join("weather.csv");
    let out_json = dir.path().join("report.json");

    let synth = pvperf(&[
        "synth",
        "--seed",
        "11",
        "--days",
        "90",
        "--gen-out",
        gen.to_str().unwrap(),
        "--weather-out",
        wx.to_str().unwrap(),
    ]);
    assert_eq!(code(&synth), 0, "{}", String::from_utf8_lossy(&synth.stderr));
    assert!(gen.exists() && wx.exists());

    let analyze = pvperf(&[
        "--out",
        out_json.to_str().unwrap(),
        "analyze",
        gen.to_str().unwrap(),
        wx.to_str().unwrap(),
    ]);
    assert_eq!(
        code(&analyze),
        0,
        "{}",
        String::from_utf8_lossy(&analyze.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out_json).unwrap()).expect("valid json");
    assert_eq!(report["schema_version"], "1");
    assert!(report["annual"]["mean_pr_pct"].as_f64().unwrap() > 0.0);
    assert!(report["impact"]["npv_benefits"].is_number());

    // Same inputs, other formats.
    let csv = pvperf(&["--format", "csv", "analyze", gen.to_str().unwrap(), wx.to_str().unwrap()]);
    assert_eq!(code(&csv), 0);
    assert!(String::from_utf8_lossy(&csv.stdout).starts_with("year,month,valid"));

    let md = pvperf(&["--format", "md", "analyze", gen.to_str().unwrap(), wx.to_str().unwrap()]);
    assert_eq!(code(&md), 0);
    assert!(String::from_utf8_lossy(&md.stdout).contains("# PV system analysis report"));
}

#[test]
fn synth_is_reproducible_across_invocations() {
    let dir = TempDir::new().unwrap();
    let mk = |tag: &str| {
        let gen = dir.path().join(format!("g{tag}.csv"));
        let wx = dir.path().join(format!("w{tag}.csv"));
        let out = pvperf(&[
            "synth",
            "--seed",
            "5",
            "--days",
            "14",
            "--gen-out",
            gen.to_str().unwrap(),
            "--weather-out",
            wx.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
        (fs::read(gen).unwrap(), fs::read(wx).unwrap())
    };
    assert_eq!(mk("a"), mk("b"));
}

#[test]
fn impact_command_reports_the_block() {
    let out = pvperf(&["impact", "--annual-energy-kwh", "3699", "--export-kwh", "2380"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("json");
    let npv = v["npv_benefits"].as_f64().unwrap();
    assert!((npv - 4197.26).abs() < 25.0, "npv {npv}");
    assert!((v["lcoe"].as_f64().unwrap() - 0.088).abs() < 0.003);
}

#[test]
fn benchmark_command_ranks_the_inputs() {
    let out = pvperf(&[
        "benchmark",
        "--pr-pct",
        "77.1",
        "--cuf-pct",
        "15.52",
        "--eta-sys-pct",
        "13.0",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("json");
    let rank = v["pr"]["rank"].as_u64().unwrap();
    let n = v["pr"]["n_entries"].as_u64().unwrap();
    assert_eq!(n, 15);
    assert!(rank >= 1 && rank <= n);
}

#[test]
fn correlate_writes_plot_data() {
    let dir = TempDir::new().unwrap();
    let gen = dir.path().join("generation.csv");
    let wx = dir.path().join("weather.csv");
    let plot = dir.path().join("plot.csv");

    assert_eq!(
        code(&pvperf(&[
            "synth",
            "--seed",
            "3",
            "--days",
            "40",
            "--gen-out",
            gen.to_str().unwrap(),
            "--weather-out",
            wx.to_str().unwrap(),
        ])),
        0
    );
    let out = pvperf(&[
        "correlate",
        gen.to_str().unwrap(),
        wx.to_str().unwrap(),
        "--plot-out",
        plot.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("json");
    assert!(v["per_class"].is_array());
    let plot_text = fs::read_to_string(&plot).unwrap();
    assert!(plot_text.starts_with("hour,e_ac_kwh,irradiance_w_m2,class"));
    assert!(plot_text.lines().count() > 1);
}
