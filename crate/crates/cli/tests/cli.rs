use std::fs;
use std::process::{Command, Output};

fn diqss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diqss"))
        .args(args)
        .output()
        .expect("failed to run diqss")
}

fn stdout(args: &[&str]) -> String {
    let out = diqss(args);
    assert!(
        out.status.success(),
        "diqss {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut argv = args.to_vec();
    argv.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&argv)).unwrap()
}

#[test]
fn rate_example() {
    let human = stdout(&[
        "rate",
        "--fidelity",
        "0.98",
        "--eta",
        "0.98",
        "--variant",
        "basic",
        "--ad",
    ]);
    assert!(
        human.contains("rate [bits/round]            0.5921"),
        "{human}"
    );
    let v = json(&[
        "rate",
        "-F",
        "0.98",
        "--eta",
        "0.98",
        "--variant",
        "basic",
        "--ad",
    ]);
    assert!((v[0]["rate"].as_f64().unwrap() - 0.592).abs() < 2e-3);
    assert_eq!(v[0]["variant"], "ad+basic");
}

#[test]
fn threshold_example() {
    let v = json(&["threshold", "--fidelity", "1", "--variant", "basic"]);
    assert!((v[0]["eta_threshold"].as_f64().unwrap() - 0.963).abs() < 1e-3);
    assert_eq!(v[0]["reachable"], true);
}

#[test]
fn domain_errors_exit_one() {
    let out = diqss(&["rate", "--fidelity", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("fidelity") && err.contains("[0, 1]"), "{err}");

    let out = diqss(&["rate", "--eta", "0.9", "--q", "0.1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("noise pre-processing"));

    let out = diqss(&["threshold", "--fidelity", "0.5"]);
    assert_eq!(out.status.code(), Some(1));

    let out = diqss(&["distance", "--eta", "0.99"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("zero-distance"));

    let out = diqss(&["sweep", "--axis", "eta:0.5:1:3", "--axis", "d:0:1:3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["rate", "--variant", "xyz"][..],
        &["frobnicate"],
        &["sweep", "--axis", "w:0:1:3"],
        &["sweep", "--axis", "eta:0:1"],
        &["sweep"],
        &["distance"],
        &["rate", "--eta", "0.9", "--distance", "1"],
        &["rate", "--format", "xml"],
    ] {
        assert_eq!(diqss(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn sweep_csv_shape() {
    let csv = stdout(&[
        "sweep",
        "--axis",
        "eta:0.9:1:5",
        "--axis",
        "F:0.95:1:3",
        "--format",
        "csv",
    ]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "eta,F,variant,rate,s_value,effective_qber");
    assert_eq!(lines.len(), 1 + 5 * 3 * 8);
    assert!(lines[1].starts_with("0.9,0.95,basic,"));
    assert!(lines[8].starts_with("0.9,0.95,ad+nps,"));
    assert!(lines[9].starts_with("0.9,0.975,basic,"));
    for line in &lines[1..] {
        let rate: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert!(rate >= 0.0);
    }
}

#[test]
fn sweep_distance_anchor() {
    let v = json(&[
        "sweep",
        "--axis",
        "d:0:2:21",
        "-F",
        "1",
        "--variant",
        "ad+basic",
        "--variant",
        "ad+ps",
    ]);
    let rows: Vec<&serde_json::Value> = v
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["d"] == 1.0)
        .collect();
    assert_eq!(rows.len(), 2);
    assert!((rows[0]["rate"].as_f64().unwrap() - 0.2015).abs() < 2e-3);
    assert!((rows[1]["rate"].as_f64().unwrap() - 0.1037).abs() < 2e-3);
}

#[test]
fn flip_sweep_vanishes_at_half() {
    let v = json(&[
        "sweep",
        "--axis",
        "q:0:0.5:6",
        "-F",
        "0.97",
        "--variant",
        "np",
        "--variant",
        "ad+nps",
    ]);
    for row in v.as_array().unwrap().iter().filter(|r| r["q"] == 0.5) {
        assert_eq!(row["rate"], 0.0);
    }
}

#[test]
fn table1_rows() {
    let v = json(&["table1"]);
    let rows = v.as_array().unwrap();
    let ids: Vec<&str> = rows
        .iter()
        .map(|r| r["variant"].as_str().unwrap())
        .collect();
    assert_eq!(
        ids,
        ["basic", "np", "ps", "nps", "ad+basic", "ad+np", "ad+ps", "ad+nps"]
    );
    assert_eq!(rows[4]["protocol"], "AD+Basic DI-QSS");
    assert!((rows[4]["max_distance"].as_f64().unwrap() - 1.85).abs() < 0.01);
}

#[test]
fn distance_conversions() {
    let v = json(&["distance", "--distance", "50"]);
    assert!((v[0]["transmittance"].as_f64().unwrap() - 0.1).abs() < 1e-12);
    let v = json(&["distance", "--eta", "0.9702"]);
    assert_eq!(v[0]["distance"], 0.0);
}

#[test]
fn qber_report() {
    let v = json(&["qber", "-F", "0.98", "--eta", "0.98"]);
    assert!((v[0]["loss_inclusive_qber"].as_f64().unwrap() - 0.068_219_92).abs() < 1e-10);
    assert!((v[0]["click_conditional_qber"].as_f64().unwrap() - 0.01).abs() < 1e-12);
    let s = v[0]["svetlichny_at_unit_eta"].as_f64().unwrap();
    assert!((s - 4.0 * std::f64::consts::SQRT_2 * 0.98).abs() < 1e-10);
}

#[test]
fn simulate_report() {
    let v = json(&[
        "simulate", "-F", "0.98", "--eta", "0.98", "--ad", "--rounds", "100000", "--seed", "5",
    ]);
    assert_eq!(v["rounds_sampled"], 100_000);
    assert!(v["rounds_sifted"].as_u64().unwrap() <= 100_000);
    let after = &v["qber_after_ad"];
    assert!(after["ci_low"].as_f64().unwrap() <= after["ci_high"].as_f64().unwrap());

    let other = json(&[
        "simulate", "-F", "0.98", "--eta", "0.98", "--ad", "--rounds", "100000", "--seed", "6",
    ]);
    assert_ne!(v, other);
}

#[test]
fn verify_suites() {
    let out = stdout(&["verify", "--suite", "oracle"]);
    assert!(out.lines().filter(|l| l.starts_with("PASS")).count() >= 8);
    assert!(!out.contains("FAIL"));
    let out = stdout(&["verify", "--suite", "table1"]);
    assert!(out.ends_with("32/32 checks passed\n"), "{out}");
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let p = path.to_str().unwrap();
    assert!(stdout(&["table1", "--format", "csv", "--output", p]).is_empty());
    let written = fs::read_to_string(&path).unwrap();
    assert!(
        written.starts_with("variant,protocol,rate,delta_threshold,eta_threshold,max_distance\n")
    );
    assert_eq!(written, stdout(&["table1", "--format", "csv"]));
}
