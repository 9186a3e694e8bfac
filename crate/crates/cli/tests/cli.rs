use std::process::{Command, Output};

fn dmpa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dmpa"))
        .args(args)
        .output()
        .expect("running dmpa")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn optimize_prints_solution_json() {
    let out = dmpa(&["optimize", "--n", "16", "--snr-db", "15"]);
    assert!(out.status.success(), "{out:?}");
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let beta = v["beta_star"].as_f64().unwrap();
    assert!((beta - 0.587767).abs() < 1e-5, "{beta}");
    assert_eq!(v["case_label"], "INTERIOR_ROOT_2");
    assert_eq!(v["candidates"].as_array().unwrap().len(), 3);
}

#[test]
fn optimize_dump_includes_coefficients_and_rates() {
    let out = dmpa(&[
        "optimize",
        "--n",
        "4",
        "--snr-db",
        "-5",
        "--dump-coefficients",
        "--beta",
        "0.1",
    ]);
    assert!(out.status.success(), "{out:?}");
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // no noise reaches Bob, so L vanishes up to roundoff
    let c = &v["coefficients"];
    assert!(c["l"].as_f64().unwrap().abs() <= 1e-20 * c["i"].as_f64().unwrap().abs());
    assert!((v["snr_db"].as_f64().unwrap() + 5.0).abs() < 1e-12);
    let at_beta = v["rates_at_beta"]["secrecy_rate"].as_f64().unwrap();
    let star = v["solution"]["secrecy_rate_star"].as_f64().unwrap();
    assert!(star >= at_beta);
}

#[test]
fn sweep_beta_csv_layout() {
    let out = dmpa(&[
        "sweep-beta",
        "--n",
        "4",
        "--snr-db",
        "15",
        "--beta",
        "grid:11",
    ]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "n_antennas,snr_db,beta,secrecy_rate,beta_star,secrecy_rate_star,case_label,gain_percent"
    );
    // 11 grid rows plus the optimum row
    assert_eq!(lines.len(), 13);
    assert!(lines[12].contains("INTERIOR_ROOT_2"));
    assert!(!text.contains('\r'));
}

#[test]
fn sweep_n_reports_gain() {
    let out = dmpa(&["sweep-n", "--n", "4,64", "--beta", "0.1"]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert_eq!(row.len(), 8);
        let gain: f64 = row[7].parse().unwrap();
        assert!((0.0..100.0).contains(&gain));
    }
}

#[test]
fn json_format() {
    let out = dmpa(&[
        "sweep-snr",
        "--n",
        "16",
        "--snr-db=-10:10:5",
        "--format",
        "json",
    ]);
    assert!(out.status.success(), "{out:?}");
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0]["beta_star"], 1.0);
    assert_eq!(rows[0]["case_label"], "ENDPOINT_ONE");
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scenario.toml");
    std::fs::write(
        &path,
        "n_antennas = 8\ntheta_bob_deg = 60.0\ntheta_eve_deg = 100.0\n",
    )
    .unwrap();
    let path = path.to_str().unwrap();

    let from_file = dmpa(&["optimize", "--config", path, "--dump-coefficients"]);
    assert!(from_file.status.success(), "{from_file:?}");
    let v: serde_json::Value = serde_json::from_str(&stdout(&from_file)).unwrap();
    assert_eq!(v["scenario"]["n_antennas"], 8);
    assert_eq!(v["scenario"]["theta_eve_deg"], 100.0);

    let overridden = dmpa(&[
        "optimize",
        "--config",
        path,
        "--theta-e-deg",
        "120",
        "--dump-coefficients",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&overridden)).unwrap();
    assert_eq!(v["scenario"]["theta_bob_deg"], 60.0);
    assert_eq!(v["scenario"]["theta_eve_deg"], 120.0);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["optimize", "--bogus"][..],
        &["optimize", "--n", "1"],
        &["optimize", "--beta", "1.5"],
        &["sweep-beta", "--beta", "grid:1"],
        &["sweep-snr", "--beta", "0.5"],
        &["optimize", "--config", "/nonexistent/scenario.toml"],
    ] {
        let out = dmpa(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {out:?}");
    }
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "antennas = 8\n").unwrap();
    let out = dmpa(&["optimize", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sr.csv");
    let out = dmpa(&[
        "sweep-beta",
        "--n",
        "16",
        "--snr-db",
        "0",
        "--beta",
        "0,0.5,1",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(path).unwrap().lines().count(), 5);
}

#[test]
fn small_verify_passes() {
    let out = dmpa(&[
        "verify",
        "--runs",
        "20",
        "--seed",
        "3",
        "--grid-points",
        "20001",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = stdout(&out);
    assert!(text.contains("runs: 20"));
    assert!(text.trim_end().ends_with("PASS"));
}
