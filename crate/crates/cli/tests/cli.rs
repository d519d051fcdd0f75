//! End-to-end tests driving the built `aep` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_aep"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 output")
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("aep_cli_{name}_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn bep_table_matches_reference_digits() {
    let csv = stdout(&["table4"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("gamma,exact,approx,rel_err"));
    let row: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(row[0], 0.5);
    assert!((row[1] - 2.6929e-1).abs() / 2.6929e-1 <= 1e-3);
    assert!((row[2] - 2.6918e-1).abs() / 2.6918e-1 <= 1e-3);
    assert_eq!(csv.lines().count(), 16); // header + 15 rows
}

#[test]
fn sep_table_has_21_rows_and_m_column() {
    let csv = stdout(&["table2"]);
    assert_eq!(csv.lines().count(), 22);
    assert!(csv.starts_with("m,gamma,exact,approx,rel_err\n"));
    assert!(csv.lines().nth(1).unwrap().starts_with("4,"));
    assert!(csv.lines().last().unwrap().starts_with("16,"));
}

#[test]
fn reruns_are_byte_identical() {
    let args = [
        "aep-sweep",
        "--scheme",
        "mpsk:4",
        "--kappa",
        "1",
        "--mu",
        "2",
        "--m",
        "1.3",
        "--grid",
        "0:10:5",
        "--samples",
        "2000",
        "--seed",
        "7",
        "--streams",
        "3",
    ];
    let a = stdout(&args);
    let b = stdout(&args);
    assert_eq!(a, b);
    assert!(a.starts_with("gamma_bar_db,closed,asymptotic,mc_mean,mc_std_error,quadrature\n"));
}

#[test]
fn json_format_mirrors_columns() {
    let js = stdout(&["chi", "--grid", "1:3:1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&js).unwrap();
    let cols = v.as_object().unwrap();
    assert_eq!(
        cols.keys().collect::<Vec<_>>(),
        ["gamma", "chi_exact", "chi_fitted"]
    );
    assert_eq!(cols["gamma"].as_array().unwrap().len(), 3);
}

#[test]
fn floats_round_trip_through_csv() {
    let csv = stdout(&["relerr", "--grid", "0.7:0.7:1"]);
    let row = csv.lines().nth(1).unwrap();
    let exact: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    // Recompute in-process and require bit equality after the round trip.
    let expect = aep_core::awgn::dqpsk_bep_exact(
        0.7,
        &aep_core::specfun::Tolerance {
            rel: 1e-10,
            abs: 1e-300,
            max_iter: 10_000,
        },
    )
    .unwrap();
    assert_eq!(exact.to_bits(), expect.to_bits());
}

#[test]
fn domain_errors_exit_2_with_json_diagnostics() {
    let out = run(&["aep-sweep", "--scheme", "mpsk:3"]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stderr).lines().last().unwrap())
            .expect("stderr is a JSON line");
    assert_eq!(err["error"], "domain");
}

#[test]
fn convergence_errors_exit_3() {
    let dir = tmpdir("conv");
    let cfg = dir.join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"quad": {"rel": 1e-15, "abs": 0.0, "max_iter": 2}}"#,
    )
    .unwrap();
    let out = run(&["table2", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stderr).lines().last().unwrap()).unwrap();
    assert_eq!(err["error"], "convergence");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn config_supplies_defaults_and_flags_override() {
    let dir = tmpdir("cfg");
    let cfg = dir.join("run.json");
    std::fs::write(
        &cfg,
        r#"{
            "command": "truncation",
            "params": {"kappa": 5.0, "mu": 2.3, "m": 4.7, "gamma_bar": 10.0},
            "grid": [1.0, 2.0, 3.0]
        }"#,
    )
    .unwrap();
    let base = stdout(&["truncation", "--config", cfg.to_str().unwrap()]);
    assert_eq!(base.lines().count(), 4);

    // A narrower grid from the command line wins over the config grid.
    let narrowed = stdout(&[
        "truncation",
        "--config",
        cfg.to_str().unwrap(),
        "--grid",
        "1:2:1",
    ]);
    assert_eq!(narrowed.lines().count(), 3);

    // Mismatched config command is rejected.
    let out = run(&["chi", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn sample_writes_dump_and_sidecar() {
    let dir = tmpdir("dump");
    let path = dir.join("snr.bin");
    let out = run(&[
        "sample",
        "--kappa",
        "2",
        "--mu",
        "2",
        "--m",
        "3",
        "--gamma-bar-db",
        "7",
        "--samples",
        "256",
        "--seed",
        "11",
        "--sampler",
        "physical",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let raw = std::fs::read(&path).unwrap();
    assert_eq!(raw.len(), 256 * 8);
    let first = f64::from_le_bytes(raw[..8].try_into().unwrap());
    assert!(first.is_finite() && first >= 0.0);
    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("snr.bin.json")).unwrap()).unwrap();
    assert_eq!(sidecar["n"], 256);
    assert_eq!(sidecar["seed"], 11);
    assert_eq!(sidecar["sampler"], "physical");
    assert_eq!(sidecar["params"]["kappa"], 2.0);
    // Sample dumps are deterministic too.
    let out2 = run(&[
        "sample",
        "--kappa",
        "2",
        "--mu",
        "2",
        "--m",
        "3",
        "--gamma-bar-db",
        "7",
        "--samples",
        "256",
        "--seed",
        "11",
        "--sampler",
        "physical",
        "--out",
        dir.join("snr2.bin").to_str().unwrap(),
    ]);
    assert!(out2.status.success());
    assert_eq!(raw, std::fs::read(dir.join("snr2.bin")).unwrap());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn out_flag_writes_file_instead_of_stdout() {
    let dir = tmpdir("outfile");
    let path = dir.join("chi.csv");
    let out = run(&["chi", "--grid", "1:2:1", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let content = std::fs::read_to_string(&path).unwrap();
    assert!(content.starts_with("gamma,chi_exact,chi_fitted\n"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn diversity_slope_column_reaches_mu() {
    let csv = stdout(&[
        "diversity",
        "--scheme",
        "dqpsk",
        "--kappa",
        "5",
        "--mu",
        "2",
        "--m",
        "4.7",
        "--grid",
        "40:60:10",
    ]);
    let last = csv.lines().last().unwrap();
    let slope: f64 = last.split(',').nth(2).unwrap().parse().unwrap();
    assert!((slope - 2.0).abs() <= 0.05, "slope {slope}");
}
