use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fdsat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fdsat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn reference(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(name)
}

fn fu_ud() -> String {
    reference("fu_ud_reference.toml")
        .to_str()
        .unwrap()
        .to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn assess_json_is_parseable_and_rounded() {
    let o = fdsat(&["assess", "--scenario", &fu_ud(), "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let se = v["result"]["comparison"]["se_fd_bps_hz"].as_f64().unwrap();
    assert_eq!(se, (se * 1e6).round() / 1e6);
    assert_eq!(v["scenario"]["use_case"], "FU-UD");
    assert!(v["assumptions"].as_array().unwrap().len() >= 3);
}

#[test]
fn assess_sic_override() {
    let o = fdsat(&[
        "assess",
        "--scenario",
        &fu_ud(),
        "--sic",
        "80",
        "--format",
        "csv",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.lines().nth(1).unwrap().starts_with("80.000000,"));
}

#[test]
fn sweep_defaults_to_csv_on_stdout() {
    let o = fdsat(&["sweep", "--scenario", &fu_ud(), "--sic-range", "60:80:10"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "sic_db,se_fdd_bps_hz,se_fd_bps_hz,gain_percent,residual_si_dbw"
    );
    assert_eq!(lines.len(), 4);
}

#[test]
fn bad_range_is_usage_error() {
    let o = fdsat(&["sweep", "--scenario", &fu_ud(), "--sic-range", "80:60:10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("80:60:10"));
}

#[test]
fn plot_from_csv_matches_sweep_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let svg = dir.path().join("s.svg");
    let replot = dir.path().join("r.svg");
    let o = fdsat(&[
        "sweep",
        "--scenario",
        &fu_ud(),
        "--sic-range",
        "30:130:0.5",
        "--csv",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let o = fdsat(&[
        "plot",
        "--csv",
        csv.to_str().unwrap(),
        "--svg",
        replot.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        std::fs::read(&svg).unwrap(),
        std::fs::read(&replot).unwrap()
    );
}

#[test]
fn visibility_lists_passes() {
    let o = fdsat(&[
        "visibility",
        "--scenario",
        &fu_ud(),
        "--window-s",
        "7200",
        "--step-s",
        "30",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("gateway:") && out.contains("terminal:"));
    let o = fdsat(&[
        "visibility",
        "--scenario",
        &fu_ud(),
        "--window-s",
        "7200",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!v["gateway"].as_array().unwrap().is_empty());
}

#[test]
fn visibility_zero_window_rejected() {
    let o = fdsat(&["visibility", "--scenario", &fu_ud(), "--window-s", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("window_s"));
}

#[test]
fn unknown_key_reported_with_section() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x.toml");
    let text = std::fs::read_to_string(reference("fu_ud_reference.toml")).unwrap();
    std::fs::write(&p, text.replace("[duplex]\n", "[duplex]\nsic = 3\n")).unwrap();
    let o = fdsat(&["assess", "--scenario", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("sic") && err.contains("duplex"), "{err}");
}

#[test]
fn unwritable_output_is_io_error() {
    let o = fdsat(&[
        "sweep",
        "--scenario",
        &fu_ud(),
        "--sic-range",
        "60:80:10",
        "--csv",
        "/nonexistent/dir/x.csv",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn thread_env_variable() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_fdsat"))
            .args(["sweep", "--scenario", &fu_ud(), "--sic-range", "0:100:1"])
            .env("FDSAT_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    let four = run("4");
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(run("lots").status.code(), Some(1));
}

#[test]
fn every_reference_scenario_assesses() {
    for f in [
        "fu_ud_reference.toml",
        "uu_fd_reference.toml",
        "satl_reference.toml",
    ] {
        let o = fdsat(&["assess", "--scenario", reference(f).to_str().unwrap()]);
        assert!(o.status.success(), "{f}: {}", stderr(&o));
    }
}
