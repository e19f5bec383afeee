use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rollsim_cli::output::CSV_HEADER;

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(format!("{name}.toml"))
}

fn rollsim(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rollsim")).args(args).env("ROLLSIM_OUT", out).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn run_writes_csv_report_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let o = rollsim(dir.path(), &["run", scenario("pulse_frictionless").to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("pulse_frictionless.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some(CSV_HEADER));
    assert_eq!(csv.lines().count(), 10002);
    assert!(!csv.contains('\r'));
    let plot = std::fs::read_to_string(dir.path().join("pulse_frictionless.gp")).unwrap();
    assert!(plot.contains("multiplot layout 2,1"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("pulse_frictionless_report.json")).unwrap())
            .unwrap();
    assert_eq!(json["samples"], 10001);
}

#[test]
fn frictional_report_has_finite_settle_time() {
    let dir = tempfile::tempdir().unwrap();
    let o = rollsim(dir.path(), &["run", scenario("pulse_frictional").to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("pulse_frictional_report.json")).unwrap())
            .unwrap();
    let settle = json["settle"].as_array().unwrap();
    let core = settle.iter().find(|s| s["channel"] == "core_velocity").unwrap();
    let t = core["time"].as_f64().expect("finite settle time");
    assert!(t > 0.0 && t <= 6.0);
    assert!(stdout(&o).contains("settle"));
}

#[test]
fn malformed_number_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "name = \"bad\"\n[sim]\ndt = 1e-4x\n").unwrap();
    let o = rollsim(dir.path(), &["run", bad.to_str().unwrap()]);
    assert!(!o.status.success());
    let err = stderr(&o);
    assert!(err.contains("dt") && err.contains("line 3"), "{err}");

    std::fs::write(&bad, "name = \"bad\"\n[params]\nzeta = \"high\"\n").unwrap();
    let err = stderr(&rollsim(dir.path(), &["run", bad.to_str().unwrap()]));
    assert!(err.contains("zeta"), "{err}");
}

#[test]
fn invalid_values_are_reported_before_running() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "name = \"bad\"\n[params]\nms = -1.0\n").unwrap();
    let o = rollsim(dir.path(), &["run", bad.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("params"), "{}", stderr(&o));
    assert!(!dir.path().join("bad.csv").exists());
}

#[test]
fn check_accepts_shipped_data_and_lists_violations() {
    let dir = tempfile::tempdir().unwrap();
    let o = rollsim(dir.path(), &["check"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("0 violation"));

    let shipped = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data/locomotion.toml");
    let o = rollsim(dir.path(), &["check", shipped.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));

    let text = std::fs::read_to_string(&shipped).unwrap().replacen(
        "ft = \"GB_alpha\", tt = \"EP\"",
        "ft = \"MM_alpha\", tt = \"EP\"",
        1,
    );
    let corrupt = dir.path().join("corrupt.toml");
    std::fs::write(&corrupt, text).unwrap();
    let o = rollsim(dir.path(), &["check", corrupt.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(stdout(&o).contains("step"), "{}", stdout(&o));

    let o = rollsim(dir.path(), &["check", dir.path().join("missing.toml").to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("missing.toml"));
}

fn sweep_json(dir: &Path, param: &str, values: &str) -> serde_json::Value {
    let o = rollsim(
        dir,
        &["sweep", scenario("pulse_frictionless").to_str().unwrap(), "--param", param, "--values", values],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let path = dir.join(format!("pulse_frictionless-sweep-{param}.json"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn sphere_ripple(run: &serde_json::Value) -> &serde_json::Value {
    run["report"]["ripple"].as_array().unwrap().iter().find(|r| r["channel"] == "sphere_velocity").unwrap()
}

#[test]
fn torque_sweep_reports_each_run() {
    let dir = tempfile::tempdir().unwrap();
    let j = sweep_json(dir.path(), "tau", "1,2");
    let runs = j["runs"].as_array().unwrap();
    assert_eq!(runs.len(), 2);
    assert_eq!(runs[1]["value"], 2.0);
    assert!(sphere_ripple(&runs[1])["uphill_amplitude"].as_f64().unwrap() > 0.0);
    assert_eq!(j["comparisons"].as_array().unwrap().len(), 1);
    assert!(dir.path().join("pulse_frictionless-tau-2/pulse_frictionless-tau-2.csv").exists());
    assert!(dir.path().join("pulse_frictionless-sweep-tau.txt").exists());
}

// Expected: the same ripple amplitudes at τ = 1 and τ = 2 (within a factor
// of 2). The model's ripple grows with the drive level instead.
#[test]
fn torque_sweep_ripple_amplitudes_agree() {
    let dir = tempfile::tempdir().unwrap();
    let j = sweep_json(dir.path(), "tau", "1,2");
    let runs = j["runs"].as_array().unwrap();
    let (a, b) = (sphere_ripple(&runs[0]), sphere_ripple(&runs[1]));
    for key in ["uphill_amplitude", "downhill_amplitude"] {
        let (x, y) = (a[key].as_f64().unwrap(), b[key].as_f64().unwrap());
        println!("{key}: tau 1 -> {x:.4}, tau 2 -> {y:.4}");
        assert!(x.max(y) / x.min(y) < 2.0, "{key}: {x} vs {y}");
    }
}

#[test]
fn high_torque_sweep_flags_waving() {
    let dir = tempfile::tempdir().unwrap();
    let j = sweep_json(dir.path(), "tau", "6");
    assert_eq!(j["runs"][0]["report"]["waving"]["waving"], true);
}

#[test]
fn step_size_sweep_converges() {
    let dir = tempfile::tempdir().unwrap();
    let j = sweep_json(dir.path(), "dt", "1e-3,1e-4");
    let rms = j["comparisons"][0]["report"]["state_rms"].as_f64().unwrap();
    assert!(rms <= 1e-5, "{rms}");
}

#[test]
fn unknown_sweep_parameter_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = rollsim(
        dir.path(),
        &["sweep", scenario("pulse_frictionless").to_str().unwrap(), "--param", "mass", "--values", "1"],
    );
    assert!(!o.status.success());
    assert!(stderr(&o).contains("unknown sweep parameter"));
}

#[test]
fn repeated_runs_give_identical_csv() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        assert!(rollsim(d.path(), &["run", scenario("pulse_frictional").to_str().unwrap()]).status.success());
    }
    let read = |d: &tempfile::TempDir| std::fs::read(d.path().join("pulse_frictional.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
}
