use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mfcontrol(args: &[&str], envs: &[(&str, &Path)], cwd: &Path) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mfcontrol"));
    cmd.args(args)
        .current_dir(cwd)
        .env_remove("MFCONTROL_OUT")
        .env_remove("MFCONTROL_SCENARIOS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn list_prints_every_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let o = mfcontrol(&["list"], &[], dir.path());
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 11);
    assert!(text.contains("heatex_fouling_pid"));
}

#[test]
fn run_writes_to_the_requested_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results");
    let o = mfcontrol(
        &["run", "fig01_friction_ipi", "--out", out.to_str().unwrap()],
        &[],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in [
        "fig01_friction_ipi.csv",
        "fig01_friction_ipi_output.svg",
        "fig01_friction_ipi_control.svg",
    ] {
        assert!(out.join(f).is_file(), "{f}");
    }
}

#[test]
fn output_directory_defaults_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("env-out");
    let o = mfcontrol(&["run", "fig03_harmonic"], &[("MFCONTROL_OUT", &out)], dir.path());
    assert!(o.status.success());
    assert!(out.join("fig03_harmonic.csv").is_file());
}

#[test]
fn seed_override_changes_noisy_runs_only_through_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let read = |seed: &str, sub: &str| {
        let out = dir.path().join(sub);
        let o = mfcontrol(
            &[
                "run",
                "mass_spring_ipi_noise",
                "--seed",
                seed,
                "--out",
                out.to_str().unwrap(),
            ],
            &[],
            dir.path(),
        );
        assert!(o.status.success());
        fs::read(out.join("mass_spring_ipi_noise.csv")).unwrap()
    };
    assert_eq!(read("5", "a"), read("5", "b"));
    assert_ne!(read("5", "a"), read("6", "c"));
}

#[test]
fn run_accepts_a_file_path() {
    let dir = tempfile::tempdir().unwrap();
    let src = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/fig01_friction_ipi.toml");
    let text = fs::read_to_string(src)
        .unwrap()
        .replace("fig01_friction_ipi", "from_file");
    let path = dir.path().join("from_file.toml");
    fs::write(&path, text).unwrap();
    let o = mfcontrol(&["run", path.to_str().unwrap(), "--out", "o"], &[], dir.path());
    assert!(o.status.success());
    assert!(dir.path().join("o/from_file.csv").is_file());
}

#[test]
fn unknown_scenario_fails() {
    let dir = tempfile::tempdir().unwrap();
    let o = mfcontrol(&["run", "does_not_exist"], &[], dir.path());
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("does_not_exist"));
}

#[test]
fn validate_reports_good_and_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/heatex_ipi.toml");
    let o = mfcontrol(&["validate", good], &[], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("heatex_ipi: ok"));

    let o = mfcontrol(&["validate", good, "--print"], &[], dir.path());
    assert!(stdout(&o).contains("[integrator]"));

    let bad = dir.path().join("bad.toml");
    fs::write(
        &bad,
        fs::read_to_string(good).unwrap().replace("alpha = 18.0", "alpha = 0.0"),
    )
    .unwrap();
    let o = mfcontrol(&["validate", bad.to_str().unwrap()], &[], dir.path());
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha"));
}

#[test]
fn custom_scenario_directory_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let custom = dir.path().join("custom");
    fs::create_dir(&custom).unwrap();
    let src = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/fig03_harmonic.toml");
    fs::write(
        custom.join("extra.toml"),
        fs::read_to_string(src).unwrap().replace("fig03_harmonic", "extra"),
    )
    .unwrap();
    let o = mfcontrol(&["list"], &[("MFCONTROL_SCENARIOS", &custom)], dir.path());
    assert!(stdout(&o).contains("extra"));
    assert_eq!(stdout(&o).lines().count(), 12);
}

/// The whole registry runs; divergent scenarios make the exit code nonzero
/// but every scenario still leaves its files and a summary line.
#[test]
fn run_all_writes_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = mfcontrol(&["run", "--all", "--out", "all"], &[], dir.path());
    let summary = fs::read_to_string(dir.path().join("all/summary.txt")).unwrap();
    assert_eq!(summary.lines().count(), 11);
    let failures = summary.lines().filter(|l| l.contains("failed")).count();
    assert_eq!(o.status.success(), failures == 0);
    let csvs = fs::read_dir(dir.path().join("all"))
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "csv"))
        .count();
    assert_eq!(csvs, 10);
}
