//! End-to-end tests of the binary: exit codes, artifact formats, config
//! validation and summary determinism.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_h3nls"))
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

/// Small, fast configs for the exercised scenarios.
fn fast_simulate_conf(dir: &Path) -> PathBuf {
    let path = dir.join("sim.conf");
    write(
        &path,
        "[run]\nscenario = simulate\nseed = 3\n\n[grid]\nr_max = 20\nn = 512\n\n\
         [time]\ndt = 2e-3\nt_end = 0.1\nrecord_every = 10\n\n[data]\nsigma = 1.2\n",
    );
    path
}

#[test]
fn list_scenarios_is_stable_and_complete() {
    let out = bin().arg("list-scenarios").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let names: Vec<&str> = text.lines().collect();
    assert_eq!(
        names,
        [
            "simulate",
            "transform-selftest",
            "dispersive-test",
            "morawetz-test",
            "sobolev-test",
            "euclid-compare",
            "profile-extract",
            "sweep"
        ]
    );
}

#[test]
fn missing_config_exits_one() {
    let out = bin().args(["simulate", "--config", "/definitely/not/there.conf"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn invalid_dt_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("bad.conf");
    write(&conf, "[time]\ndt = 0\n");
    let out = bin()
        .args(["simulate", "--config"])
        .arg(&conf)
        .args(["--out"])
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_keys_are_rejected_before_running() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("bad.conf");
    write(&conf, "[grid]\nn = 512\nmystery = 1\n");
    let out = bin()
        .args(["simulate", "--config"])
        .arg(&conf)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("mystery"), "stderr: {stderr}");
    // nothing was written
    assert!(!dir.path().join("out").join("simulate-summary.json").exists());
}

#[test]
fn scenario_name_mismatch_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("sweepish.conf");
    write(&conf, "[run]\nscenario = sweep\n");
    let out = bin()
        .args(["simulate", "--config"])
        .arg(&conf)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn simulate_emits_expected_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let conf = fast_simulate_conf(dir.path());
    let out_dir = dir.path().join("out");
    let out = bin().args(["simulate", "--config"]).arg(&conf).arg("--out").arg(&out_dir).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let diagnostics = std::fs::read_to_string(out_dir.join("diagnostics.csv")).unwrap();
    let header = diagnostics.lines().next().unwrap();
    assert_eq!(header, "t,mass,energy,l6,z_increment,morawetz_action,boundary_mass");

    let trajectory = std::fs::read_to_string(out_dir.join("trajectory.csv")).unwrap();
    assert_eq!(trajectory.lines().next().unwrap(), "t,r,re_u,im_u");

    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("simulate-summary.json")).unwrap()).unwrap();
    assert_eq!(summary["schema_version"], 1);
    assert_eq!(summary["scenario"], "simulate");
    assert!(summary["pass"].as_bool().unwrap());
}

#[test]
fn summaries_are_byte_identical_for_same_config_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    let conf = fast_simulate_conf(dir.path());
    let strip_runtime = |text: &str| -> String {
        text.lines().filter(|l| !l.contains("runtime_seconds")).collect::<Vec<_>>().join("\n")
    };
    let mut outputs = Vec::new();
    for (i, threads) in [(0usize, "1"), (1, "4")] {
        let out_dir = dir.path().join(format!("out{i}"));
        let status = bin()
            .args(["simulate", "--config"])
            .arg(&conf)
            .arg("--out")
            .arg(&out_dir)
            .args(["--threads", threads])
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(strip_runtime(
            &std::fs::read_to_string(out_dir.join("simulate-summary.json")).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn env_overrides_choose_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let conf = fast_simulate_conf(dir.path());
    let out_dir = dir.path().join("env-out");
    let status = bin()
        .args(["simulate", "--config"])
        .arg(&conf)
        .env("H3NLS_OUT", &out_dir)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(out_dir.join("simulate-summary.json").exists());
}

#[test]
fn profile_extract_reads_manifests() {
    let dir = tempfile::tempdir().unwrap();
    // build a tiny hyperbolic-frame sequence and snapshot it
    let grid = h3nls::grid::RadialGrid::new(12.0, 1024).unwrap();
    let psi = h3nls::corpus::gaussian_bump(grid, h3nls::field::Geometry::Hyperbolic, 0.8, 0.0, 0.9);
    let seq = h3nls::profiles::synthetic_hyperbolic_sequence(&psi, &[0.0, 0.1, 0.2, 0.3]);
    let mut manifest = String::from("# snapshots\n");
    for (i, f) in seq.iter().enumerate() {
        let name = format!("snap-{i}.h3f");
        f.write_binary(&dir.path().join(&name)).unwrap();
        manifest.push_str(&name);
        manifest.push('\n');
    }
    let manifest_path = dir.path().join("sequence.txt");
    write(&manifest_path, &manifest);
    let conf = dir.path().join("profiles.conf");
    write(
        &conf,
        &format!(
            "[run]\nscenario = profile-extract\n\n[profiles]\nsource = manifest\nmanifest = {}\n\
             delta_threshold = 0.08\nj_max = 2\nr_max = 12\nn = 1024\n",
            manifest_path.display()
        ),
    );
    let out_dir = dir.path().join("out");
    let out = bin()
        .args(["profile-extract", "--config"])
        .arg(&conf)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(out_dir.join("profile-decomposition.json").exists());
    assert!(out_dir.join("profile-00.h3f").exists());
}
