//! End-to-end checks of the compiled binary.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_droplets"))
}

fn run_ok(cmd: &mut Command) -> String {
    let out = cmd.output().expect("spawn binary");
    assert!(
        out.status.success(),
        "command failed:\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn simulate_then_render() {
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("run");
    run_ok(bin().args([
        "simulate",
        "--shape",
        "disk",
        "--radius",
        "0.5",
        "-L",
        "24",
        "--h",
        "inf",
        "--seed",
        "5",
        "--sample-times",
        "6,12",
        "--out",
    ])
    .arg(&run));
    assert!(run.join("trajectory.json").is_file());
    assert!(run.join("snapshot_000.rle.json").is_file());
    assert!(run.join("snapshot_001.pbm").is_file());

    let svg = dir.path().join("snap.svg");
    run_ok(bin()
        .arg("render")
        .arg("--input")
        .arg(run.join("snapshot_000.rle.json"))
        .arg("--out")
        .arg(&svg));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg"));
}

#[test]
fn compare_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("cfg.json");
    let out_dir = dir.path().join("out");
    std::fs::write(
        &cfg_path,
        format!(
            r#"{{
  "shape": {{"kind": "square"}},
  "l_values": [16],
  "h": "inf",
  "seeds": [1, 2],
  "sample_times": [0.5],
  "engine": "kmc",
  "compare": "square-explicit",
  "angles": 512,
  "out_dir": {}
}}"#,
            serde_json::to_string(&out_dir).unwrap()
        ),
    )
    .unwrap();
    let stdout = run_ok(bin().arg("compare").arg("--config").arg(&cfg_path));
    assert!(stdout.contains("hausdorff mean"));
    assert!(out_dir.join("results.json").is_file());
    assert!(out_dir.join("replicas.csv").is_file());
}

#[test]
fn particles_tasep_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tasep");
    run_ok(bin().args([
        "particles",
        "--system",
        "tasep",
        "--half-width",
        "60",
        "--horizon",
        "20",
        "--out",
    ])
    .arg(&out));
    let summary = std::fs::read_to_string(out.join("summary.json")).unwrap();
    assert!(summary.contains("jump_count"));
    let csv = std::fs::read_to_string(out.join("trajectory.csv")).unwrap();
    assert!(csv.starts_with("time,site,value"));
}

#[test]
fn limit_shapes_emit_polygons() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("shapes");
    run_ok(bin().args(["limit-shape", "--model", "drift", "--t", "0.5,1.5", "--out"]).arg(&out));
    let first = std::fs::read_to_string(out.join("drift_00.csv")).unwrap();
    assert!(first.lines().count() > 10);
    assert!(Path::new(&out).join("drift_01.csv").is_file());
}
