use std::process::Command;

use quiverdual::quiver::{build_paxy, quiver_equal, Quiver};

fn qd(args: &[&str], seed_env: Option<&str>) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qd"));
    cmd.args(args).env_remove("QD_SEED");
    if let Some(s) = seed_env {
        cmd.env("QD_SEED", s);
    }
    let out = cmd.output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn mutate_the_shipped_pax_quiver() {
    let path = format!("{}/data/pax_5_4_3.json", env!("CARGO_MANIFEST_DIR"));
    let (code, out, _) = qd(&["mutate", "--input", &path, "--node", "gauge"], None);
    assert_eq!(code, 0);
    assert!(quiver_equal(&Quiver::from_json(&out).unwrap(), &build_paxy(5, 4, 2).unwrap()));
}

#[test]
fn environment_seed_is_used_and_flag_wins() {
    let args = ["verify", "--suite", "propositions", "--m", "3", "--n", "2", "--format", "json", "--no-timing"];
    let seed_of = |out: &str| serde_json::from_str::<serde_json::Value>(out).unwrap()["config"]["seed"].as_u64();
    let (_, out, _) = qd(&args, Some("99"));
    assert_eq!(seed_of(&out), Some(99));
    let mut with_flag = args.to_vec();
    with_flag.extend(["--seed", "5"]);
    let (_, out, _) = qd(&with_flag, Some("99"));
    assert_eq!(seed_of(&out), Some(5));
    let (code, _, err) = qd(&args, Some("not-a-number"));
    assert_eq!(code, 2);
    assert!(err.contains("QD_SEED"));
}

#[test]
fn scenario_output_is_a_runnable_config() {
    let dir = tempfile::tempdir().unwrap();
    let (code, toml, _) = qd(&["scenario", "--name", "GN_3FOLD"], None);
    assert_eq!(code, 0);
    let path = dir.path().join("gn.toml");
    std::fs::write(&path, toml).unwrap();
    let (code, out, _) = qd(
        &["verify", "--config", path.to_str().unwrap(), "--suite", "theorems", "--fixed-points", "standard", "--points", "4"],
        None,
    );
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("thm.building_block.equal (m=4, n=4, r=2)"));
}

#[test]
fn report_file_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let (code, _, err) = qd(
        &["verify", "--suite", "determinantal", "--format", "json", "--output", report.to_str().unwrap()],
        None,
    );
    assert_eq!(code, 0);
    assert!(err.contains("7 checks, 0 failed"));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["schema"], 1);
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "points = \"many\"\n").unwrap();
    assert_eq!(qd(&["verify", "--config", bad.to_str().unwrap()], None).0, 2);
    assert_eq!(qd(&["verify", "--config", "/nonexistent.toml"], None).0, 2);
}

#[test]
fn classify_as_json() {
    let (code, out, _) = qd(&["classify-cy", "--format", "json"], None);
    assert_eq!(code, 0);
    let json: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(json["triples"].as_array().unwrap().len(), 3);
}
