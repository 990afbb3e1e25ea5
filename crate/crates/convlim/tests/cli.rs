//! End-to-end checks of the `convlim` binary against description files.

use std::process::{Command, Output};

use convlim::describe::{self, EventDesc, TowerDesc};

fn convlim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_convlim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture_b_file(dir: &std::path::Path, with_tower: bool) -> std::path::PathBuf {
    let mut desc = describe::fixture_b_description();
    if with_tower {
        desc.tower = Some(TowerDesc {
            levels: vec![vec!["0".into(), "2".into()], vec!["0".into(), "1".into(), "2".into()]],
            events: vec![EventDesc {
                from: "0".into(),
                to: "2".into(),
                outcomes: vec!["1".into()],
            }],
        });
    }
    let path = dir.join("system.json");
    std::fs::write(&path, describe::serialize(&desc)).unwrap();
    path
}

#[test]
fn verify_runs_every_suite_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let file = fixture_b_file(dir.path(), true);
    let json = dir.path().join("reports.json");
    let out = convlim(&[
        "verify",
        file.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{stdout}");
    assert!(stdout.contains("PASS"));
    assert!(!stdout.contains("FAIL"));
    let reports: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let suites: Vec<&str> = reports
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["suite"].as_str().unwrap())
        .collect();
    assert!(suites.contains(&"axioms"));
    assert!(suites.contains(&"tower"));
}

#[test]
fn verify_selects_a_single_suite() {
    let dir = tempfile::tempdir().unwrap();
    let file = fixture_b_file(dir.path(), false);
    let out = convlim(&["verify", file.to_str().unwrap(), "--suite", "flow"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("flow"));
}

#[test]
fn verify_rejects_an_unknown_suite() {
    let dir = tempfile::tempdir().unwrap();
    let file = fixture_b_file(dir.path(), false);
    let out = convlim(&["verify", file.to_str().unwrap(), "--suite", "bogus"]);
    assert!(!out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("bogus"));
}

#[test]
fn export_koopman_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let file = fixture_b_file(dir.path(), false);
    let out_path = dir.path().join("koopman.json");
    let out = convlim(&[
        "export",
        file.to_str().unwrap(),
        "--what",
        "koopman",
        "--triple",
        "0,1,2",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    // Koopman of mult(0,1,2) maps functions on Omega(0,2) (3 outcomes) to
    // functions on the product Omega(0,1) x Omega(1,2) (9 outcomes).
    assert_eq!(value["operator"]["rows"], 9);
    assert_eq!(value["operator"]["cols"], 3);
}

#[test]
fn export_flow_laws() {
    let dir = tempfile::tempdir().unwrap();
    let file = fixture_b_file(dir.path(), false);
    let out_path = dir.path().join("laws.json");
    let out = convlim(&[
        "export",
        file.to_str().unwrap(),
        "--what",
        "flow-laws",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let law = value["laws"]["0,2"].as_array().unwrap();
    assert_eq!(law[1][0], "1");
    assert_eq!(law[1][1], "1/2");
}

#[test]
fn sample_writes_reproducible_csv() {
    let dir = tempfile::tempdir().unwrap();
    let file = fixture_b_file(dir.path(), false);
    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    for path in [&csv_a, &csv_b] {
        let out = convlim(&[
            "sample",
            file.to_str().unwrap(),
            "--from",
            "0",
            "--to",
            "2",
            "-n",
            "50",
            "--seed",
            "11",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let a = std::fs::read_to_string(&csv_a).unwrap();
    let b = std::fs::read_to_string(&csv_b).unwrap();
    assert_eq!(a, b);
    assert!(a.starts_with("# sampler: chacha8"));
    assert_eq!(a.lines().filter(|l| !l.starts_with('#')).count(), 51); // header + 50 rows
}

#[test]
fn tower_subcommand_checks_consistency() {
    let dir = tempfile::tempdir().unwrap();
    let file = fixture_b_file(dir.path(), true);
    let out = convlim(&["tower", file.to_str().unwrap()]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{stdout}");
    assert!(stdout.contains("PASS"));
}

#[test]
fn verify_fails_on_a_corrupted_description() {
    let dir = tempfile::tempdir().unwrap();
    let mut desc = describe::fixture_b_description();
    desc.measures.as_mut().unwrap().generator =
        Some(vec!["1/2".into(), "1/3".into(), "0".into()]);
    let file = dir.path().join("bad.json");
    std::fs::write(&file, describe::serialize(&desc)).unwrap();
    let out = convlim(&["verify", file.to_str().unwrap()]);
    assert!(!out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("measures.generator"));
}
