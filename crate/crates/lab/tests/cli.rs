use std::path::Path;
use std::process::Command;

use rmt_lab::cli::main_with;
use rmt_lab::presets::{preset, PRESET_NAMES};
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_rmt-lab");

const SMALL_OUTLIERS: &str = r#"{"experiment":"outliers","seed":4,"trials":2,
  "scenario":{"regime":{"kind":"additive_to_product"},"m":2,"n":20,"atoms":[{"kind":"rademacher"}],
              "perturbations":[{"kind":"diag","entries":[[3,0]]}]}}"#;

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn read_summary(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

#[test]
fn binary_runs_a_config_and_writes_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL_OUTLIERS);
    let out = tmp.path().join("run");
    let status = Command::new(BIN)
        .args(["outliers", "--config", &cfg, "--out"])
        .arg(&out)
        .env("RMT_LAB_THREADS", "2")
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    for f in ["figure.csv", "trials.csv", "matches.csv", "summary.json"] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let summary = read_summary(&out);
    assert_eq!(summary["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(summary["experiment"], "outliers");
    assert_eq!(summary["config"]["seed"], 4);
    assert_eq!(summary["config_hash"].as_str().unwrap().len(), 64);
    assert!(summary["started"].as_str().unwrap().ends_with('Z'));
    // the embedded config is the resolved one and reproduces the hash
    let embedded: rmt_lab::ExperimentConfig = serde_json::from_value(summary["config"].clone()).unwrap();
    assert_eq!(rmt_lab::output::config_hash(&embedded), summary["config_hash"]);
}

#[test]
fn overrides_apply_and_are_recorded() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL_OUTLIERS);
    let out = tmp.path().join("o");
    let code = main_with([
        "rmt-lab",
        "outliers",
        "--config",
        &cfg,
        "--seed",
        "99",
        "--trials",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let summary = read_summary(&out);
    assert_eq!(summary["config"]["seed"], 99);
    assert_eq!(summary["config"]["trials"], 3);
    let trials = std::fs::read_to_string(out.join("trials.csv")).unwrap();
    assert_eq!(trials.lines().count(), 4);
}

#[test]
fn usage_errors_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL_OUTLIERS);
    let bad = tmp.path().join("bad.json");
    std::fs::write(&bad, r#"{"experiment":"outliers","unknown_field":1}"#).unwrap();
    let cases: Vec<Vec<String>> = vec![
        vec!["spectrum".into(), "--config".into(), cfg.clone()],
        vec!["outliers".into(), "--config".into(), bad.display().to_string()],
        vec![
            "outliers".into(),
            "--config".into(),
            tmp.path().join("missing.json").display().to_string(),
        ],
        vec!["outliers".into()],
        vec!["outliers".into(), "--preset".into(), "no-such-preset".into()],
        vec![
            "outliers".into(),
            "--config".into(),
            cfg.clone(),
            "--trials".into(),
            "0".into(),
        ],
        vec!["frobnicate".into()],
        vec!["outliers".into(), "--seed".into(), "minus-one".into()],
    ];
    for args in cases {
        let full = std::iter::once("rmt-lab".to_string()).chain(args.iter().cloned());
        assert_eq!(main_with(full), 2, "{args:?}");
    }
    // an invalid scenario is a usage error too: perturbation norm above the bound
    let too_big = SMALL_OUTLIERS.replace("\"m\":2,", "\"m\":2,\"norm_bound\":2,");
    let p = tmp.path().join("norm.json");
    std::fs::write(&p, too_big).unwrap();
    assert_eq!(main_with(["rmt-lab", "outliers", "--config", p.to_str().unwrap()]), 2);
}

#[test]
fn bad_thread_cap_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL_OUTLIERS);
    let status = Command::new(BIN)
        .args(["outliers", "--config", &cfg, "--out"])
        .arg(tmp.path().join("x"))
        .env("RMT_LAB_THREADS", "lots")
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_with_one() {
    // the dense linearization check refuses m n > 400 at run time
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"experiment":"linearize","ensemble":{"m":3,"n":200,"atoms":[{"kind":"rademacher"}]}}"#,
    );
    let out = Command::new(BIN)
        .args(["linearize", "--config", &cfg, "--out"])
        .arg(tmp.path().join("x"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn presets_subcommand_lists_every_preset() {
    let out = Command::new(BIN).arg("presets").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in PRESET_NAMES {
        let kind = preset(name).unwrap().experiment;
        assert!(text.lines().any(|l| l == format!("{name}\t{kind}")), "{name}");
    }
}

#[test]
fn two_binary_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL_OUTLIERS);
    let run = |dir: &str, extra: &[&str]| {
        let status = Command::new(BIN)
            .args(["outliers", "--config", &cfg, "--out"])
            .arg(tmp.path().join(dir))
            .args(extra)
            .status()
            .unwrap();
        assert!(status.success());
    };
    run("a", &[]);
    run("b", &["--sequential"]);
    for f in ["figure.csv", "trials.csv", "matches.csv"] {
        let a = std::fs::read(tmp.path().join("a").join(f)).unwrap();
        let b = std::fs::read(tmp.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }
    let (sa, sb) = (read_summary(&tmp.path().join("a")), read_summary(&tmp.path().join("b")));
    assert_eq!(sa["files"], sb["files"]);
}
