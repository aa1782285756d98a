//! End-to-end exercises of the command-line surface: subcommands, exit
//! codes, and output determinism.

use std::path::PathBuf;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_uowc-secrecy");

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("uowc-secrecy-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn small_config(dir: &PathBuf, extra: &str) -> PathBuf {
    let out = Command::new(BIN).args(["preset", "fig3"]).output().unwrap();
    assert!(out.status.success());
    let mut text = String::from_utf8(out.stdout).unwrap();
    text = text
        .replace("allow_placeholder_water = false", "allow_placeholder_water = true")
        .replace("mc_samples = 200000", "mc_samples = 20000")
        .replace("points = 9", "points = 2")
        .replace(
            "output = \"fig3.csv\"",
            &format!("output = \"{}\"", dir.join("fig3.csv").display()),
        );
    text.insert_str(0, extra);
    let path = dir.join("config.toml");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn preset_emits_parseable_toml_and_rejects_unknown_names() {
    let out = Command::new(BIN).args(["preset", "fig12"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let parsed: toml::Value = toml::from_str(&text).unwrap();
    assert!(parsed.get("scenario").is_some());

    let out = Command::new(BIN).args(["preset", "fig99"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_writes_deterministic_csv() {
    let dir = temp_dir("sweep");
    let cfg = small_config(&dir, "");
    let run = || {
        let out = Command::new(BIN).args(["sweep"]).arg(&cfg).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(dir.join("fig3.csv")).unwrap()
    };
    let first = run();
    let second = run();
    assert_eq!(first, second, "CSV must be byte-identical across runs");
    assert!(String::from_utf8(first).unwrap().starts_with("family,axis_db,axis_linear,"));
}

#[test]
fn placeholder_table_refused_without_opt_in() {
    let dir = temp_dir("placeholder");
    let cfg = small_config(&dir, "");
    let text = std::fs::read_to_string(&cfg)
        .unwrap()
        .replace("allow_placeholder_water = true", "allow_placeholder_water = false");
    std::fs::write(&cfg, text).unwrap();
    let out = Command::new(BIN).args(["sweep"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.join("fig3.csv").exists(), "no file may be written on config errors");
}

#[test]
fn malformed_config_is_a_config_error() {
    let dir = temp_dir("malformed");
    let path = dir.join("bad.toml");
    std::fs::write(&path, "this is not toml = = =").unwrap();
    let out = Command::new(BIN).args(["sweep"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_passes_clean_and_fails_canary() {
    let dir = temp_dir("validate");
    let cfg = small_config(&dir, "");
    let out = Command::new(BIN)
        .args(["validate"])
        .arg(&cfg)
        .args(["--profile", "default"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = String::from_utf8(out.stdout).unwrap();
    assert!(report.contains("pass"));

    let canary = small_config(&dir, "canary_mc_relay_snr_scale = 2.0\n");
    let out = Command::new(BIN)
        .args(["validate"])
        .arg(&canary)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("fail:"));

    let out = Command::new(BIN)
        .args(["validate"])
        .arg(&cfg)
        .args(["--profile", "bogus"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mc_subcommand_reports_all_metrics() {
    let dir = temp_dir("mc");
    let cfg = small_config(&dir, "");
    let out = Command::new(BIN).args(["mc"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    for metric in ["asc_nats", "sop_exact", "sop_lower", "spsc", "harmonic_sop_exact"] {
        assert!(text.contains(metric), "missing {metric} in:\n{text}");
    }
}
