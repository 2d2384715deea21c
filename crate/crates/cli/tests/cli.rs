use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use alexpand::expansion::Expansion;
use alexpand::metric::{adjugate_inverse, metric_inverse, symbolic_residual};
use alexpand::rational::frac;
use alexpand::serial::{metric_to_json, to_json_string};
use alexpand_cli::commands::{cmd_verify, load_expansion};
use alexpand_cli::config::parse_config;
use serde_json::Value;
use tempfile::TempDir;

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn alexpand(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alexpand")).args(args).output().expect("spawn alexpand")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn expand(cfg: &str, out: &Path) -> Output {
    alexpand(&["expand", "--config", config(cfg).to_str().unwrap(), "--out", out.to_str().unwrap()])
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn golden_single_seed_run() {
    let dir = TempDir::new().unwrap();
    let o = expand("n5_single_seed.json", dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for (file, gold) in [("expansion.json", "n5_single_seed_expansion.json"), ("report.json", "n5_single_seed_report.json")] {
        let got = fs::read(dir.path().join(file)).unwrap();
        let want = fs::read(golden(gold)).unwrap();
        assert!(got == want, "{file} differs from the golden copy");
    }
}

#[test]
fn golden_expansion_is_consistent() {
    let (u, order) = load_expansion(&golden("n5_single_seed_expansion.json")).unwrap();
    assert_eq!(order, 12);
    assert!(symbolic_residual(&u, order).unwrap().is_zero());
    assert_eq!(metric_inverse(&u, order).unwrap(), adjugate_inverse(&u, order).unwrap());
    let report = read_json(&golden("n5_single_seed_report.json"));
    assert!(report["invariants"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    assert_eq!(report["log_terms"].as_array().unwrap().len(), 0);
}

#[test]
fn expand_is_deterministic() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    assert!(expand("n5_order8.json", a.path()).status.success());
    assert!(expand("n5_order8.json", b.path()).status.success());
    for file in ["expansion.json", "report.json"] {
        assert!(fs::read(a.path().join(file)).unwrap() == fs::read(b.path().join(file)).unwrap(), "{file}");
    }
}

#[test]
fn timing_is_opt_in() {
    let dir = TempDir::new().unwrap();
    let o = alexpand(&[
        "expand",
        "--config",
        config("n5_single_seed.json").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--timing",
    ]);
    assert!(o.status.success());
    let report = read_json(&dir.path().join("report.json"));
    // stage 1 is the seed data and is not timed
    assert!(report["stages"].as_array().unwrap().iter().skip(1).all(|s| s["wall_ms"].is_u64()));
    let plain = read_json(&golden("n5_single_seed_report.json"));
    assert!(plain["stages"][0].get("wall_ms").is_none());
}

#[test]
fn flat_run_and_zero_proxy() {
    let dir = TempDir::new().unwrap();
    assert!(expand("flat.json", dir.path()).status.success());
    let expansion = dir.path().join("expansion.json");
    assert!(load_expansion(&expansion).unwrap().0.is_zero());
    let o = alexpand(&["verify", "--config", config("flat.json").to_str().unwrap(), "--expansion", expansion.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary = read_json(&dir.path().join("verify.json"));
    assert_eq!(summary["status"], "identically-zero proxy");
    assert!(summary["slope"].is_null());
}

#[test]
fn certified_expansion_verifies() {
    let dir = TempDir::new().unwrap();
    assert!(expand("n5_order8.json", dir.path()).status.success());
    let o = alexpand(&[
        "verify",
        "--config",
        config("n5_order8.json").to_str().unwrap(),
        "--expansion",
        dir.path().join("expansion.json").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary = read_json(&dir.path().join("verify.json"));
    assert_eq!(summary["status"], "decaying");
    assert!(summary["slope"].as_f64().unwrap() <= -9.9);
    assert_eq!(summary["fd_check"]["passed"], true);

    let mut rdr = csv::Reader::from_path(dir.path().join("samples.csv")).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["r", "direction_id", "entry_i", "entry_j", "value"]);
    let rows = rdr.records().count();
    // 4 radii, 5 directions, 15 upper-triangle entries
    assert_eq!(rows, 4 * 5 * 15);
}

#[test]
fn corrupted_expansion_is_flagged() {
    let dir = TempDir::new().unwrap();
    assert!(expand("n5_order8.json", dir.path()).status.success());
    let path = dir.path().join("expansion.json");
    let (mut u, order) = load_expansion(&path).unwrap();
    let bumped = u.get(1, 2).add(&Expansion::radial(5, frac(1, 100), -5, 0));
    u.set_symmetric(1, 2, bumped);
    fs::write(&path, to_json_string(&metric_to_json(&u, order))).unwrap();
    let o = alexpand(&["verify", "--config", config("n5_order8.json").to_str().unwrap(), "--expansion", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("slope violation"), "{}", stderr(&o));
    let summary = read_json(&dir.path().join("verify.json"));
    assert_eq!(summary["status"], "violation");
    assert!(summary["worst"]["i"].is_u64());
}

#[test]
fn verify_round_trip_through_files() {
    let dir = TempDir::new().unwrap();
    let cfg = parse_config(&config("n5_single_seed.json")).unwrap();
    let first = cmd_verify(&cfg, &golden("n5_single_seed_expansion.json"), Some(dir.path())).unwrap();
    assert!(first.summary.success());
    let (u, order) = load_expansion(&golden("n5_single_seed_expansion.json")).unwrap();
    let copy = dir.path().join("copy.json");
    fs::write(&copy, to_json_string(&metric_to_json(&u, order))).unwrap();
    assert!(fs::read(&copy).unwrap() == fs::read(golden("n5_single_seed_expansion.json")).unwrap());
    let second = cmd_verify(&cfg, &copy, Some(dir.path())).unwrap();
    assert_eq!(first.summary, second.summary);
}

#[test]
fn four_dimensional_logs_are_reported() {
    let dir = TempDir::new().unwrap();
    let o = expand("n4_logs.json", dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(String::from_utf8_lossy(&o.stdout).contains("log terms: sigma = -6 logpow = 1"));
    let report = read_json(&dir.path().join("report.json"));
    let logs = report["log_terms"].as_array().unwrap();
    assert!(!logs.is_empty());
    assert!(logs.iter().all(|l| l["sigma"].as_i64().unwrap() <= -6 && l["logpow"].as_u64().unwrap() >= 1));

    let k = alexpand(&["kelvin", "--expansion", dir.path().join("expansion.json").to_str().unwrap(), "--n", "4"]);
    assert_eq!(k.status.code(), Some(2));
    assert!(stderr(&k).contains("log terms present"));
    assert!(stderr(&k).contains("sigma=-6 logpow=1"));
}

#[test]
fn kelvin_six_dimensional() {
    let dir = TempDir::new().unwrap();
    assert!(expand("n6_order10.json", dir.path()).status.success());
    let out = dir.path().join("kelvin.json");
    let o = alexpand(&[
        "kelvin",
        "--expansion",
        dir.path().join("expansion.json").to_str().unwrap(),
        "--n",
        "6",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let k = read_json(&out);
    assert_eq!(k["polynomial"], true);
    let entries = k["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 21);
    for e in entries {
        assert_eq!(e["kind"], "polynomial");
        for m in e["polynomial"].as_array().unwrap() {
            let degree: u64 = m["exponents"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).sum();
            assert!(degree > 0 && degree <= 6, "{m}");
        }
    }

    let printed = alexpand(&["kelvin", "--expansion", dir.path().join("expansion.json").to_str().unwrap(), "--n", "6"]);
    assert_eq!(printed.stdout, fs::read(&out).unwrap());

    let wrong = alexpand(&["kelvin", "--expansion", dir.path().join("expansion.json").to_str().unwrap(), "--n", "5"]);
    assert_eq!(wrong.status.code(), Some(2));
}

#[test]
fn kelvin_rejects_odd_dimension() {
    let o = alexpand(&["kelvin", "--expansion", golden("n5_single_seed_expansion.json").to_str().unwrap(), "--n", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("odd dimension"));
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("config.json");
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn bad_configs_exit_with_code_two() {
    let dir = TempDir::new().unwrap();
    let cases = [
        (r#"{"n": 5, "target_order": 8, "seeds": {"2": [{"i": 1, "j": 1, "harmonic": [{"exponents": [2,0,0,0,0], "coeff": "1"}]}]}}"#, "not harmonic"),
        (r#"{"n": 5, "target_order": 8, "seeds": {"1": [{"i": 1, "j": 1, "harmonic": [{"exponents": [1,1,0,0,0], "coeff": "1"}]}]}}"#, "degree mismatch"),
        (r#"{"n": 5, "target_order": 8, "seeds": {"1": [{"i": 3, "j": 2, "harmonic": [{"exponents": [1,0,0,0,0], "coeff": "1"}]}]}}"#, "i <= j"),
        (r#"{"n": 5, "target_order": 3}"#, "below n - 1"),
        (r#"{"n": 4, "target_order": 9}"#, "max_logpow"),
        (r#"{"n": 5, "target_order": 8, "colour": 1}"#, "malformed"),
    ];
    for (text, needle) in cases {
        let p = write_config(dir.path(), text);
        let o = alexpand(&["expand", "--config", p.to_str().unwrap(), "--out", dir.path().join("out").to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{text}");
        assert!(stderr(&o).contains(needle), "{text}: {}", stderr(&o));
    }
    assert!(!dir.path().join("out").exists());
}

#[test]
fn selfcheck_passes() {
    let o = alexpand(&["selfcheck", "--trials", "20", "--seed-rng", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(stdout.lines().filter(|l| l.starts_with("PASS")).count(), 6);
}
