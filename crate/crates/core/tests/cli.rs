use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cascade"))
}

fn small_config() -> Value {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/configs/device.json")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["network"]["n_levels"] = json!(2);
    v["sweep"]["omega_A_MHz_over_2pi"] = json!({"start": 2.0, "stop": 30.0, "points": 8});
    v["sweep"]["epsilon_MHz_over_2pi"] = json!({"start": -10.0, "stop": 5.0, "points": 7});
    v["sweep"]["times_us"] = json!([0.0, 0.5, 1.0, 2.0, 5.0]);
    v["sweep"]["omega_B_over_omega_A"] = json!([1.0, 0.7]);
    v
}

fn write_config(dir: &Path, v: &Value) -> PathBuf {
    let p = dir.join("cfg.json");
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn run(mode: &str, cfg: &Path, out: &Path, extra: &[&str]) -> Output {
    bin().arg(mode).arg("--config").arg(cfg).arg("--out").arg(out).args(extra).output().unwrap()
}

fn read(p: PathBuf) -> String {
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

#[test]
fn unknown_mode_exits_with_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &small_config());
    let out = run("sweep-everything", &cfg, &dir.path().join("o"), &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sweep-everything"));
}

#[test]
fn bad_field_exits_with_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = small_config();
    v["network"]["eta_squared"] = json!(-0.1);
    let cfg = write_config(dir.path(), &v);
    let out = run("steady", &cfg, &dir.path().join("o"), &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("network.eta_squared"));
    assert!(!dir.path().join("o").exists());
}

#[test]
fn missing_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = run("steady", &dir.path().join("absent.json"), &dir.path().join("o"), &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_mode_field_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = small_config();
    v["sweep"].as_object_mut().unwrap().remove("epsilon_MHz_over_2pi");
    let cfg = write_config(dir.path(), &v);
    let out = run("sweep-landscape", &cfg, &dir.path().join("o"), &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sweep.epsilon_MHz_over_2pi"));
}

#[test]
fn steady_writes_result_and_meta() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &small_config());
    let o = dir.path().join("o");
    let out = run("steady", &cfg, &o, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(o.join("result.csv"));
    assert!(csv.starts_with("omega_A_MHz,omega_B_MHz,epsilon_MHz,concurrence,purity,fidelity_singlet,leakage\n"));
    let meta: Value = serde_json::from_str(&read(o.join("meta.json"))).unwrap();
    assert_eq!(meta["mode"], "steady");
    assert_eq!(meta["rows"], 1);
    assert_eq!(meta["config_sha256"].as_str().unwrap().len(), 64);
    assert_eq!(meta["version"], env!("CARGO_PKG_VERSION"));
    let c = meta["summary"]["concurrence"].as_f64().unwrap();
    assert!(c > 0.0 && c < 1.0);
}

#[test]
fn seed_override_changes_hash_only_through_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &small_config());
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(run("steady", &cfg, &a, &[]).status.success());
    assert!(run("steady", &cfg, &b, &["--seed", "99"]).status.success());
    let ma: Value = serde_json::from_str(&read(a.join("meta.json"))).unwrap();
    let mb: Value = serde_json::from_str(&read(b.join("meta.json"))).unwrap();
    assert_eq!(mb["seed"], 99);
    assert_ne!(ma["config_sha256"], mb["config_sha256"]);
    assert_eq!(read(a.join("result.csv")), read(b.join("result.csv")));
}

fn assert_reproducible(mode: &str, files: &[&str]) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &small_config());
    let runs: Vec<PathBuf> = ["1", "4", "4"]
        .iter()
        .enumerate()
        .map(|(k, w)| {
            let o = dir.path().join(format!("run{k}"));
            let out = run(mode, &cfg, &o, &["--workers", w]);
            assert!(out.status.success(), "{mode}: {}", String::from_utf8_lossy(&out.stderr));
            o
        })
        .collect();
    for f in files {
        let first = std::fs::read(runs[0].join(f)).unwrap();
        for r in &runs[1..] {
            assert_eq!(first, std::fs::read(r.join(f)).unwrap(), "{mode}: {f} differs");
        }
    }
}

#[test]
fn sweeps_are_byte_identical_across_worker_counts() {
    assert_reproducible("sweep-rabi", &["result.csv", "meta.json"]);
    assert_reproducible("sweep-landscape", &["result.csv", "ridge.csv", "meta.json"]);
    assert_reproducible("sweep-duration", &["result.csv", "meta.json"]);
}

#[test]
fn stochastic_modes_are_byte_identical_across_worker_counts() {
    assert_reproducible("tomography-demo", &["result.csv", "detectors.json", "meta.json"]);
    assert_reproducible("fit-t1", &["result.csv", "meta.json"]);
}

#[test]
fn zero_workers_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &small_config());
    let out = run("steady", &cfg, &dir.path().join("o"), &["--workers", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fit_t1_reads_csv_data() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("t1.csv");
    let mut text = String::from("time_us,pop_A,pop_B\n");
    for k in 0..40 {
        let t = 0.04 * k as f64;
        text.push_str(&format!("{t},{},{}\n", 0.9 * (-t / 0.25).exp() + 0.05, 0.9 * (-t / 0.1).exp() + 0.05));
    }
    std::fs::write(&data, text).unwrap();
    let mut v = small_config();
    v["calibration"]["data_csv"] = json!([data]);
    let cfg = write_config(dir.path(), &v);
    let o = dir.path().join("o");
    let out = run("fit-t1", &cfg, &o, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(o.join("result.csv"));
    let rows: Vec<Vec<String>> = csv.lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect();
    let t1_a: f64 = rows[0][1].parse().unwrap();
    let t1_b: f64 = rows[1][1].parse().unwrap();
    assert!((t1_a - 250.0).abs() < 1e-3 && (t1_b - 100.0).abs() < 1e-3, "{csv}");
}
