use std::fs;
use std::path::Path;
use std::process::Command as Process;

use lbfe::cli::{BOUNDS_FILE, EVAL_FILE, SCHEME_FILE, VERIFY_FILE};
use lbfe::{parse_config, run_command, Command};
use serde_json::Value;

const Q8: &str = "q = 2\nt = 3\nk = 2\nblocks = 5\n";
const Q16_MAIN: &str = "q = 4\nt = 2\nk = 4\nepsilon = 3/4\ngamma = 1/4\ndelta = 1/2\nerasures = 1, 9\nblocks = 8\n";

fn read_json(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

fn binary(config: &str, command: &str, out: &Path) -> (i32, String) {
    let cfg = out.join("run.cfg");
    fs::write(&cfg, config).unwrap();
    let output = Process::new(env!("CARGO_BIN_EXE_lbfe"))
        .args(["--config", cfg.to_str().unwrap(), "--command", command, "--out", out.to_str().unwrap()])
        .args(["--seed", "11"])
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&output.stdout).into_owned() + &String::from_utf8_lossy(&output.stderr);
    (output.status.code().unwrap(), text)
}

#[test]
fn verify_small_field_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = binary(Q8, "verify", dir.path());
    assert_eq!(code, 0, "{text}");
    let suites = read_json(dir.path(), VERIFY_FILE);
    let rate_half = suites.as_array().unwrap().iter().find(|s| s["name"] == "rate-half-correctness").unwrap();
    assert_eq!(rate_half["cases"], 4096);
    assert_eq!(rate_half["failures"], 0);
}

#[test]
fn verify_main_scheme_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = parse_config(Q16_MAIN).unwrap();
    let report = run_command(Command::Verify, &config, dir.path(), Some(5)).unwrap();
    assert!(report.passed, "{}", report.summary);
    assert!(report.summary.contains("PASS main-scheme-with-erasures"), "{}", report.summary);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = binary("q = 4\nt = 2\nk = 4\nepsilon = 3/4\ngamma = 1/4\ndelta = 3/8\n", "verify", dir.path());
    assert_eq!(code, 2);
    assert!(text.contains("δ ≥ γ + 1/q"), "{text}");
    let (code, text) = binary("q = 2\nt = 3\nk = 2\nflavour = 1\n", "bounds", dir.path());
    assert_eq!(code, 2);
    assert!(text.contains("line 4") && text.contains("flavour"), "{text}");
}

#[test]
fn bounds_report_binding_value() {
    let dir = tempfile::tempdir().unwrap();
    let config = parse_config(Q8).unwrap();
    let report = run_command(Command::Bounds, &config, dir.path(), None).unwrap();
    assert!(report.passed);
    let file = read_json(dir.path(), BOUNDS_FILE);
    assert_eq!(file["binding_bits"], 4.0);
    assert_eq!(file["binding"], "obs:k+t-1");
    assert!(file["entries"].as_array().unwrap().iter().all(|e| e["name"] != "prop"));

    // the dual of RS[5,2] over GF(8) is small enough to enumerate for d*
    let short = parse_config("q = 2\nt = 3\nk = 2\nn = 5\ntarget = 3, 6\n").unwrap();
    run_command(Command::Bounds, &short, dir.path(), None).unwrap();
    let file = read_json(dir.path(), BOUNDS_FILE);
    assert!(file["entries"].as_array().unwrap().iter().any(|e| e["name"] == "prop"));
}

#[test]
fn bench_shows_savings_at_t_10() {
    let dir = tempfile::tempdir().unwrap();
    let config = parse_config("q = 2\nt = 3\nk = 2\nbench_t_min = 3\nbench_t_max = 10\n").unwrap();
    let report = run_command(Command::Bench, &config, dir.path(), None).unwrap();
    assert!(report.passed, "{}", report.summary);
    let rows: Vec<Value> = serde_json::from_str(&fs::read_to_string(dir.path().join("bench.json")).unwrap()).unwrap();
    assert_eq!(rows.len(), 8);
    let last = rows.last().unwrap();
    assert_eq!((last["t"].as_u64(), last["k"].as_u64()), (Some(10), Some(256)));
    assert_eq!((last["bits_scheme"].as_u64(), last["bits_naive"].as_u64()), (Some(1024), Some(2560)));
    assert_eq!(rows[0]["bits_scheme"], 8);
}

#[test]
fn simulate_reloads_built_scheme_bit_for_bit() {
    let fresh = tempfile::tempdir().unwrap();
    let saved = tempfile::tempdir().unwrap();
    let config = parse_config(Q16_MAIN).unwrap();

    let direct = run_command(Command::Simulate, &config, fresh.path(), Some(3)).unwrap();
    assert!(direct.passed, "{}", direct.summary);

    run_command(Command::BuildScheme, &config, saved.path(), Some(3)).unwrap();
    assert!(saved.path().join(SCHEME_FILE).exists());
    assert!(saved.path().join("witness.json").exists());
    let reloaded = run_command(Command::Simulate, &config, saved.path(), Some(3)).unwrap();
    assert!(reloaded.passed);

    let a = fs::read(fresh.path().join(EVAL_FILE)).unwrap();
    let b = fs::read(saved.path().join(EVAL_FILE)).unwrap();
    assert_eq!(a, b);
    let records = read_json(saved.path(), EVAL_FILE);
    for r in records.as_array().unwrap() {
        assert_eq!(r["bits_downloaded"], 14 * 3 * 2);
        let contacted: Vec<u64> =
            r["nodes_contacted"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
        assert!(!contacted.contains(&1) && !contacted.contains(&9));
    }
}

#[test]
fn tampered_scheme_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = parse_config(Q8).unwrap();
    run_command(Command::BuildScheme, &config, dir.path(), None).unwrap();
    let path = dir.path().join(SCHEME_FILE);
    let mut file: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    file["target"][0] = Value::from((file["target"][0].as_u64().unwrap() + 1) % 8);
    fs::write(&path, file.to_string()).unwrap();
    let err = run_command(Command::Simulate, &config, dir.path(), None).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}
