//! End-to-end checks of the `tpc` binary: output shapes, determinism,
//! exit codes, and the dump file format.

use std::process::Command;

fn tpc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tpc"))
}

fn run_ok(args: &[&str]) -> String {
    let out = tpc().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 stdout")
}

#[test]
fn capacity_command_prints_report() {
    let out = run_ok(&["capacity", "--model", "geometric", "--alpha", "1", "--deletion", "zero"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["value"].as_f64().unwrap() - 0.367879).abs() < 1e-5);
    assert!((v["F"].as_f64().unwrap() - 2.0 * 0.36787944).abs() < 1e-6);
    assert!((v["A"].as_f64().unwrap() - 0.36787944).abs() < 1e-6);
    assert!(v["closed_form"].is_number());
    assert!(v["closed_form_gap"].as_f64().unwrap() < 1e-6);
}

#[test]
fn capacity_with_deletion_policies() {
    let out = run_ok(&[
        "capacity", "--model", "geometric", "--alpha", "1", "--deletion", "constant",
        "--del-eps", "0.1",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["value"].as_f64().unwrap() - 0.9 * 0.36787944).abs() < 1e-6);

    let out = run_ok(&[
        "capacity", "--model", "geometric", "--alpha", "1", "--deletion", "exp",
        "--del-gamma", "1",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["value"].as_f64().unwrap() - 0.3340456).abs() < 1e-6);
}

#[test]
fn bounds_threshold_failure_exits_2() {
    let out = tpc().args(["bounds", "--model", "geometric", "--alpha", "1", "--p", "0.3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("1 - H(2p)"), "stderr: {stderr}");
}

#[test]
fn unknown_flag_exits_2() {
    let out = tpc().args(["capacity", "--alpha", "1", "--frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oversized_codebook_exits_4() {
    let out = tpc()
        .args([
            "simulate", "--codec", "noiseless", "--n", "64", "--frag-len", "32", "--rate",
            "0.9", "--trials", "1",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4), "2^58 codewords must be infeasible");
}

#[test]
fn simulate_is_byte_deterministic() {
    let args = [
        "simulate", "--codec", "indexed", "--n", "1024", "--frag-len", "64", "--trials",
        "100", "--seed", "7",
    ];
    let a = run_ok(&args);
    let b = run_ok(&args);
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["error_rate"].as_f64().unwrap(), 0.0);
}

#[test]
fn sweep_emits_csv_grid() {
    let out = run_ok(&["sweep", "--p", "0.01,0.02,0.05", "--inv-alpha", "1:20"]);
    let lines: Vec<&str> = out.trim_end().lines().collect();
    assert_eq!(lines[0], "inv_alpha,p,r_in,r_out,gap");
    assert_eq!(lines.len(), 61);
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 5);
        let gap: f64 = fields[4].parse().unwrap();
        assert!(gap >= -1e-9);
    }
}

#[test]
fn concentration_coverage_report() {
    let out = run_ok(&[
        "concentration", "--lemma", "coverage", "--n", "65536", "--alpha", "1", "--eps",
        "0.1", "--trials", "500",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["lemma"], "coverage");
    assert!(v["deviation_freq"].as_f64().unwrap() <= 0.01);
    assert!(v["reference"].is_number());
}

#[test]
fn concentration_bucket_report() {
    let out = run_ok(&[
        "concentration", "--lemma", "bucket", "--n", "16384", "--alpha", "1", "--trials",
        "150", "--bucket-l", "2", "--buckets", "6",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let buckets = v.as_array().unwrap();
    assert_eq!(buckets.len(), 7, "6 regular buckets plus overflow");
    for bucket in buckets {
        assert!(bucket["deviation_freq"].as_f64().unwrap() <= 0.05);
    }
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let args = [
        "simulate", "--codec", "noiseless", "--n", "16", "--frag-len", "8", "--rate",
        "0.25", "--trials", "100", "--seed", "3",
    ];
    let solo = tpc().args(args).env("TPL_THREADS", "1").output().unwrap();
    let duo = tpc().args(args).env("TPL_THREADS", "2").output().unwrap();
    assert!(solo.status.success() && duo.status.success());
    assert_eq!(solo.stdout, duo.stdout);
}

#[test]
fn dump_writes_channel_outputs() {
    let dir = std::env::temp_dir().join(format!("tpc_dump_{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    run_ok(&[
        "simulate", "--codec", "indexed", "--n", "64", "--frag-len", "8", "--trials", "3",
        "--seed", "9", "--dump", dir.to_str().unwrap(),
    ]);
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    assert_eq!(files.len(), 3);
    let text = std::fs::read_to_string(&files[0]).unwrap();
    assert!(text.starts_with("n=64 count="), "dump header: {text}");
    let parsed = torn_paper::TornOutput::from_text(&text).unwrap();
    assert_eq!(parsed.n(), 64);
    assert_eq!(parsed.total_len(), 64);
    std::fs::remove_dir_all(&dir).unwrap();
}
