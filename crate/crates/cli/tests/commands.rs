use std::path::Path;
use std::process::{Command, Output};

use chaoslab_cli::exit;

fn chaoslab(args: &[&str], out_root: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chaoslab"))
        .args(args)
        .env("CHAOSLAB_OUT", out_root)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn list_is_stable_and_large_enough() {
    let tmp = tempfile::tempdir().unwrap();
    let a = chaoslab(&["list"], tmp.path());
    let b = chaoslab(&["list"], tmp.path());
    assert_eq!(code(&a), exit::OK);
    assert_eq!(a.stdout, b.stdout);
    let names: Vec<String> = stdout(&a).lines().map(|l| l.split('\t').next().unwrap().to_string()).collect();
    assert!(names.len() >= 10);
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);

    let json: serde_json::Value = serde_json::from_slice(&chaoslab(&["list", "--json"], tmp.path()).stdout).unwrap();
    let listed: Vec<&str> = json.as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert_eq!(listed, names.iter().map(String::as_str).collect::<Vec<_>>());
    assert!(json[0]["params"].is_array());
}

#[test]
fn describe_output_runs_as_config() {
    let tmp = tempfile::tempdir().unwrap();
    let d = chaoslab(&["describe", "contraction-counterexample"], tmp.path());
    assert_eq!(code(&d), exit::OK);
    let cfg = tmp.path().join("counterexample.toml");
    std::fs::write(&cfg, d.stdout).unwrap();
    let r = chaoslab(&["run", "--config", cfg.to_str().unwrap()], tmp.path());
    assert_eq!(code(&r), exit::OK, "{}", String::from_utf8_lossy(&r.stderr));
    assert!(tmp.path().join("contraction-counterexample/results.csv").exists());
    assert!(tmp.path().join("contraction-counterexample/summary.json").exists());
}

#[test]
fn describe_unknown_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(code(&chaoslab(&["describe", "no-such-experiment"], tmp.path())), exit::CONFIG);
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let p = tmp.path();
    // missing seed, unknown parameter, malformed value, unknown experiment
    assert_eq!(code(&chaoslab(&["run", "contraction-counterexample"], p)), exit::CONFIG);
    assert_eq!(code(&chaoslab(&["run", "gen-cs", "--seed", "1", "--bogus", "3"], p)), exit::CONFIG);
    assert_eq!(code(&chaoslab(&["run", "gen-cs", "--seed", "1", "--instances", "x"], p)), exit::CONFIG);
    assert_eq!(code(&chaoslab(&["run", "nope", "--seed", "1"], p)), exit::CONFIG);
    assert_eq!(code(&chaoslab(&["run", "gen-cs", "--seed", "1", "--workers", "0"], p)), exit::CONFIG);
    // numerical failure: Hurst index outside (1/2, 1)
    assert_eq!(code(&chaoslab(&["run", "rosenblatt-cumulants", "--seed", "1", "--hurst", "0.4"], p)), exit::FAILURE);
    // output directory below a regular file
    let file = p.join("plain");
    std::fs::write(&file, "x").unwrap();
    let out = file.join("sub");
    let r = chaoslab(&["run", "contraction-counterexample", "--seed", "1", "--out", out.to_str().unwrap()], p);
    assert_eq!(code(&r), exit::FAILURE);
    // completed run with a failing check
    let r = chaoslab(&["run", "fourth-moment", "--seed", "1", "--n", "1", "--samples", "2000", "--ks_large", "0.9"], p);
    assert_eq!(code(&r), exit::CHECK_FAILED);
    assert!(stdout(&r).contains("FAIL\tks_n1"));
}

#[test]
fn out_flag_and_env_root() {
    let tmp = tempfile::tempdir().unwrap();
    let r = chaoslab(&["run", "gen-cs", "--seed", "3", "--instances", "5"], tmp.path());
    assert_eq!(code(&r), exit::OK);
    assert!(tmp.path().join("gen-cs/results.csv").exists());
    let explicit = tmp.path().join("elsewhere");
    let r = chaoslab(&["run", "gen-cs", "--seed", "3", "--instances=5", "--out", explicit.to_str().unwrap()], tmp.path());
    assert_eq!(code(&r), exit::OK);
    assert_eq!(
        std::fs::read(explicit.join("results.csv")).unwrap(),
        std::fs::read(tmp.path().join("gen-cs/results.csv")).unwrap()
    );
}

#[test]
fn verify_identities() {
    let tmp = tempfile::tempdir().unwrap();
    let r = chaoslab(&["verify-identities", "--seed", "5", "--trials", "50"], tmp.path());
    assert_eq!(code(&r), exit::OK);
    assert_eq!(stdout(&r).lines().filter(|l| l.starts_with("PASS")).count(), 7);
    let r = chaoslab(&["verify-identities", "--trials", "0"], tmp.path());
    assert_eq!(code(&r), exit::OK);
    assert!(stdout(&r).lines().all(|l| l.contains("trials=0")));
}
