//! Command-line behaviour of the `qudit-shadow` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qudit-shadow"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qudit-shadow-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(cmd: &mut Command) -> Output {
    let out = cmd.output().unwrap();
    assert!(
        out.status.success(),
        "{:?} failed: {}",
        cmd,
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const ESTIMATE: [&str; 15] = [
    "estimate", "--d", "3", "--n", "4", "--state", "ghz", "--scheme", "global", "--N", "100,200",
    "--runs", "6", "--seed", "7",
];

#[test]
fn estimate_reruns_are_byte_identical() {
    let dir = scratch("rerun");
    let a = dir.join("a.csv");
    let b = dir.join("b.csv");
    run(bin().args(ESTIMATE).arg("--out").arg(&a));
    run(bin()
        .args(ESTIMATE)
        .arg("--out")
        .arg(&b)
        .args(["--threads", "1"]));
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "scheme,d,n,k,N,run_count,estimate_mean,mse,theory_bound,seed"
    );
    assert_eq!(lines.count(), 2);
}

#[test]
fn env_var_sets_the_output_directory() {
    let dir = scratch("env");
    run(bin()
        .args(ESTIMATE)
        .args(["--format", "json"])
        .env("QUDIT_SHADOW_OUT", &dir));
    let path = dir.join("estimate_d3_n4_k0_seed7.json");
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap();
    assert_eq!(v["version"], "1");
    assert_eq!(v["results"].as_array().unwrap().len(), 2);
    assert_eq!(v["config"]["seed"], 7);
}

#[test]
fn estimate_with_a_magic_layer() {
    let dir = scratch("magic");
    let out = dir.join("t.csv");
    let o = run(bin()
        .args([
            "estimate",
            "--d",
            "5",
            "--n",
            "3",
            "--k",
            "1",
            "--t",
            "canonical",
            "--N",
            "50",
            "--runs",
            "3",
        ])
        .args(["--seed", "1", "--out"])
        .arg(&out));
    assert!(stdout(&o).contains("clifford+t"));
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("clifford+t,5,3,1,50,3,"));
}

#[test]
fn invalid_configs_exit_nonzero() {
    for args in [
        vec![
            "estimate", "--d", "4", "--n", "2", "--N", "10", "--seed", "1",
        ],
        vec![
            "estimate", "--d", "3", "--n", "2", "--k", "3", "--N", "10", "--seed", "1",
        ],
        vec![
            "estimate", "--d", "3", "--n", "2", "--N", "10", "--L", "3", "--seed", "1",
        ],
        vec![
            "estimate", "--d", "3", "--n", "2", "--N", "10", "--t", "bogus", "--k", "1", "--seed",
            "1",
        ],
    ] {
        let out = bin().args(&args).output().unwrap();
        assert!(!out.status.success(), "{args:?} succeeded");
        assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    }
}

#[test]
fn norm_subcommand_values() {
    let o = run(bin().args([
        "norm",
        "--stab-projector",
        "--n",
        "1",
        "--d",
        "3",
        "--K",
        "1",
        "--format",
        "json",
    ]));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["ratio"].as_f64().unwrap() - 8.0 / 3.0).abs() < 1e-12);
    assert!((v["shadow_norm2"].as_f64().unwrap() - 16.0 / 9.0).abs() < 1e-12);

    let o = run(bin().args([
        "norm", "--gamma", "--d", "7", "--k", "1", "--format", "json",
    ]));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["gamma_tilde"].as_f64().unwrap() - 7.5).abs() < 1e-12);

    let o = run(bin().args([
        "norm",
        "--local-weyl",
        "--d",
        "3",
        "--m",
        "2",
        "--format",
        "json",
    ]));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["shadow_norm2"].as_f64().unwrap() - 16.0).abs() < 1e-9);
}

#[test]
fn verify_selects_and_reports() {
    let dir = scratch("verify");
    let report = dir.join("report.json");
    let o = run(bin()
        .args(["verify", "--only", "tableau", "--report"])
        .arg(&report));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("A5   PASS"));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(report).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["criteria"][0]["id"], "A5");
}

#[test]
fn verify_fault_injection_fails_a5() {
    let out = bin()
        .args([
            "verify",
            "--only",
            "a5",
            "--fault",
            "perturbed-phase-rule",
            "--format",
            "json",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], false);
}

#[test]
fn verify_rejects_unknown_criteria() {
    let out = bin().args(["verify", "--only", "a11"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn randobs_writes_records_within_bounds() {
    let dir = scratch("randobs");
    let out = dir.join("r.csv");
    run(bin()
        .args([
            "randobs",
            "--d",
            "3",
            "--k",
            "1",
            "--samples",
            "10",
            "--diagonal",
            "--seed",
            "4",
            "--out",
        ])
        .arg(&out));
    let mut rdr = csv::Reader::from_path(out).unwrap();
    let headers = rdr.headers().unwrap().clone();
    let norm = headers.iter().position(|h| h == "norm").unwrap();
    let bound = headers.iter().position(|h| h == "bound").unwrap();
    let mut rows = 0;
    for r in rdr.records() {
        let r = r.unwrap();
        assert!(r[norm].parse::<f64>().unwrap() <= r[bound].parse::<f64>().unwrap());
        rows += 1;
    }
    assert_eq!(rows, 10);
}
