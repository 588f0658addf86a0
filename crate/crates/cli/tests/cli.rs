use std::process::{Command, Output};

use serde_json::Value;

fn involfact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_involfact"))
        .args(args)
        .env_remove("INVOLFACT_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = involfact(&full);
    serde_json::from_str(&stdout(&out)).expect("valid JSON envelope")
}

fn check_envelope(v: &Value, command: &str) {
    assert_eq!(v["command"], command);
    assert!(v["params"].is_object());
    assert!(v["result"].is_object());
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn count_examples() {
    let v = json(&["count", "--cycles", "(1,2,3)(4,5,6)", "--one-based"]);
    check_envelope(&v, "count");
    assert_eq!(v["result"]["N"], "12");
    assert_eq!(v["result"]["B"], "9");
    assert_eq!(json(&["count", "--cycle-type", "1:4"])["result"]["N"], "10");
    assert_eq!(json(&["count", "--cycles", "(0,1,2,3,4)"])["result"]["N"], "5");
    assert_eq!(json(&["count", "--images", "[1,2,0,4,5,3]"])["result"]["N"], "12");
    // counts beyond 64 bits stay exact
    let big = json(&["count", "--cycle-type", "1:40"]);
    assert_eq!(big["result"]["N"], "72682301192087742711233536");
}

#[test]
fn parse_errors_exit_two() {
    let out = involfact(&["count", "--cycles", "(1,x)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("\"x\""));
    assert_eq!(involfact(&["count"]).status.code(), Some(2));
    assert_eq!(involfact(&["count", "--images", "[0,0]"]).status.code(), Some(2));
    assert_eq!(involfact(&["bogus"]).status.code(), Some(2));
}

#[test]
fn enumerate_two_five_cycles() {
    let out = involfact(&["enumerate", "--cycles", "(0,1,2,3,4)(5,6,7,8,9)"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(lines.len(), 30);
    assert!(lines.contains(&"(0,7)(1,6)(2,5)(3,9)(4,8)\t(0,8)(1,7)(2,6)(3,5)(4,9)"));
    assert_eq!(text.lines().last(), Some("# shown 30 of 30"));
    // exchanging factorizations send 0 into the second cycle
    let exchanging = lines
        .iter()
        .filter(|l| (5..10).any(|b| l.starts_with(&format!("(0,{b})"))))
        .count();
    assert_eq!(exchanging, 5);
}

#[test]
fn enumerate_identity_and_limit() {
    let out = involfact(&["enumerate", "--cycles", "()", "--degree", "3"]);
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 4);

    let out = involfact(&["enumerate", "--cycles", "(0,1,2,3,4)(5,6,7,8,9)", "--limit", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 2);

    let v = json(&["enumerate", "--cycles", "(1,2,3)(4,5,6)", "--one-based"]);
    check_envelope(&v, "enumerate");
    assert_eq!(v["result"]["factorizations"].as_array().unwrap().len(), 12);
    let csv = stdout(&involfact(&["enumerate", "--cycles", "(0,1,2)", "--format", "csv"]));
    assert_eq!(csv.lines().next(), Some("tau1,tau2"));
    assert_eq!(csv.lines().nth(1), Some("\"(1,2)\",\"(0,1)\""));
}

#[test]
fn oracle_check_reports() {
    let v = json(&["oracle-check", "--n", "5"]);
    check_envelope(&v, "oracle-check");
    assert_eq!(v["result"]["mismatches"].as_array().unwrap().len(), 0);
    assert_eq!(v["result"]["total_sum"], "676");

    assert_eq!(json(&["oracle-check", "--n", "1"])["result"]["total_sum"], "1");

    let v = json(&["oracle-check", "--n", "6"]);
    assert_eq!(v["result"]["max_value"], "76");
    assert_eq!(v["result"]["max_attainers"], 1);
    assert_eq!(v["result"]["min_value"], "5");
    assert_eq!(v["result"]["min_attainers"], 144);

    assert_eq!(involfact(&["oracle-check", "--n", "2"]).status.code(), Some(1));
    assert_eq!(involfact(&["oracle-check", "--n", "11"]).status.code(), Some(2));
}

#[test]
fn clt_is_reproducible() {
    let args = ["clt", "--n", "10000", "--samples", "10000", "--seed", "42", "--format", "json"];
    let a = involfact(&args);
    let b = involfact(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let mut threaded = args.to_vec();
    threaded.extend(["--threads", "1"]);
    assert_eq!(involfact(&threaded).stdout, a.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    check_envelope(&v, "clt");
    let hist: u64 = v["result"]["histogram"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["count"].as_u64().unwrap())
        .sum();
    assert_eq!(hist, 10_000);
}

#[test]
fn clt_log_n_mean_exceeds_log_b_mean() {
    let base = ["clt", "--n", "10000", "--samples", "2000", "--seed", "3"];
    let mean = |stat: &str| {
        let mut args = base.to_vec();
        args.extend(["--statistic", stat]);
        json(&args)["result"]["mean"].as_f64().unwrap()
    };
    assert!(mean("logN") >= mean("logB"));
}

#[test]
fn clt_degree_two_histogram() {
    let v = json(&["clt", "--n", "2", "--samples", "100000", "--seed", "1", "--statistic", "logB"]);
    let occupied: Vec<f64> = v["result"]["histogram"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["count"].as_u64().unwrap() as f64 / 1e5)
        .filter(|&f| f > 0.0)
        .collect();
    assert_eq!(occupied.len(), 2);
    assert!(occupied.iter().all(|f| (f - 0.5).abs() < 0.01));
}

#[test]
fn clt_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hist.csv");
    let out = involfact(&[
        "clt", "--n", "1000", "--samples", "500", "--seed", "9", "--format", "csv", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("n=1000 samples=500 seed=9 statistic=logN mean="));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("bin_left,count\n-inf,"));
    assert_eq!(csv.lines().count(), 43);
}

#[test]
fn seed_precedence() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_involfact"));
        cmd.args(["clt", "--n", "500", "--samples", "200", "--format", "json"]);
        cmd.env_remove("INVOLFACT_SEED");
        if let Some(e) = env {
            cmd.env("INVOLFACT_SEED", e);
        }
        if let Some(f) = flag {
            cmd.args(["--seed", f]);
        }
        let v: Value = serde_json::from_slice(&cmd.output().unwrap().stdout).unwrap();
        v["result"]["seed"].as_u64().unwrap()
    };
    assert_eq!(run(None, None), 0);
    assert_eq!(run(Some("5"), None), 5);
    assert_eq!(run(Some("5"), Some("6")), 6);
}

#[test]
fn tail_examples() {
    let v = json(&["tail", "--n", "10000", "--xi", "30", "--samples", "10000", "--seed", "7"]);
    check_envelope(&v, "tail");
    let r = &v["result"];
    let bound = r["bound_large_k"].as_f64().unwrap();
    assert!((bound - 0.0339).abs() < 5e-4);
    assert!(
        r["freq_large_k_repeat"].as_f64().unwrap()
            <= bound + 3.0 * r["standard_error"].as_f64().unwrap()
    );

    let v = json(&["tail", "--n", "10000", "--xi", "5000", "--samples", "2000"]);
    assert_eq!(v["result"]["freq_large_k_repeat"].as_f64(), Some(0.0));

    let v = json(&["tail", "--n", "10000", "--xi", "1", "--samples", "1000"]);
    assert!((v["result"]["bound_large_k"].as_f64().unwrap() - 1.6449).abs() < 1e-3);
    assert!(v["result"]["freq_large_k_repeat"].as_f64().unwrap() <= 1.0);

    let a = involfact(&["tail", "--n", "1000", "--xi", "5", "--samples", "3000", "--seed", "2"]);
    let b = involfact(&["tail", "--n", "1000", "--xi", "5", "--samples", "3000", "--seed", "2"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sandwich_command() {
    let v = json(&["sandwich", "--n", "10000", "--samples", "5000", "--seed", "1"]);
    check_envelope(&v, "sandwich");
    assert!(v["result"]["fraction"].as_f64().unwrap() > 0.5);
    let out = involfact(&["sandwich", "--n", "8", "--xi", "8", "--c", "1e-9", "--samples", "100"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cycle_type"));
}

#[test]
fn involution_numbers() {
    assert_eq!(json(&["involutions", "--n", "4"])["result"]["count"], "10");
    let zero = json(&["involutions", "--n", "0"]);
    assert_eq!(zero["result"]["count"], "1");
    assert!(zero["result"]["ln_ratio"].is_null());
    let big = json(&["involutions", "--n", "1000"]);
    assert!(big["result"]["ln_ratio"].as_f64().unwrap().abs() <= 0.05);
    assert!(big["result"]["count"].as_str().unwrap().len() > 1000);
}

#[test]
fn every_command_supports_each_format() {
    let commands: [&[&str]; 6] = [
        &["count", "--cycles", "(0,1)"],
        &["enumerate", "--cycles", "(0,1)"],
        &["oracle-check", "--n", "3"],
        &["clt", "--n", "50", "--samples", "100"],
        &["tail", "--n", "50", "--xi", "3", "--samples", "100"],
        &["involutions", "--n", "5"],
    ];
    for cmd in commands {
        for format in ["json", "csv", "text"] {
            let mut args = cmd.to_vec();
            args.extend(["--format", format]);
            let out = involfact(&args);
            assert!(out.status.success(), "{args:?}");
            assert!(!out.stdout.is_empty());
        }
    }
}
