use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn levytail(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_levytail"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| v.to_string().parse().expect("number"))
}

#[test]
fn cauchy_rate_has_slope_three() {
    let out = levytail(&["rate", "--model", "cauchy", "--eps", "1", "--slope-window", "2.95:3.05"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let slope = num(&json(&out)["fit"]["slope"]);
    assert!((slope - 3.0).abs() < 0.05, "slope {slope}");
}

#[test]
fn rate_outside_window_exits_five() {
    let out = levytail(&["rate", "--model", "cauchy", "--slope-window", "1.9:2.1"]);
    assert_eq!(code(&out), 5);
}

#[test]
fn gamma_simulation_covers_closed_form() {
    let out = levytail(&["simulate", "--model", "gamma", "--t", "0.1", "--eps", "1", "--n", "1e6"]);
    assert_eq!(code(&out), 0);
    let est = &json(&out)["estimate"];
    let (lo, hi) = (num(&est["ci_low"]), num(&est["ci_high"]));
    // Γ(0.1, 1)/Γ(0.1)
    let truth = 0.024_127_3;
    assert!(lo <= truth && truth <= hi, "[{lo}, {hi}]");
}

#[test]
fn bound_json_and_failure_codes() {
    let out = levytail(&["bound", "--model", "cauchy", "--eps", "1", "--t", "1e-3", "--theorem", "lambda2bis"]);
    assert_eq!(code(&out), 0);
    let b = json(&out);
    assert_eq!(b["valid"], Value::Bool(true));
    assert_eq!(b["theorem"], "lambda2bis");
    assert!(b["constants_used"].as_object().is_some_and(|m| !m.is_empty()));
    assert!(num(&b["t_max"]) > 1e-3);

    let huge = levytail(&["bound", "--model", "cauchy", "--eps", "1", "--t", "1e3"]);
    assert_eq!(code(&huge), 4);

    let wrong = levytail(&["bound", "--model", "cauchy", "--eps", "1", "--t", "1e-3", "--theorem", "teo1"]);
    assert_eq!(code(&wrong), 2);
    assert!(String::from_utf8_lossy(&wrong.stderr).contains("finite-variation"));
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

#[test]
fn functionals_csv() {
    let out = levytail(&["functionals", "--model", "gamma", "--eps-grid", "0.5,1"]);
    assert_eq!(code(&out), 0);
    let csv = String::from_utf8(out.stdout).unwrap();
    let drift = column(&csv, "drift");
    assert!((drift[1] - 0.632_12).abs() < 1e-5);

    let sym = levytail(&["functionals", "--model", "cauchy", "--eps-grid", "1e-3:2:7"]);
    let csv = String::from_utf8(sym.stdout).unwrap();
    assert!(column(&csv, "drift").iter().all(|b| *b == 0.0));

    let bad = levytail(&["functionals", "--model", "gamma", "--eps-grid", "-1,1"]);
    assert_eq!(code(&bad), 2);
}

#[test]
fn validate_passes_and_self_test_fails() {
    let args = [
        "validate",
        "--model",
        "cauchy",
        "--eps-grid",
        "0.5,1,2",
        "--t-grid",
        "1e-4:1e-2:5",
        "--theorem",
        "lambda2bis",
    ];
    let ok = levytail(&args);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stderr));
    let csv = String::from_utf8(ok.stdout).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",PASS")));

    let mut corrupted = args.to_vec();
    corrupted.push("--self-test");
    assert_eq!(code(&levytail(&corrupted)), 5);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "model = \"cauchy\"\neps = 1.0\nt = 1e3\ntheorem = \"lambda2bis\"\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    // t from the file is outside validity; the flag overrides it
    assert_eq!(code(&levytail(&["bound", "--config", cfg])), 4);
    let out = levytail(&["bound", "--config", cfg, "--t", "1e-3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["valid"], Value::Bool(true));

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "modle = \"cauchy\"\n").unwrap();
    assert_eq!(code(&levytail(&["bound", "--config", bad.to_str().unwrap()])), 2);
}

#[test]
fn model_file_with_certificate_override() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("cauchy.toml");
    std::fs::write(
        &model,
        "kind = \"cauchy\"\n[lipschitz]\nconstant = 12.1\nlo = 0.375\nhi = 0.625\nM = 1.6\n",
    )
    .unwrap();
    let out = levytail(&[
        "bound",
        "--model",
        model.to_str().unwrap(),
        "--eps",
        "0.5",
        "--t",
        "1e-3",
        "--theorem",
        "lambda2",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["theorem"], "lambda2");
}

fn simulate_to(path: &Path, shards: &str) {
    let out = levytail(&[
        "simulate",
        "--model",
        "power_law(1, 0.5, 2)",
        "--t",
        "0.05",
        "--eps",
        "0.5",
        "--n",
        "20000",
        "--seed",
        "7",
        "--shards",
        shards,
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn outputs_are_byte_identical_across_shards() {
    let dir = tempfile::tempdir().unwrap();
    let files: Vec<_> = ["1", "4", "16", "1"]
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let p = dir.path().join(format!("sim{i}.json"));
            simulate_to(&p, s);
            std::fs::read(&p).unwrap()
        })
        .collect();
    assert!(files.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(code(&levytail(&["simulate", "--model", "cauchy", "--eps", "1"])), 2);
    assert_eq!(code(&levytail(&["bound", "--model", "nonsense", "--eps", "1", "--t", "1"])), 2);
    assert_eq!(code(&levytail(&["simulate", "--model", "gamma", "--eps", "1", "--t", "0.1", "--n", "1.5"])), 2);
    assert_eq!(code(&levytail(&["bound", "--model", "cauchy", "--eps", "0", "--t", "1"])), 2);
}
