//! End-to-end checks of the CLI: schemas, determinism, pipelines.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mixedts"))
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("spawn mixedts");
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn write(path: &Path, text: &str) {
    fs::write(path, text).unwrap();
}

const BENCHMARK_JSON: &str = r#"{"mu":0.0,"beta":0.0,"alpha":1.25,"lambda_plus":1.2,"lambda_minus":1.9,"a":1.0,"b":1.0}"#;
const BIVARIATE_JSON: &str = r#"{
  "marginals": [
    {"mu":0.0,"beta":0.0,"alpha":1.2,"lambda_plus":1.0,"lambda_minus":1.0,"l":1.5,"m":1.0},
    {"mu":0.0,"beta":0.0,"alpha":0.8,"lambda_plus":1.0,"lambda_minus":1.0,"l":1.5,"m":1.0}
  ],
  "n": 0.5,
  "k": 1.0
}"#;

#[test]
fn simulate_writes_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("benchmark.json");
    write(&params, BENCHMARK_JSON);
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    for out in [&out_a, &out_b] {
        run_ok(&[
            "simulate",
            "--params",
            params.to_str().unwrap(),
            "--count",
            "500",
            "--seed",
            "42",
            "--out",
            out.to_str().unwrap(),
        ]);
    }
    let a = fs::read(&out_a).unwrap();
    let b = fs::read(&out_b).unwrap();
    assert_eq!(a, b, "same seed must give bit-identical files");
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("y1\n"));
    assert_eq!(text.lines().count(), 501);
}

#[test]
fn simulate_zero_count_gives_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("benchmark.json");
    write(&params, BENCHMARK_JSON);
    let out = dir.path().join("empty.csv");
    run_ok(&[
        "simulate",
        "--params",
        params.to_str().unwrap(),
        "--count",
        "0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(fs::read_to_string(&out).unwrap(), "y1\n");
}

#[test]
fn strip_reports_benchmark_endpoints() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("benchmark.json");
    write(&params, BENCHMARK_JSON);
    let out = run_ok(&["strip", "--params", params.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["lower"].as_f64().unwrap() + 1.4105).abs() < 1e-3);
    assert_eq!(v["upper"].as_f64().unwrap(), 1.2);
    assert_eq!(v["case"], "Case3");
    assert!((v["q_star"].as_f64().unwrap() - 1.4105).abs() < 1e-3);
}

#[test]
fn moments_symmetric_params_have_zero_skew() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("sym.json");
    write(
        &params,
        r#"{"mu":0.0,"beta":0.0,"alpha":1.25,"lambda_plus":1.5,"lambda_minus":1.5,"a":1.0,"b":1.0}"#,
    );
    let out = run_ok(&["moments", "--params", params.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["central_m3"].as_f64().unwrap(), 0.0);
    assert_eq!(v["variance"].as_f64().unwrap(), 1.0);
}

#[test]
fn tails_pipeline_and_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("benchmark.json");
    write(&params, BENCHMARK_JSON);
    let data = dir.path().join("y.csv");
    run_ok(&[
        "simulate",
        "--params",
        params.to_str().unwrap(),
        "--count",
        "20000",
        "--seed",
        "7",
        "--out",
        data.to_str().unwrap(),
    ]);
    let out = run_ok(&["tails", "--data", data.to_str().unwrap(), "--zeta", "0.02"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let fit = &v["columns"][0];
    assert!(fit["q_star_hat"].as_f64().unwrap() > 0.5);
    assert!(fit["r_star_hat"].as_f64().unwrap() > 0.5);
    assert_eq!(fit["zeta"].as_f64().unwrap(), 0.02);

    let out = run_ok(&[
        "tails",
        "--data",
        data.to_str().unwrap(),
        "--sweep",
        "0.01,0.02,0.9",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let sweep = v["columns"][0]["sweep"].as_array().unwrap();
    assert_eq!(sweep.len(), 3);
    assert!(sweep[0]["q_star_hat"].is_number());
    assert!(sweep[2]["error"].is_string(), "invalid zeta recorded per entry");
}

#[test]
fn estimate_round_trips_parameters_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("bi.json");
    write(&params, BIVARIATE_JSON);
    let data = dir.path().join("y.csv");
    run_ok(&[
        "simulate",
        "--params",
        params.to_str().unwrap(),
        "--count",
        "1500",
        "--seed",
        "3",
        "--out",
        data.to_str().unwrap(),
    ]);
    let config = dir.path().join("config.json");
    write(
        &config,
        r#"{"n0":80,"seed":5,"zeta":0.03,"max_iter":500,"initial_theta":"auto"}"#,
    );
    let a = run_ok(&[
        "estimate",
        "--data",
        data.to_str().unwrap(),
        "--config",
        config.to_str().unwrap(),
    ]);
    let b = run_ok(&[
        "estimate",
        "--data",
        data.to_str().unwrap(),
        "--config",
        config.to_str().unwrap(),
    ]);
    assert_eq!(a.stdout, b.stdout, "estimate must be deterministic");
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["meta"]["seed"].as_u64().unwrap(), 5);

    // the fitted parameters are schema-stable: feed them back as both a
    // simulation parameter file and an estimation start
    let theta = v["theta_hat"].clone();
    let refit_params = dir.path().join("fitted.json");
    write(&refit_params, &serde_json::to_string(&theta).unwrap());
    run_ok(&[
        "simulate",
        "--params",
        refit_params.to_str().unwrap(),
        "--count",
        "10",
        "--out",
        dir.path().join("refit.csv").to_str().unwrap(),
    ]);
    let config2 = dir.path().join("config2.json");
    write(
        &config2,
        &format!(
            r#"{{"n0":40,"seed":5,"zeta":0.03,"max_iter":0,"initial_theta":{}}}"#,
            serde_json::to_string(&theta).unwrap()
        ),
    );
    run_ok(&[
        "estimate",
        "--data",
        data.to_str().unwrap(),
        "--config",
        config2.to_str().unwrap(),
    ]);
}

#[test]
fn bootstrap_emits_table_csv() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("bi.json");
    write(&params, BIVARIATE_JSON);
    let data = dir.path().join("y.csv");
    run_ok(&[
        "simulate",
        "--params",
        params.to_str().unwrap(),
        "--count",
        "900",
        "--seed",
        "9",
        "--out",
        data.to_str().unwrap(),
    ]);
    let config = dir.path().join("config.json");
    write(
        &config,
        &format!(
            r#"{{"n0":60,"seed":11,"zeta":0.05,"max_iter":300,"initial_theta":"auto","true_theta":{BIVARIATE_JSON}}}"#
        ),
    );
    let csv = dir.path().join("table.csv");
    let json_out = dir.path().join("boot.json");
    let a = run_ok(&[
        "bootstrap",
        "--data",
        data.to_str().unwrap(),
        "--config",
        config.to_str().unwrap(),
        "--reps",
        "3",
        "--size",
        "400",
        "--out",
        json_out.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    drop(a);
    let table = fs::read_to_string(&csv).unwrap();
    assert!(table.starts_with("parameter,true,est,median,sd,q1,q3\n"));
    assert!(table.contains("\nn,0.5,"));
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json_out).unwrap()).unwrap();
    assert_eq!(v["replications"].as_u64().unwrap(), 3);
    assert_eq!(v["rows"].as_array().unwrap().len(), 15);

    // reproducibility of the whole study
    let json_out2 = dir.path().join("boot2.json");
    run_ok(&[
        "bootstrap",
        "--data",
        data.to_str().unwrap(),
        "--config",
        config.to_str().unwrap(),
        "--reps",
        "3",
        "--size",
        "400",
        "--out",
        json_out2.to_str().unwrap(),
    ]);
    assert_eq!(
        fs::read(&json_out).unwrap(),
        fs::read(&json_out2).unwrap()
    );
}

#[test]
fn levy_writes_curve_csv() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("levy_params.json");
    write(
        &params,
        r#"{"mu":0.0,"beta":0.0,"alpha":1.25,"lambda_plus":1.9,"lambda_minus":1.9,"a":1.0,"b":1.0}"#,
    );
    let out = dir.path().join("levy.csv");
    run_ok(&[
        "levy",
        "--params",
        params.to_str().unwrap(),
        "--truncation",
        "200",
        "--nodes",
        "4096",
        "--out",
        out.to_str().unwrap(),
    ]);
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("x,g\n"));
    let mut positive = 0;
    for line in text.lines().skip(1).take(4000) {
        let mut parts = line.split(',');
        let _x: f64 = parts.next().unwrap().parse().unwrap();
        let g: f64 = parts.next().unwrap().parse().unwrap();
        if g > 0.0 {
            positive += 1;
        }
    }
    assert!(positive > 1000);
}

#[test]
fn missing_input_fails_with_nonzero_status() {
    let out = bin()
        .args(["strip", "--params", "/nonexistent/nowhere.json"])
        .output()
        .unwrap();
    assert!(!out.status.success());

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    write(&bad, r#"{"mu":0.0,"beta":0.0,"alpha":3.0,"lambda_plus":1.0,"lambda_minus":1.0,"a":1.0,"b":1.0}"#);
    let out = bin()
        .args(["strip", "--params", bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(!out.status.success(), "alpha out of range must fail");
}

#[test]
fn estimate_handles_single_column_samples() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("uni.json");
    write(&params, BENCHMARK_JSON);
    let data = dir.path().join("y.csv");
    run_ok(&[
        "simulate",
        "--params",
        params.to_str().unwrap(),
        "--count",
        "2000",
        "--seed",
        "13",
        "--out",
        data.to_str().unwrap(),
    ]);
    let config = dir.path().join("config.json");
    write(
        &config,
        r#"{"n0":60,"seed":2,"zeta":0.03,"max_iter":400,"initial_theta":"auto"}"#,
    );
    let out = run_ok(&[
        "estimate",
        "--data",
        data.to_str().unwrap(),
        "--config",
        config.to_str().unwrap(),
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["theta_hat"]["marginals"].as_array().unwrap().len(), 1);
    // the degenerate common factor is pinned at zero for univariate fits
    assert_eq!(v["theta_hat"]["n"].as_f64().unwrap(), 0.0);
}
