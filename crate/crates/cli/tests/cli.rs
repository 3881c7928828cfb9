use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polysieve"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn assert_schema(v: &Value, subcommand: &str) {
    assert_eq!(v["subcommand"], subcommand);
    assert!(v["inputs"].is_object());
    assert!(v["results"].is_object());
    assert!(v["wall_ms"].is_u64());
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        assert!(c["name"].is_string() && c["paper_ref"].is_string() && c["ok"].is_boolean());
    }
}

#[test]
fn sieve_example() {
    let v = json(&[
        "sieve",
        "--poly",
        "1,0,0",
        "--Q",
        "20",
        "--M",
        "0",
        "--N",
        "50",
        "--weights",
        "ones",
        "--output",
        "json",
    ]);
    assert_schema(&v, "sieve");
    let r = &v["results"];
    assert_eq!(r["lhs_exact"], 32304);
    assert_eq!(r["envelope_exponent"], 6);
    assert!((r["lhs"].as_f64().unwrap() - 32304.0).abs() < 1e-6);
    assert!(r["ratio"].as_f64().unwrap() <= 10.0);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["ok"] == true));
}

#[test]
fn rho_example() {
    let v = json(&["rho", "--poly", "1,0,1", "--Q", "100"]);
    assert_schema(&v, "rho");
    let rho: Vec<u64> = v["results"]["rho"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert_eq!(rho.len(), 100);
    // T² + 1: two roots mod 5, 13, 25; none mod 3 or 4; one mod 2.
    assert_eq!(
        (rho[0], rho[1], rho[2], rho[3], rho[4], rho[12], rho[24]),
        (1, 1, 0, 0, 2, 2, 2)
    );
    assert_eq!(rho[64], 4);
}

#[test]
fn prop1_example_keys() {
    let v = json(&["prop1", "--poly", "1,0,1", "--Q", "50"]);
    assert_schema(&v, "prop1");
    let r = &v["results"];
    for key in ["sum", "euler_majorant", "envelope_exponent"] {
        assert!(!r[key].is_null(), "missing {key}");
    }
    assert!(r["sum"].as_f64().unwrap() <= r["euler_majorant"].as_f64().unwrap());
}

#[test]
fn sharpness_example() {
    let v = json(&["sharpness", "--n", "2", "--q", "5"]);
    assert_schema(&v, "sharpness");
    let r = &v["results"];
    assert_eq!(
        (
            r["ex1_lhs"].as_u64(),
            r["ex1_rhs"].as_u64(),
            r["ok"].as_bool()
        ),
        (Some(20), Some(20), Some(true))
    );
}

#[test]
fn sharpness_general_form_and_lower_bound() {
    let v = json(&[
        "sharpness",
        "--n",
        "3",
        "--q",
        "5",
        "--Q",
        "9",
        "--N",
        "1000",
    ]);
    let r = &v["results"];
    // gcd(3, 4) = 1, so the moment vanishes.
    assert_eq!(
        (r["ex1_lhs"].as_u64(), r["ex1_rhs"].as_u64()),
        (Some(0), Some(0))
    );
    assert!(r["lower_bound_lhs"].as_f64().unwrap() >= r["lower_bound_floor"].as_f64().unwrap());
}

#[test]
fn kernel_both_forms_agree() {
    let by_c = json(&["kernel", "--Q", "12", "--c", "-8"]);
    let by_poly = json(&[
        "kernel", "--Q", "12", "--poly", "1,0,0", "--i", "1", "--j", "3",
    ]);
    assert_schema(&by_c, "kernel");
    assert_eq!(by_c["results"]["kernel"], by_poly["results"]["kernel"]);
}

#[test]
fn corollary_runs_both_paths() {
    let v = json(&[
        "corollary",
        "--poly",
        "1,0,1",
        "--D",
        "15",
        "--M",
        "-5",
        "--N",
        "20",
    ]);
    assert_schema(&v, "corollary");
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"dual-path"));
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["ok"] == true));
}

#[test]
fn suite_subset_exits_zero() {
    let v = json(&["suite", "--only", "1,3,11"]);
    assert_schema(&v, "suite");
    assert_eq!(v["results"]["criteria"].as_array().unwrap().len(), 3);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        run(&["rho", "--poly", "0,1", "--Q", "10"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["rho", "--poly", "1,0,1", "--Q", "10", "--bogus"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["rho", "--poly", "1,0,1", "--Q", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["sieve", "--poly", "1,0", "--Q", "5", "--N", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "sieve",
            "--poly",
            "1,0",
            "--Q",
            "5",
            "--N",
            "3",
            "--weights",
            "twos"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(run(&["suite", "--only", "12"]).status.code(), Some(2));
}

#[test]
fn budget_overrun_exits_three() {
    let out = run(&[
        "sieve", "--poly", "1,0,0", "--Q", "200", "--N", "200", "--budget", "1000",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    assert_eq!(
        run(&["rho", "--poly", "1,0,1", "--Q", "100000", "--budget", "1000"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn seeded_output_is_byte_identical() {
    let args = [
        "sieve",
        "--poly",
        "2,-1,3",
        "--Q",
        "15",
        "--M",
        "-10",
        "--N",
        "40",
        "--weights",
        "random",
        "--seed",
        "99",
        "--no-wall-time",
    ];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let other = run(&[
        "sieve",
        "--poly",
        "2,-1,3",
        "--Q",
        "15",
        "--M",
        "-10",
        "--N",
        "40",
        "--weights",
        "random",
        "--seed",
        "100",
        "--no-wall-time",
    ]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn output_never_contains_nan() {
    for args in [
        &["sieve", "--poly", "1,0", "--Q", "1", "--N", "5"][..],
        &["corollary", "--poly", "3,1", "--D", "2", "--N", "4"][..],
        &["prop1", "--poly", "1,5", "--Q", "2"][..],
    ] {
        let out = run(args);
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(
            !text.is_empty(),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!text.contains("NaN"), "{args:?}: {text}");
    }
}

#[test]
fn weights_from_file() {
    let dir = std::env::temp_dir().join(format!("polysieve-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("w.csv");
    std::fs::write(&good, "i,re,im\n4,2,0\n6,-1,0\n").unwrap();
    let v = json(&[
        "sieve",
        "--poly",
        "1,0,0",
        "--Q",
        "6",
        "--M",
        "3",
        "--N",
        "3",
        "--weights",
        &format!("file:{}", good.display()),
    ]);
    assert_eq!(v["results"]["norm_sqr"], 5.0);

    let dup = dir.join("dup.csv");
    std::fs::write(&dup, "4,1,0\n4,1,0\n").unwrap();
    let out = run(&[
        "sieve",
        "--poly",
        "1,0,0",
        "--Q",
        "6",
        "--M",
        "3",
        "--N",
        "3",
        "--weights",
        &format!("file:{}", dup.display()),
    ]);
    assert_eq!(out.status.code(), Some(2));

    let outside = dir.join("out.csv");
    std::fs::write(&outside, "3,1,0\n").unwrap();
    let out = run(&[
        "sieve",
        "--poly",
        "1,0,0",
        "--Q",
        "6",
        "--M",
        "3",
        "--N",
        "3",
        "--weights",
        &format!("file:{}", outside.display()),
    ]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn csv_output_is_key_value() {
    let out = run(&[
        "kernel",
        "--Q",
        "6",
        "--c",
        "0",
        "--output",
        "csv",
        "--no-wall-time",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("key,value"));
    // K(0) = Σ φ(q) = |F(6)| − 1 = 12.
    assert!(text.contains("results.kernel,12\n"), "{text}");
    assert!(text.ends_with("wall_ms,0\n"));
}
