use std::f64::consts::PI;
use std::process::Command;

use serde_json::Value;
use thetakit_cli::run;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn call(args: &[&str], tol_env: Option<&str>) -> Out {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("thetakit").chain(args.iter().copied());
    let code = run(argv, tol_env, &mut out, &mut err);
    Out {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn json(args: &[&str]) -> Value {
    let o = call(args, None);
    assert_eq!(o.code, 0, "{args:?}: {}", o.stderr);
    serde_json::from_str(&o.stdout).unwrap()
}

fn value(args: &[&str]) -> f64 {
    json(args)["value"].as_f64().unwrap()
}

#[test]
fn theta3_at_half() {
    // 1 + 2 sum 2^{-n^2}
    let oracle = 1.0 + 2.0 * (1..10).map(|n: i32| 0.5f64.powi(n * n)).sum::<f64>();
    for method in ["series", "product"] {
        let v = value(&[
            "theta", "eval", "--kind", "3", "--z", "0", "--q", "0.5", "--method", method,
        ]);
        assert!((v - oracle).abs() < 1e-14, "{method}: {v}");
    }
}

#[test]
fn pmf_at_zero_is_reciprocal_theta_constant() {
    // theta_3(0, e^{-pi}) = pi^{1/4} / Gamma(3/4)
    let theta = PI.powf(0.25) / 1.225_416_702_465_177_6;
    let v = value(&["dist", "pmf", "--family", "theta3", "--c", "1", "--n", "0"]);
    assert!((v - 1.0 / theta).abs() < 1e-14, "{v}");
}

#[test]
fn killed_density_matches_sine_series() {
    let (t, x, y) = (0.5, 0.3, 0.6);
    // sine modes of [-1, 1], halved for the density with respect to 2dy
    let oracle: f64 = (1..60)
        .map(|n| {
            let w = n as f64 * PI / 2.0;
            0.5 * (w * (x + 1.0)).sin() * (w * (y + 1.0)).sin() * (-w * w * t / 2.0).exp()
        })
        .sum();
    for method in ["images", "spectral"] {
        let v = value(&[
            "bm",
            "density",
            "--process",
            "killed",
            "--method",
            method,
            "--t",
            "0.5",
            "--x",
            "0.3",
            "--y",
            "0.6",
        ]);
        assert!((v - oracle).abs() < 1e-13, "{method}: {v} vs {oracle}");
    }
}

#[test]
fn kolmogorov_golden() {
    let v = value(&["kolmogorov", "cdf", "--h", "1"]);
    assert!((v - 0.730_000_328_322_645_5).abs() < 1e-15);
    let e = value(&["kolmogorov", "cdf", "--h", "1", "--route", "elliptic"]);
    assert!((e - v).abs() < 1e-13);
}

#[test]
fn reals_round_trip_exactly() {
    let o = call(&["elliptic", "k", "--k", "0.7071067811865476"], None);
    let doc: Value = serde_json::from_str(&o.stdout).unwrap();
    let printed = doc["value"].as_f64().unwrap();
    let direct = thetakit::elliptic::ellip_k(std::f64::consts::FRAC_1_SQRT_2).unwrap();
    assert_eq!(printed.to_bits(), direct.to_bits());
    assert!(o.stdout.contains("e0"), "scientific notation expected: {}", o.stdout);
}

#[test]
fn record_shape() {
    let doc = json(&["dist", "var", "--family", "theta2", "--c", "1", "--route", "lambert"]);
    for key in ["command", "inputs", "value", "tol", "provenance"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    assert_eq!(doc["provenance"], "series");
    assert_eq!(doc["inputs"]["family"], "theta2");
}

#[test]
fn sampling_is_seeded() {
    let args = [
        "dist", "sample", "--family", "theta2", "--c", "0.5", "--n", "200", "--seed", "42",
    ];
    let a = call(&args, None);
    let b = call(&args, None);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let other = call(
        &[
            "dist", "sample", "--family", "theta2", "--c", "0.5", "--n", "200", "--seed", "43",
        ],
        None,
    );
    assert_ne!(a.stdout, other.stdout);
    let doc: Value = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(doc["values"].as_array().unwrap().len(), 200);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["frobnicate"][..],
        &["theta", "eval", "--kind", "5", "--z", "0", "--q", "0.5"],
        &["tables", "4"],
        &["tables", "2", "--r", "11"],
        &["kolmogorov", "cdf", "--h", "1", "--route", "magic"],
    ] {
        let o = call(args, None);
        assert_eq!(o.code, 2, "{args:?}");
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn numeric_errors_exit_1() {
    for args in [
        &["theta", "eval", "--kind", "3", "--z", "0", "--q", "1.5"][..],
        &["elliptic", "modulus-from-c", "--c", "1e-4"],
        &["kolmogorov", "cdf", "--h=-1"],
        &["dist", "pmf", "--family", "theta3", "--c", "0", "--n", "0"],
    ] {
        let o = call(args, None);
        assert_eq!(o.code, 1, "{args:?}: {}", o.stdout);
        assert!(o.stderr.starts_with("error:"));
    }
}

#[test]
fn failed_verification_still_reports() {
    let o = call(&["verify", "--suite", "green-killed-xcheck", "--tol", "1e-300"], None);
    assert_eq!(o.code, 1);
    let doc: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(doc["rows"][0]["passed"], false);
}

#[test]
fn unknown_identity_is_rejected() {
    let o = call(&["verify", "--suite", "no-such-identity"], None);
    assert_ne!(o.code, 0);
}

#[test]
fn tolerance_from_environment() {
    let o = call(
        &["theta", "eval", "--kind", "3", "--z", "0", "--q", "0.5"],
        Some("1e-6"),
    );
    assert_eq!(o.code, 0);
    let doc: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(doc["tol"].as_f64().unwrap(), 1e-6);
    assert!((doc["value"].as_f64().unwrap() - 2.128_936_827_211_877).abs() < 1e-6);
    assert_eq!(
        call(
            &["theta", "eval", "--kind", "3", "--z", "0", "--q", "0.5"],
            Some("not-a-number")
        )
        .code,
        2
    );
}

#[test]
fn table_csv_headers() {
    let o = call(&["tables", "1", "--r", "1", "--format", "csv"], None);
    assert_eq!(o.code, 0);
    assert_eq!(
        o.stdout.lines().next(),
        Some("r,quantity,closed_form,recomputed,abs_diff")
    );
    for id in ["2", "3"] {
        let o = call(&["tables", id, "--format", "csv"], None);
        let mut lines = o.stdout.lines();
        assert_eq!(lines.next(), Some("r,closed_form,recomputed,abs_diff"));
        assert_eq!(lines.count(), 10);
    }
}

#[test]
fn table3_first_row_is_one_over_four_pi() {
    let doc = json(&["tables", "3", "--r", "1"]);
    let row = &doc["rows"][0];
    assert!((row["recomputed"].as_f64().unwrap() - 1.0 / (4.0 * PI)).abs() < 1e-15);
    assert!((row["printed"].as_f64().unwrap() - 7.957_75e-2).abs() < 1e-12);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_thetakit");
    let ok = Command::new(bin)
        .args(["verify", "--suite", "modular-3"])
        .env_remove("THETAKIT_TOL")
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).arg("frobnicate").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let env = Command::new(bin)
        .args(["kolmogorov", "cdf", "--h", "1"])
        .env("THETAKIT_TOL", "-3")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(2));
}
