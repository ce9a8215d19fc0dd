mod common;

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use common::{chancut, json, schema_errors, stdout, INVOCATIONS};
use serde_json::Value;

fn f(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn probs_at_aligned_quarter_angles() {
    let v = json(&[
        "probs",
        "--beta",
        "45",
        "--phi",
        "0",
        "--beta-prime",
        "45",
        "--phi-prime",
        "0",
    ]);
    let expected = [0.25, 0.0, 0.25, 0.0, 0.0, 0.25, 0.0, 0.25];
    let probs = v["probabilities"].as_array().unwrap();
    assert_eq!(probs.len(), 8);
    for (p, e) in probs.iter().zip(expected) {
        assert!(close(f(&p["probability"]), e, 1e-12), "{p}");
    }
    assert_eq!(probs[5]["bell_outcome"], "10");
    assert_eq!(probs[5]["bob_outcome"], "1");
    assert!(f(&v["checks"]["oracle_max_deviation"]) <= 1e-12);
    assert_eq!(f(&v["checks"]["sum"]), 1.0);
}

#[test]
fn probs_csv_layout() {
    let text = stdout(&["probs", "--format", "csv"]);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "bell_outcome,bob_outcome,probability");
    assert_eq!(lines.len(), 9);
    assert!(!text.contains('\r'));
    assert!(text.ends_with('\n'));
}

#[test]
fn product_input_ignores_phase() {
    let a = json(&["probs", "--beta", "0", "--phi", "10", "--beta-prime", "33"]);
    let b = json(&[
        "probs",
        "--beta",
        "0",
        "--phi",
        "-120",
        "--beta-prime",
        "33",
    ]);
    assert_eq!(a["probabilities"], b["probabilities"]);
}

#[test]
fn malformed_angle_is_a_usage_error() {
    for args in [
        &["probs", "--beta", "forty"][..],
        &["probs", "--phi", "inf"],
        &["bell-test", "--visibility", "1.5"],
        &["scan", "--grid", "phi=0:10:0"],
        &["scan", "--grid", "gamma=0:10:1"],
        &["frobnicate"],
    ] {
        let out = chancut(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn oversize_and_repeated_grids_are_rejected() {
    let out = chancut(&[
        "scan",
        "--grid",
        "beta=0:90:1",
        "--grid",
        "phi=0:360:1",
        "--grid",
        "phi_prime=0:360:1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let out = chancut(&["scan", "--grid", "phi=0:1:1", "--grid", "phi=0:2:1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_only_commands_reject_csv() {
    for cmd in ["bell-test", "swap", "noise-threshold", "teleport-fidelity"] {
        assert_eq!(
            chancut(&[cmd, "--format", "csv"]).status.code(),
            Some(2),
            "{cmd}"
        );
    }
}

#[test]
fn bell_test_reports() {
    let v = json(&["bell-test"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["violated"], true);
    assert!(close(f(&v["quantum_value"]), 2.0, 1e-11));
    assert!(close(f(&v["lhv_upper_bound"]), SQRT_2, 1e-11));
    assert!(close(f(&v["violation_ratio"]), SQRT_2, 1e-8));
    assert!(close(f(&v["margin"]), 2.0 - SQRT_2, 1e-11));

    let v = json(&["bell-test", "--visibility", "0.65"]);
    assert_eq!(v["violated"], false);
    let v = json(&["bell-test", "--visibility", "1.0"]);
    assert!(close(f(&v["margin"]), 0.5858, 1e-4));
}

#[test]
fn scan_reproduces_the_super_vector() {
    let text = stdout(&[
        "scan",
        "--beta",
        "45",
        "--beta-prime",
        "45",
        "--grid",
        "phi=0:90:90",
        "--grid",
        "phi_prime=-45:45:90",
    ]);
    let h = FRAC_1_SQRT_2;
    let expected = [
        (0.0, -45.0, h, 0.0),
        (0.0, 45.0, h, 0.0),
        (90.0, -45.0, 0.0, -h),
        (90.0, 45.0, 0.0, h),
    ];
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "beta,phi,beta_prime,phi_prime,E_x,E_y");
    assert_eq!(lines.len(), 5);
    for (line, (phi, phi_prime, ex, ey)) in lines[1..].iter().zip(expected) {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cells[1], phi);
        assert_eq!(cells[3], phi_prime);
        assert!(
            close(cells[4], ex, 1e-11) && close(cells[5], ey, 1e-11),
            "{line}"
        );
    }
}

#[test]
fn scan_row_counts() {
    let single = stdout(&["scan"]);
    assert_eq!(single.lines().count(), 2);
    let text = stdout(&[
        "scan",
        "--grid",
        "beta=0:90:30",
        "--grid",
        "phi=-180:180:45",
        "--grid",
        "phi_prime=0:10:5",
    ]);
    assert_eq!(text.lines().count(), 1 + 4 * 9 * 3);
    // beta varies slowest
    let betas: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert!(betas[..27].iter().all(|b| *b == "0"));
    assert_eq!(betas[27], "30");
}

#[test]
fn noise_threshold_report() {
    let v = json(&["noise-threshold"]);
    assert!(close(f(&v["threshold"]), FRAC_1_SQRT_2, 1e-9));
    assert_eq!(v["below"]["violated"], false);
    assert_eq!(v["above"]["violated"], true);
}

#[test]
fn teleport_fidelity_report() {
    let v = json(&["teleport-fidelity", "--beta", "30", "--phi", "77"]);
    for o in v["outcomes"].as_array().unwrap() {
        assert!(close(f(&o["fidelity"]), 1.0, 1e-12));
        assert!(close(f(&o["probability"]), 0.25, 1e-12));
    }
}

#[test]
fn swap_report() {
    let v = json(&["swap"]);
    for o in v["outcomes"].as_array().unwrap() {
        assert!(close(f(&o["chsh"]["value"]), 2.828427, 1e-6));
        assert!(close(f(&o["reduced_purity"]), 0.5, 1e-12));
    }
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = std::env::temp_dir().join(format!("chancut-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("probs.json");
    let out = chancut(&["probs", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&["probs"]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn every_payload_matches_its_schema() {
    for (command, args) in INVOCATIONS {
        let errors = schema_errors(command, &json(args));
        assert!(errors.is_empty(), "{command}: {errors:?}");
    }
}

#[test]
fn schema_rejects_a_wrong_version() {
    let mut v = json(&["noise-threshold"]);
    v["schema"] = 2.into();
    assert!(!schema_errors("noise-threshold", &v).is_empty());
}
