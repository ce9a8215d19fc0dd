//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runs as part of `cargo test` (custom harness).

mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use chancut_core::corrvec::{
    build_quantum_super_vector, super_dot, super_norm_sq, CorrelationVector,
};
use chancut_core::lhv::{bell_test, enumerate_strategies, lhv_extremal_bound, StrategyEnsemble};
use chancut_core::noise::{bell_test_at, violation_threshold, Visibility};
use chancut_core::swap::{run_swap, single_outcome_subensemble};
use chancut_core::teleport::{
    joint_distribution_closed_form, joint_distribution_simulated, run_full_teleportation,
    AnalyzerSettings, BellOutcome, PreparationSettings,
};
use common::{chancut, schema_errors, INVOCATIONS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXACT: f64 = 1e-12;
const SEED: u64 = 0x7E1E_C0DE;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn oracle_equivalence() -> Outcome {
    const GRID: usize = 13;
    const RANDOM: usize = 1000;
    const TIME_LIMIT: Duration = Duration::from_secs(5);
    let betas: Vec<f64> = (0..GRID).map(|k| k as f64 * PI / 12.0).collect();
    let phases: Vec<f64> = (0..GRID).map(|k| -PI + k as f64 * PI / 6.0).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);

    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let mut compare = |p: PreparationSettings, a: AnalyzerSettings| -> Result<(), String> {
        let sim = joint_distribution_simulated(&p, &a).map_err(|e| e.to_string())?;
        worst = worst.max(joint_distribution_closed_form(&p, &a).max_deviation(&sim));
        count += 1;
        Ok(())
    };
    for &b in &betas {
        for &phi in &phases {
            for &bp in &betas {
                for &pp in &phases {
                    compare(
                        PreparationSettings::new(b, phi),
                        AnalyzerSettings::new(bp, pp),
                    )?;
                }
            }
        }
    }
    for _ in 0..RANDOM {
        let p = PreparationSettings::new(rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
        let a = AnalyzerSettings::new(rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
        compare(p, a)?;
    }
    let elapsed = start.elapsed();
    check(
        worst <= EXACT && count == GRID.pow(4) + RANDOM && elapsed < TIME_LIMIT,
        format!(
            "{count} settings, max deviation {worst:.2e}, {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn super_vector_reproduction() -> Outcome {
    let v = build_quantum_super_vector();
    let h = FRAC_1_SQRT_2;
    let expected = [(h, 0.0), (h, 0.0), (0.0, -h), (0.0, h)];
    let worst = v
        .entries
        .iter()
        .zip(expected)
        .map(|(e, (x, y))| e.max_abs_diff(&CorrelationVector::new(x, y)))
        .fold(0.0, f64::max);
    let norm = super_norm_sq(&v);
    check(
        worst <= EXACT && (norm - 2.0).abs() <= EXACT,
        format!("entry deviation {worst:.2e}, norm² = {norm:.15}"),
    )
}

fn lhv_bound_by_exhaustion() -> Outcome {
    let v = build_quantum_super_vector();
    let bound = lhv_extremal_bound(&v);
    let report = bell_test();
    check(
        enumerate_strategies().len() == 64
            && (bound.max - SQRT_2).abs() <= EXACT
            && (bound.min + SQRT_2).abs() <= EXACT
            && report.quantum_value > report.lhv_upper_bound
            && report.violated
            && (report.violation_ratio - SQRT_2).abs() <= EXACT,
        format!(
            "max {:.15}, min {:.15}, quantum {:.15}, ratio {:.15}",
            bound.max, bound.min, report.quantum_value, report.violation_ratio
        ),
    )
}

fn convex_mixture_soundness() -> Outcome {
    const ENSEMBLES: usize = 10_000;
    let v = build_quantum_super_vector();
    let strategies = enumerate_strategies();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..ENSEMBLES {
        let size = rng.gen_range(1..=64);
        let raw: Vec<(usize, f64)> = (0..size)
            .map(|_| (rng.gen_range(0..64), rng.gen::<f64>() + 1e-6))
            .collect();
        let total: f64 = raw.iter().map(|(_, w)| w).sum();
        let mut members: Vec<_> = raw
            .iter()
            .map(|&(i, w)| (strategies[i], w / total))
            .collect();
        let drift = 1.0 - members.iter().map(|(_, w)| w).sum::<f64>();
        members[0].1 += drift;
        let ensemble = StrategyEnsemble::new(members).map_err(|e| e.to_string())?;
        worst = worst.max(super_dot(&v, &ensemble.super_vector()).abs());
    }
    check(
        worst <= SQRT_2 + EXACT,
        format!("{ENSEMBLES} ensembles, max |(V_QM, V_LHV)| = {worst:.15}"),
    )
}

fn visibility_threshold() -> Outcome {
    let t = violation_threshold();
    let verdict = |v: f64| bell_test_at(Visibility::new(v).expect("in range")).violated;
    check(
        (t - FRAC_1_SQRT_2).abs() <= 1e-9 && verdict(0.72) && !verdict(0.70) && !verdict(0.65),
        format!(
            "v* = {t:.12}; violated at 0.72: {}, 0.70: {}, 0.65: {}",
            verdict(0.72),
            verdict(0.70),
            verdict(0.65)
        ),
    )
}

fn teleportation_sanity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let (mut dp, mut df): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let p = PreparationSettings::new(rng.gen_range(0.0..PI), rng.gen_range(-PI..PI));
        let runs = run_full_teleportation(&p).map_err(|e| e.to_string())?;
        if runs.len() != 4 {
            return Err(format!("{} outcomes", runs.len()));
        }
        for r in runs {
            dp = dp.max((r.probability - 0.25).abs());
            df = df.max((r.fidelity - 1.0).abs());
        }
    }
    check(
        dp <= EXACT && df <= EXACT,
        format!("100 preparations, probability deviation {dp:.2e}, fidelity deviation {df:.2e}"),
    )
}

fn swapping() -> Outcome {
    let tsirelson = 2.0 * SQRT_2;
    let report = run_swap().map_err(|e| e.to_string())?;
    let dp = report
        .outcomes
        .iter()
        .map(|o| (o.probability - 0.25).abs())
        .fold(0.0, f64::max);
    let dpur = report
        .outcomes
        .iter()
        .map(|o| (o.reduced_purity - 0.5).abs())
        .fold(0.0, f64::max);
    let mut dchsh: f64 = 0.0;
    let mut seen: f64 = report
        .outcomes
        .iter()
        .map(|o| o.chsh.max_abs_seen)
        .fold(0.0, f64::max);
    for c in BellOutcome::ALL {
        let sub = single_outcome_subensemble(c).map_err(|e| e.to_string())?;
        dchsh = dchsh.max((sub.chsh_max - tsirelson).abs());
        seen = seen.max(sub.chsh.max_abs_seen);
        if (sub.probability - 0.25).abs() > EXACT {
            return Err(format!(
                "subensemble {c} has probability {}",
                sub.probability
            ));
        }
    }
    check(
        dp <= EXACT && dpur <= EXACT && dchsh <= 1e-6 && seen <= tsirelson + 1e-9,
        format!(
            "probability dev {dp:.2e}, purity dev {dpur:.2e}, CHSH dev {dchsh:.2e}, max |S| seen {seen:.12}"
        ),
    )
}

fn cli_determinism() -> Outcome {
    let mut failures = Vec::new();
    let mut runs = INVOCATIONS
        .iter()
        .map(|(name, args)| (*name, args.to_vec(), true))
        .collect::<Vec<_>>();
    runs.push((
        "scan",
        vec![
            "scan",
            "--grid",
            "beta=0:90:15",
            "--grid",
            "phi=-180:180:30",
        ],
        false,
    ));
    runs.push(("probs", vec!["probs", "--format", "csv"], false));
    for (name, args, is_json) in &runs {
        let first = chancut(args);
        let second = chancut(args);
        if !first.status.success() {
            failures.push(format!("{args:?} exited with {:?}", first.status.code()));
            continue;
        }
        if first.stdout != second.stdout {
            failures.push(format!("{args:?} output differs between runs"));
        }
        if *is_json {
            match serde_json::from_slice(&first.stdout) {
                Ok(v) => {
                    let errors = schema_errors(name, &v);
                    if !errors.is_empty() {
                        failures.push(format!("{args:?}: {errors:?}"));
                    }
                }
                Err(e) => failures.push(format!("{args:?}: {e}")),
            }
        }
    }
    if failures.is_empty() {
        Ok(format!(
            "{} invocations byte-identical, JSON schema-valid",
            runs.len()
        ))
    } else {
        Err(failures.join("; "))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("oracle equivalence", oracle_equivalence),
        ("super-vector reproduction", super_vector_reproduction),
        ("LHV bound by exhaustion", lhv_bound_by_exhaustion),
        ("convex-mixture soundness", convex_mixture_soundness),
        ("visibility threshold", visibility_threshold),
        ("teleportation sanity", teleportation_sanity),
        ("swapping", swapping),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS  {}. {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {}. {name}: {detail}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
