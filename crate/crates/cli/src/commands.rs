use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use chancut_core::corrvec::{
    build_quantum_super_vector, correlation_closed_form, correlation_from_distribution, super_dot,
    super_norm_sq, GridSuperVector, SuperVector, ALICE_PHASES_DEG, BOB_PHASES_DEG,
    SUPER_VECTOR_SETTINGS_DEG,
};
use chancut_core::lhv::DeterministicStrategy;
use chancut_core::noise::{bell_test_at, noisy_super_vector, threshold_report, Visibility};
use chancut_core::qstate::{Matrix2, PureState, StateError};
use chancut_core::swap::run_swap;
use chancut_core::teleport::{
    correction_unitary, joint_distribution_closed_form, joint_distribution_simulated,
    run_full_teleportation, AnalyzerSettings, BellOutcome, PreparationSettings,
};
use serde_json::{json, Value};
use thiserror::Error;

use crate::args::{Angles, Axis, Format, GridSpec, MAX_SCAN_ROWS};
use crate::output::{render_csv, render_json, Cell, SCHEMA_VERSION};

/// Largest deviation a `checks` entry may report on a passing run.
pub const CHECK_TOLERANCE: f64 = 1e-12;
/// Allowed excess of any CHSH value over 2√2.
pub const TSIRELSON_SLACK: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invariant breach: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl From<StateError> for CliError {
    fn from(e: StateError) -> Self {
        CliError::Invariant(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn ensure(name: &str, deviation: f64, tolerance: f64) -> Result<()> {
    if deviation <= tolerance {
        Ok(())
    } else {
        Err(CliError::Invariant(format!(
            "{name} = {deviation:e} exceeds {tolerance:e}"
        )))
    }
}

fn json_only(format: Format, command: &str) -> Result<()> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::Usage(format!(
            "{command} only supports --format json"
        ))),
    }
}

fn complex_pair(z: num_complex::Complex64) -> Value {
    json!([z.re, z.im])
}

fn matrix_json(u: &Matrix2) -> Value {
    Value::Array(
        u.iter()
            .map(|row| Value::Array(row.iter().map(|&z| complex_pair(z)).collect()))
            .collect(),
    )
}

fn state_json(s: &PureState) -> Value {
    json!({
        "labels": s.labels().iter().map(|l| l.to_string()).collect::<Vec<_>>(),
        "amplitudes": s.amplitudes().iter().map(|&z| complex_pair(z)).collect::<Vec<_>>(),
    })
}

fn settings_json(a: &Angles) -> Value {
    json!({
        "beta": a.beta,
        "phi": a.phi,
        "beta_prime": a.beta_prime,
        "phi_prime": a.phi_prime,
    })
}

fn radians(a: &Angles) -> (PreparationSettings, AnalyzerSettings) {
    (
        PreparationSettings::from_degrees(a.beta, a.phi),
        AnalyzerSettings::from_degrees(a.beta_prime, a.phi_prime),
    )
}

pub fn probs(angles: &Angles, format: Format) -> Result<String> {
    let (prep, analyzer) = radians(angles);
    let closed = joint_distribution_closed_form(&prep, &analyzer);
    let simulated = joint_distribution_simulated(&prep, &analyzer)?;
    let sum = closed.total();
    let marginal = BellOutcome::ALL
        .iter()
        .map(|&c| (closed.alice_marginal(c) - 0.25).abs())
        .fold(0.0, f64::max);
    let oracle = closed.max_deviation(&simulated);
    ensure("sum deviation", (sum - 1.0).abs(), CHECK_TOLERANCE)?;
    ensure("marginal deviation", marginal, CHECK_TOLERANCE)?;
    ensure("oracle deviation", oracle, CHECK_TOLERANCE)?;

    Ok(match format {
        Format::Csv => render_csv(
            &["bell_outcome", "bob_outcome", "probability"],
            closed
                .iter()
                .map(|(c, i, p)| vec![c.label().into(), i.label().into(), p.into()]),
        ),
        Format::Json => render_json(json!({
            "schema": SCHEMA_VERSION,
            "command": "probs",
            "settings_deg": settings_json(angles),
            "probabilities": closed.iter().map(|(c, i, p)| json!({
                "bell_outcome": c.label(),
                "bob_outcome": i.label(),
                "probability": p,
            })).collect::<Vec<_>>(),
            "checks": {
                "sum": sum,
                "max_marginal_deviation": marginal,
                "oracle_max_deviation": oracle,
            },
        })),
    })
}

fn super_vector_json(v: &SuperVector) -> Value {
    Value::Array(
        SUPER_VECTOR_SETTINGS_DEG
            .iter()
            .zip(&v.entries)
            .map(|(&(phi, phi_prime), e)| json!({"phi": phi, "phi_prime": phi_prime, "e_x": e.x, "e_y": e.y}))
            .collect(),
    )
}

fn strategy_json(s: &DeterministicStrategy) -> Value {
    json!({
        "bob": BOB_PHASES_DEG.iter().zip(s.bob).map(|(&phi_prime, v)| json!({
            "phi_prime": phi_prime,
            "value": v.value(),
        })).collect::<Vec<_>>(),
        "alice": ALICE_PHASES_DEG.iter().zip(s.alice).map(|(&phi, v)| json!({
            "phi": phi,
            "value": [v.0.value(), v.1.value()],
        })).collect::<Vec<_>>(),
    })
}

pub fn bell_test(visibility: f64, format: Format) -> Result<String> {
    json_only(format, "bell-test")?;
    let vis = Visibility::new(visibility).map_err(|e| CliError::Usage(e.to_string()))?;
    let ideal = build_quantum_super_vector();
    let tested = noisy_super_vector(vis);
    let report = bell_test_at(vis);

    let norm_route = (super_norm_sq(&ideal) - super_dot(&ideal, &ideal)).abs();
    let symmetry = (report.lhv_upper_bound + report.lhv_lower_bound).abs();
    let scaling = tested.max_abs_diff(&ideal.scale(visibility));
    let expected_value = (report.quantum_value - visibility * super_norm_sq(&ideal)).abs();
    ensure("norm route deviation", norm_route, CHECK_TOLERANCE)?;
    ensure("bound symmetry deviation", symmetry, CHECK_TOLERANCE)?;
    ensure("visibility scaling deviation", scaling, CHECK_TOLERANCE)?;
    ensure("quantum value deviation", expected_value, CHECK_TOLERANCE)?;

    Ok(render_json(json!({
        "schema": SCHEMA_VERSION,
        "command": "bell-test",
        "visibility": visibility,
        "quantum_value": report.quantum_value,
        "lhv_upper_bound": report.lhv_upper_bound,
        "lhv_lower_bound": report.lhv_lower_bound,
        "violated": report.violated,
        "violation_ratio": report.violation_ratio,
        "margin": report.margin(),
        "argmax_strategy": strategy_json(&report.argmax),
        "quantum_super_vector": super_vector_json(&ideal),
        "tested_super_vector": super_vector_json(&tested),
        "checks": {
            "norm_route_deviation": norm_route,
            "bound_symmetry_deviation": symmetry,
            "visibility_scaling_deviation": scaling,
        },
    })))
}

/// Per-axis value lists in `Axis::ALL` order.
fn scan_axes(angles: &Angles, grids: &[GridSpec]) -> Result<Vec<Vec<f64>>> {
    let fixed = [angles.beta, angles.phi, angles.beta_prime, angles.phi_prime];
    let mut total: usize = 1;
    let mut axes = Vec::with_capacity(4);
    for (axis, value) in Axis::ALL.into_iter().zip(fixed) {
        let specs: Vec<_> = grids.iter().filter(|g| g.axis == axis).collect();
        let values = match specs[..] {
            [] => vec![value],
            [g] => {
                let n = g.count().filter(|&n| n <= MAX_SCAN_ROWS).ok_or_else(|| {
                    CliError::Usage(format!("grid on {} is too large", axis.name()))
                })?;
                (0..n).map(|k| g.value(k)).collect()
            }
            _ => {
                return Err(CliError::Usage(format!(
                    "axis {} given more than once",
                    axis.name()
                )))
            }
        };
        total = total.saturating_mul(values.len());
        axes.push(values);
    }
    if total > MAX_SCAN_ROWS {
        return Err(CliError::Usage(format!(
            "grid has {total} rows, limit is {MAX_SCAN_ROWS}"
        )));
    }
    Ok(axes)
}

pub fn scan(angles: &Angles, grids: &[GridSpec], format: Format) -> Result<String> {
    let axes = scan_axes(angles, grids)?;
    let mut degrees = Vec::new();
    for &b in &axes[0] {
        for &p in &axes[1] {
            for &bp in &axes[2] {
                for &pp in &axes[3] {
                    degrees.push([b, p, bp, pp]);
                }
            }
        }
    }
    let settings = degrees
        .iter()
        .map(|d| {
            (
                PreparationSettings::from_degrees(d[0], d[1]),
                AnalyzerSettings::from_degrees(d[2], d[3]),
            )
        })
        .collect();
    let grid = GridSuperVector::evaluate(settings, correlation_closed_form);
    let route = grid
        .settings
        .iter()
        .zip(&grid.entries)
        .map(|((p, a), e)| {
            correlation_from_distribution(&joint_distribution_closed_form(p, a)).max_abs_diff(e)
        })
        .fold(0.0, f64::max);
    ensure("route deviation", route, CHECK_TOLERANCE)?;

    Ok(match format {
        Format::Csv => render_csv(
            &["beta", "phi", "beta_prime", "phi_prime", "E_x", "E_y"],
            degrees.iter().zip(&grid.entries).map(|(d, e)| {
                let mut row: Vec<Cell> = d.iter().map(|&x| x.into()).collect();
                row.push(e.x.into());
                row.push(e.y.into());
                row
            }),
        ),
        Format::Json => render_json(json!({
            "schema": SCHEMA_VERSION,
            "command": "scan",
            "axes": Axis::ALL.iter().zip(&axes).map(|(a, v)| json!({
                "axis": a.name(),
                "count": v.len(),
                "values": v,
            })).collect::<Vec<_>>(),
            "rows": degrees.iter().zip(&grid.entries).map(|(d, e)| json!({
                "beta": d[0],
                "phi": d[1],
                "beta_prime": d[2],
                "phi_prime": d[3],
                "e_x": e.x,
                "e_y": e.y,
            })).collect::<Vec<_>>(),
            "norm_sq": grid.norm_sq(),
            "checks": {
                "route_max_deviation": route,
            },
        })),
    })
}

pub fn swap(format: Format) -> Result<String> {
    json_only(format, "swap")?;
    let tsirelson = 2.0 * SQRT_2;
    let report = run_swap()?;
    let sum = (report.total_probability() - 1.0).abs();
    let mut purity: f64 = 0.0;
    let mut fidelity: f64 = 0.0;
    let mut seen: f64 = 0.0;
    for o in &report.outcomes {
        purity = purity.max((o.reduced_purity - 0.5).abs());
        let expected = chancut_core::swap::analytic_post_state(o.outcome);
        fidelity = fidelity.max((expected.fidelity(&o.post_state)? - 1.0).abs());
        seen = seen.max(o.chsh.max_abs_seen);
    }
    let excess = (seen - tsirelson).max(0.0);
    ensure("probability sum deviation", sum, CHECK_TOLERANCE)?;
    ensure("purity deviation", purity, CHECK_TOLERANCE)?;
    ensure(
        "post-selection fidelity deviation",
        fidelity,
        CHECK_TOLERANCE,
    )?;
    ensure("Tsirelson excess", excess, TSIRELSON_SLACK)?;

    Ok(render_json(json!({
        "schema": SCHEMA_VERSION,
        "command": "swap",
        "tsirelson_bound": tsirelson,
        "outcomes": report.outcomes.iter().map(|o| {
            let [a, a_prime, b, b_prime] = o.chsh.angles.to_degrees();
            json!({
                "bell_outcome": o.outcome.label(),
                "probability": o.probability,
                "post_state": state_json(&o.post_state),
                "reduced_purity": o.reduced_purity,
                "chsh": {
                    "value": o.chsh.value,
                    "angles_deg": {"a": a, "a_prime": a_prime, "b": b, "b_prime": b_prime},
                },
            })
        }).collect::<Vec<_>>(),
        "checks": {
            "probability_sum_deviation": sum,
            "max_purity_deviation": purity,
            "max_post_selection_fidelity_deviation": fidelity,
            "tsirelson_excess": excess,
        },
    })))
}

/// Visibilities reported alongside the threshold.
const REFERENCE_VISIBILITIES: [f64; 4] = [0.65, 0.70, 0.72, 1.0];

pub fn noise_threshold(format: Format) -> Result<String> {
    json_only(format, "noise-threshold")?;
    let r = threshold_report(0.01);
    let deviation = (r.threshold - FRAC_1_SQRT_2).abs();
    ensure("threshold deviation", deviation, CHECK_TOLERANCE)?;
    if r.below.1 || !r.above.1 {
        return Err(CliError::Invariant(
            "verdict does not flip at the threshold".into(),
        ));
    }
    let references: Vec<Value> = REFERENCE_VISIBILITIES
        .iter()
        .map(|&v| {
            let t = bell_test_at(Visibility::new(v).expect("in range"));
            json!({
                "visibility": v,
                "quantum_value": t.quantum_value,
                "violated": t.violated,
                "margin": t.margin(),
            })
        })
        .collect();
    Ok(render_json(json!({
        "schema": SCHEMA_VERSION,
        "command": "noise-threshold",
        "threshold": r.threshold,
        "threshold_percent": 100.0 * r.threshold,
        "below": {"visibility": r.below.0, "violated": r.below.1},
        "above": {"visibility": r.above.0, "violated": r.above.1},
        "reference_points": references,
        "checks": {
            "threshold_vs_inverse_sqrt2": deviation,
        },
    })))
}

pub fn teleport_fidelity(beta: f64, phi: f64, format: Format) -> Result<String> {
    json_only(format, "teleport-fidelity")?;
    let runs = run_full_teleportation(&PreparationSettings::from_degrees(beta, phi))?;
    let sum = (runs.iter().map(|r| r.probability).sum::<f64>() - 1.0).abs();
    let prob = runs
        .iter()
        .map(|r| (r.probability - 0.25).abs())
        .fold(0.0, f64::max);
    let fid = runs
        .iter()
        .map(|r| (r.fidelity - 1.0).abs())
        .fold(0.0, f64::max);
    ensure("probability sum deviation", sum, CHECK_TOLERANCE)?;
    ensure("probability deviation", prob, CHECK_TOLERANCE)?;
    ensure("fidelity deviation", fid, CHECK_TOLERANCE)?;
    Ok(render_json(json!({
        "schema": SCHEMA_VERSION,
        "command": "teleport-fidelity",
        "settings_deg": {"beta": beta, "phi": phi},
        "outcomes": runs.iter().map(|r| json!({
            "bell_outcome": r.outcome.label(),
            "probability": r.probability,
            "fidelity": r.fidelity,
            "correction": matrix_json(&correction_unitary(r.outcome)),
        })).collect::<Vec<_>>(),
        "checks": {
            "probability_sum_deviation": sum,
            "max_probability_deviation": prob,
            "max_fidelity_deviation": fid,
        },
    })))
}
