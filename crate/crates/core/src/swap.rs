//! Entanglement swapping as teleportation of entanglement.
//!
//! `D,A` and `B,C` start as two EPR pairs. A Bell-state measurement on `B,A`
//! leaves `D,C` entangled although they never interacted; no correction is
//! applied, and CHSH is evaluated on each post-selected pair.

use std::f64::consts::PI;

use crate::qstate::{gates, measure_probabilities, ProjectiveBasis, PureState, Result, StateError};
use crate::teleport::{
    bell_basis, correction_unitary, dichotomic_basis_on, epr, AnalyzerSettings, BellOutcome,
    ALICE_PARTNER, BOB, INPUT,
};

pub const SOURCE: char = 'D';

/// Grid step of the coarse CHSH scan, in degrees.
pub const SCAN_STEP_DEG: f64 = 1.0;
/// The refinement stops once its step is below this many radians.
pub const REFINE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshAngles {
    pub a: f64,
    pub a_prime: f64,
    pub b: f64,
    pub b_prime: f64,
}

impl ChshAngles {
    fn as_array(&self) -> [f64; 4] {
        [self.a, self.a_prime, self.b, self.b_prime]
    }

    fn from_array(x: [f64; 4]) -> Self {
        Self {
            a: x[0],
            a_prime: x[1],
            b: x[2],
            b_prime: x[3],
        }
    }

    pub fn to_degrees(&self) -> [f64; 4] {
        self.as_array().map(f64::to_degrees)
    }
}

fn outcome_value(index: usize) -> f64 {
    // outcome 0 → −1, outcome 1 → +1
    if index == 0 {
        -1.0
    } else {
        1.0
    }
}

fn real_analyzer(label: char, angle: f64) -> ProjectiveBasis {
    dichotomic_basis_on(label, &AnalyzerSettings::new(angle, 0.0))
}

fn product_basis(first: &ProjectiveBasis, second: &ProjectiveBasis) -> Result<ProjectiveBasis> {
    let mut states = Vec::with_capacity(4);
    let mut labels = Vec::with_capacity(4);
    for (s, l) in first.states().iter().zip(first.outcome_labels()) {
        for (t, m) in second.states().iter().zip(second.outcome_labels()) {
            states.push(s.tensor(t)?);
            labels.push(format!("{l}{m}"));
        }
    }
    ProjectiveBasis::new(states, labels)
}

/// Scalar correlation `⟨x ⊗ y⟩` of ±1-valued real analyzers at angles
/// `alpha` (first factor) and `beta` (second factor), measured with the
/// product analyzer basis.
pub fn pair_correlation(state: &PureState, alpha: f64, beta: f64) -> Result<f64> {
    let labels = state.labels();
    let basis = product_basis(
        &real_analyzer(labels[0], alpha),
        &real_analyzer(labels[1], beta),
    )?;
    let outcomes = measure_probabilities(state, &basis, labels)?;
    Ok(outcomes
        .iter()
        .enumerate()
        .map(|(k, o)| o.probability * outcome_value(k >> 1) * outcome_value(k & 1))
        .sum())
}

/// Real analyzer eigenvectors `[|0⟩, |1⟩]` at `angle`.
fn analyzer_vectors(angle: f64) -> [[f64; 2]; 2] {
    let (s, c) = angle.sin_cos();
    [[c, s], [-s, c]]
}

/// Same as [`pair_correlation`] with the Born amplitudes contracted directly;
/// used for the dense angle table.
fn pair_correlation_fast(state: &PureState, alpha: f64, beta: f64) -> f64 {
    let psi = state.amplitudes();
    let (left, right) = (analyzer_vectors(alpha), analyzer_vectors(beta));
    let mut e = 0.0;
    for (i, u) in left.iter().enumerate() {
        for (j, w) in right.iter().enumerate() {
            let amplitude = u[0] * w[0] * psi[0]
                + u[0] * w[1] * psi[1]
                + u[1] * w[0] * psi[2]
                + u[1] * w[1] * psi[3];
            e += amplitude.norm_sqr() * outcome_value(i) * outcome_value(j);
        }
    }
    e
}

/// `S = E(a,b) − E(a,b′) + E(a′,b) + E(a′,b′)` on a two-qubit state.
pub fn chsh_on_pair(state: &PureState, angles: &ChshAngles) -> Result<f64> {
    let e = |x, y| pair_correlation(state, x, y);
    Ok(e(angles.a, angles.b)? - e(angles.a, angles.b_prime)?
        + e(angles.a_prime, angles.b)?
        + e(angles.a_prime, angles.b_prime)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshOptimum {
    /// Largest `|S|` found.
    pub value: f64,
    /// Sign of `S` at the optimum.
    pub sign: f64,
    pub angles: ChshAngles,
    /// Largest `|S|` evaluated anywhere in the scan.
    pub max_abs_seen: f64,
}

/// Maximizes `|S|` over real analyzers: exhaustive 1° grid, then a
/// compass search from the best grid point.
pub fn maximize_chsh(state: &PureState) -> Result<ChshOptimum> {
    if state.num_qubits() != 2 {
        return Err(StateError::QubitCount(state.num_qubits()));
    }
    let n = (180.0 / SCAN_STEP_DEG).round() as usize;
    let angle = |k: usize| (k as f64 * SCAN_STEP_DEG).to_radians();
    let mut table = vec![vec![0.0; n]; n];
    for (i, row) in table.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            *e = pair_correlation_fast(state, angle(i), angle(j));
        }
    }

    // For fixed (b, b′) the a- and a′-terms separate.
    let mut best = (f64::NEG_INFINITY, 1.0, [0usize; 4]);
    for b in 0..n {
        for bp in 0..n {
            let mut diff = (f64::NEG_INFINITY, 0, f64::INFINITY, 0);
            let mut sum = (f64::NEG_INFINITY, 0, f64::INFINITY, 0);
            for (a, row) in table.iter().enumerate() {
                let d = row[b] - row[bp];
                let s = row[b] + row[bp];
                if d > diff.0 {
                    diff.0 = d;
                    diff.1 = a;
                }
                if d < diff.2 {
                    diff.2 = d;
                    diff.3 = a;
                }
                if s > sum.0 {
                    sum.0 = s;
                    sum.1 = a;
                }
                if s < sum.2 {
                    sum.2 = s;
                    sum.3 = a;
                }
            }
            let high = diff.0 + sum.0;
            let low = diff.2 + sum.2;
            if high > best.0 {
                best = (high, 1.0, [diff.1, sum.1, b, bp]);
            }
            if -low > best.0 {
                best = (-low, -1.0, [diff.3, sum.3, b, bp]);
            }
        }
    }
    let (grid_value, sign, idx) = best;
    let mut max_abs_seen = grid_value;

    let objective = |x: &[f64; 4]| -> Result<f64> {
        Ok(sign * chsh_on_pair(state, &ChshAngles::from_array(*x))?)
    };
    let mut x = idx.map(angle);
    let mut fx = objective(&x)?;
    let mut step = SCAN_STEP_DEG.to_radians();
    while step > REFINE_TOLERANCE {
        let mut improved = false;
        for k in 0..4 {
            for dir in [1.0, -1.0] {
                let mut trial = x;
                trial[k] += dir * step;
                let ft = objective(&trial)?;
                max_abs_seen = max_abs_seen.max(ft.abs());
                if ft > fx {
                    x = trial;
                    fx = ft;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    max_abs_seen = max_abs_seen.max(fx.abs());
    Ok(ChshOptimum {
        value: fx,
        sign,
        angles: ChshAngles::from_array(x.map(|t| t.rem_euclid(PI))),
        max_abs_seen,
    })
}

#[derive(Debug, Clone)]
pub struct SwapOutcome {
    pub outcome: BellOutcome,
    pub probability: f64,
    /// Conditional state of `D,C`.
    pub post_state: PureState,
    /// `Tr ρ_D²`.
    pub reduced_purity: f64,
    pub chsh: ChshOptimum,
}

#[derive(Debug, Clone)]
pub struct SwapReport {
    pub outcomes: Vec<SwapOutcome>,
}

impl SwapReport {
    pub fn total_probability(&self) -> f64 {
        self.outcomes.iter().map(|o| o.probability).sum()
    }

    pub fn get(&self, outcome: BellOutcome) -> &SwapOutcome {
        &self.outcomes[outcome.index()]
    }
}

/// `EPR(D,A) ⊗ EPR(B,C)`.
pub fn swap_initial_state() -> PureState {
    epr(SOURCE, INPUT)
        .tensor(&epr(ALICE_PARTNER, BOB))
        .expect("disjoint labels")
}

/// Bell measurement on `B,A`; `D,C` states per outcome, without analysis.
pub fn post_selected_pairs() -> Result<Vec<(BellOutcome, f64, PureState)>> {
    let state = swap_initial_state();
    let bell = bell_basis();
    measure_probabilities(&state, &bell, bell.labels())?
        .into_iter()
        .zip(BellOutcome::ALL)
        .map(|(m, c)| {
            let pair = m.remainder.ok_or(StateError::ZeroNorm)?;
            Ok((c, m.probability, pair))
        })
        .collect()
}

/// Pair state expected from teleporting `A`'s half of `EPR(D,A)` to `C`
/// without correction.
pub fn analytic_post_state(outcome: BellOutcome) -> PureState {
    let undo = gates::adjoint(&correction_unitary(outcome));
    epr(SOURCE, BOB)
        .apply_local_unitary(&undo, BOB)
        .expect("adjoint of a unitary is unitary")
}

pub fn run_swap() -> Result<SwapReport> {
    let outcomes = post_selected_pairs()?
        .into_iter()
        .map(|(outcome, probability, post_state)| {
            Ok(SwapOutcome {
                outcome,
                probability,
                reduced_purity: post_state.reduced_purity(&[SOURCE])?,
                chsh: maximize_chsh(&post_state)?,
                post_state,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SwapReport { outcomes })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Subensemble {
    pub probability: f64,
    pub chsh_max: f64,
    pub chsh: ChshOptimum,
}

/// Keeps only the runs where Alice saw `outcome`.
pub fn single_outcome_subensemble(outcome: BellOutcome) -> Result<Subensemble> {
    let (_, probability, pair) = post_selected_pairs()?.swap_remove(outcome.index());
    let chsh = maximize_chsh(&pair)?;
    Ok(Subensemble {
        probability,
        chsh_max: chsh.value,
        chsh,
    })
}
