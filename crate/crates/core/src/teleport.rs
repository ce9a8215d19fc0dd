//! Teleportation with the classical link cut.
//!
//! Subsystem `A` carries the input prepared by Cecil, `B` and `C` share an EPR
//! pair. Alice makes a Bell-state measurement on `B,A`, Bob measures `C` in a
//! dichotomic basis without learning her result. The joint statistics are
//! available both in closed form and from a state-vector simulation.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use num_complex::Complex64;

use crate::qstate::{
    gates, measure_probabilities, Matrix2, MeasurementOutcome, ProjectiveBasis, PureState, Result,
    StateError, TOLERANCE,
};

pub const INPUT: char = 'A';
pub const ALICE_PARTNER: char = 'B';
pub const BOB: char = 'C';

/// Reduces a `(mixing angle, phase)` pair describing `x|0⟩ + y e^{iφ}|1⟩`-type
/// qubits to mixing angle in `[0, π/2]` and phase in `(-π, π]`, up to a
/// global phase of the described state.
fn reduce_angles(beta: f64, phi: f64) -> (f64, f64) {
    let mut beta = beta.rem_euclid(PI);
    let mut phi = phi;
    if beta > PI / 2.0 {
        beta = PI - beta;
        phi += PI;
    }
    let mut phi = phi.rem_euclid(2.0 * PI);
    if phi > PI {
        phi -= 2.0 * PI;
    }
    (beta, phi)
}

/// Input state `sin β|A1⟩ + cos β e^{iφ}|A2⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreparationSettings {
    pub beta: f64,
    pub phi: f64,
}

impl PreparationSettings {
    pub fn new(beta: f64, phi: f64) -> Self {
        Self { beta, phi }
    }

    pub fn from_degrees(beta: f64, phi: f64) -> Self {
        Self::new(beta.to_radians(), phi.to_radians())
    }

    /// Equivalent settings in the reporting range.
    pub fn canonical(&self) -> Self {
        let (beta, phi) = reduce_angles(self.beta, self.phi);
        Self { beta, phi }
    }

    pub fn input_state(&self) -> PureState {
        PureState::new(
            vec![INPUT],
            vec![
                Complex64::new(self.beta.sin(), 0.0),
                Complex64::from_polar(self.beta.cos(), self.phi),
            ],
        )
        .expect("finite angles give a valid qubit")
    }
}

/// Bob's analyzer, `|0⟩ = cos β′|C1⟩ + sin β′ e^{iφ′}|C2⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyzerSettings {
    pub beta_prime: f64,
    pub phi_prime: f64,
}

impl AnalyzerSettings {
    pub fn new(beta_prime: f64, phi_prime: f64) -> Self {
        Self {
            beta_prime,
            phi_prime,
        }
    }

    pub fn from_degrees(beta_prime: f64, phi_prime: f64) -> Self {
        Self::new(beta_prime.to_radians(), phi_prime.to_radians())
    }

    pub fn canonical(&self) -> Self {
        let (beta_prime, phi_prime) = reduce_angles(self.beta_prime, self.phi_prime);
        Self {
            beta_prime,
            phi_prime,
        }
    }
}

/// Alice's Bell-state outcome; the label is the binary expansion of 0..=3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BellOutcome {
    B00,
    B01,
    B10,
    B11,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] = [Self::B00, Self::B01, Self::B10, Self::B11];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::B00 => "00",
            Self::B01 => "01",
            Self::B10 => "10",
            Self::B11 => "11",
        }
    }

    /// The two binary digits, most significant first.
    pub fn bits(self) -> [u8; 2] {
        let i = self.index() as u8;
        [i >> 1, i & 1]
    }
}

impl fmt::Display for BellOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BobOutcome {
    Zero,
    One,
}

impl BobOutcome {
    pub const ALL: [BobOutcome; 2] = [Self::Zero, Self::One];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Zero => "0",
            Self::One => "1",
        }
    }
}

impl fmt::Display for BobOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum DistributionError {
    #[error("P({c},{i}) = {p} is outside [0, 1]")]
    OutOfRange {
        c: BellOutcome,
        i: BobOutcome,
        p: f64,
    },
    #[error("probabilities sum to {0}")]
    Sum(f64),
    #[error("Alice marginal for {0} is {1}, expected 1/4")]
    Marginal(BellOutcome, f64),
}

/// The eight probabilities `P(c, i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointDistribution {
    probabilities: [[f64; 2]; 4],
}

impl JointDistribution {
    /// Checks every invariant: range, total and flat Alice marginals.
    pub fn new(probabilities: [[f64; 2]; 4]) -> Result<Self, DistributionError> {
        let dist = Self { probabilities };
        dist.validate()?;
        Ok(dist)
    }

    /// Wraps the values without checking any invariant.
    pub fn unchecked(probabilities: [[f64; 2]; 4]) -> Self {
        Self { probabilities }
    }

    pub fn validate(&self) -> Result<(), DistributionError> {
        let mut total = 0.0;
        for c in BellOutcome::ALL {
            let row = self.probabilities[c.index()];
            for i in BobOutcome::ALL {
                let p = row[i.index()];
                if !(-TOLERANCE..=1.0 + TOLERANCE).contains(&p) {
                    return Err(DistributionError::OutOfRange { c, i, p });
                }
            }
            let marginal = row[0] + row[1];
            if (marginal - 0.25).abs() > TOLERANCE {
                return Err(DistributionError::Marginal(c, marginal));
            }
            total += marginal;
        }
        if (total - 1.0).abs() > TOLERANCE {
            return Err(DistributionError::Sum(total));
        }
        Ok(())
    }

    pub fn get(&self, c: BellOutcome, i: BobOutcome) -> f64 {
        self.probabilities[c.index()][i.index()]
    }

    pub fn as_array(&self) -> &[[f64; 2]; 4] {
        &self.probabilities
    }

    pub fn iter(&self) -> impl Iterator<Item = (BellOutcome, BobOutcome, f64)> + '_ {
        BellOutcome::ALL.into_iter().flat_map(move |c| {
            BobOutcome::ALL
                .into_iter()
                .map(move |i| (c, i, self.get(c, i)))
        })
    }

    pub fn total(&self) -> f64 {
        self.iter().map(|(_, _, p)| p).sum()
    }

    pub fn alice_marginal(&self, c: BellOutcome) -> f64 {
        self.get(c, BobOutcome::Zero) + self.get(c, BobOutcome::One)
    }

    pub fn max_deviation(&self, other: &JointDistribution) -> f64 {
        self.iter()
            .zip(other.iter())
            .map(|((_, _, a), (_, _, b))| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Elementwise `w·self + (1−w)·other`.
    pub fn mix(&self, other: &JointDistribution, w: f64) -> JointDistribution {
        let mut probabilities = [[0.0; 2]; 4];
        for (c, row) in probabilities.iter_mut().enumerate() {
            for (i, p) in row.iter_mut().enumerate() {
                *p = w * self.probabilities[c][i] + (1.0 - w) * other.probabilities[c][i];
            }
        }
        JointDistribution { probabilities }
    }

    pub fn uniform() -> JointDistribution {
        JointDistribution {
            probabilities: [[0.125; 2]; 4],
        }
    }
}

fn amp(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `(|X1⟩|Y1⟩ + |X2⟩|Y2⟩)/√2` on the labels `first, second`.
pub fn epr(first: char, second: char) -> PureState {
    PureState::new(
        vec![first, second],
        vec![amp(FRAC_1_SQRT_2), amp(0.0), amp(0.0), amp(FRAC_1_SQRT_2)],
    )
    .expect("valid EPR pair")
}

/// Three-qubit state over `A, B, C`.
pub fn initial_state(prep: &PreparationSettings) -> PureState {
    prep.input_state()
        .tensor(&epr(ALICE_PARTNER, BOB))
        .expect("disjoint labels")
}

/// The four Bell states on `(first, second)` with the sign conventions
/// `00: |11⟩+|22⟩`, `01: |12⟩+|21⟩`, `10: |12⟩−|21⟩`, `11: |11⟩−|22⟩`.
pub fn bell_basis_on(first: char, second: char) -> ProjectiveBasis {
    let h = FRAC_1_SQRT_2;
    let rows = [
        [h, 0.0, 0.0, h],
        [0.0, h, h, 0.0],
        [0.0, h, -h, 0.0],
        [h, 0.0, 0.0, -h],
    ];
    let states = rows
        .iter()
        .map(|r| PureState::new(vec![first, second], r.iter().map(|&x| amp(x)).collect()))
        .collect::<Result<Vec<_>>>()
        .expect("valid Bell states");
    let labels = BellOutcome::ALL
        .iter()
        .map(|c| c.label().to_string())
        .collect();
    ProjectiveBasis::new(states, labels).expect("Bell basis is orthonormal")
}

/// Bell basis on `B ⊗ A`, the factor order used for Alice's analyzer.
pub fn bell_basis() -> ProjectiveBasis {
    bell_basis_on(ALICE_PARTNER, INPUT)
}

/// Dichotomic basis with the analyzer's orientation on qubit `label`.
pub fn dichotomic_basis_on(label: char, analyzer: &AnalyzerSettings) -> ProjectiveBasis {
    let (s, c) = analyzer.beta_prime.sin_cos();
    let zero = PureState::new(
        vec![label],
        vec![amp(c), Complex64::from_polar(s, analyzer.phi_prime)],
    );
    let one = PureState::new(
        vec![label],
        vec![amp(-s), Complex64::from_polar(c, analyzer.phi_prime)],
    );
    ProjectiveBasis::new(
        vec![zero.expect("finite"), one.expect("finite")],
        BobOutcome::ALL
            .iter()
            .map(|i| i.label().to_string())
            .collect(),
    )
    .expect("analyzer basis is orthonormal")
}

pub fn bob_basis(analyzer: &AnalyzerSettings) -> ProjectiveBasis {
    dichotomic_basis_on(BOB, analyzer)
}

/// Closed-form `P(c, i)`.
pub fn joint_distribution_closed_form(
    prep: &PreparationSettings,
    analyzer: &AnalyzerSettings,
) -> JointDistribution {
    let cc = (2.0 * prep.beta).cos() * (2.0 * analyzer.beta_prime).cos();
    let ss = (2.0 * prep.beta).sin() * (2.0 * analyzer.beta_prime).sin();
    let minus = ss * (prep.phi - analyzer.phi_prime).cos();
    let plus = ss * (prep.phi + analyzer.phi_prime).cos();
    let zero = [
        (1.0 - cc + minus) / 8.0,
        (1.0 + cc + plus) / 8.0,
        (1.0 + cc - plus) / 8.0,
        (1.0 - cc - minus) / 8.0,
    ];
    let mut probabilities = [[0.0; 2]; 4];
    for (row, p0) in probabilities.iter_mut().zip(zero) {
        let p0 = p0.max(0.0);
        *row = [p0, (0.25 - p0).max(0.0)];
    }
    JointDistribution::unchecked(probabilities)
}

fn outcome_index(label: &str, labels: &[&str]) -> usize {
    labels
        .iter()
        .position(|l| *l == label)
        .expect("basis outcome labels are fixed")
}

/// Born-rule route: Bell measurement on `B,A`, then Bob's measurement on the
/// conditional state of `C`.
pub fn joint_distribution_simulated(
    prep: &PreparationSettings,
    analyzer: &AnalyzerSettings,
) -> Result<JointDistribution> {
    let state = initial_state(prep);
    let bell = bell_basis();
    let bob = bob_basis(analyzer);
    let mut probabilities = [[0.0; 2]; 4];
    for alice in measure_probabilities(&state, &bell, bell.labels())? {
        let c = outcome_index(&alice.label, &["00", "01", "10", "11"]);
        let Some(conditional) = alice.remainder else {
            continue;
        };
        for bob_out in measure_probabilities(&conditional, &bob, &[BOB])? {
            let i = outcome_index(&bob_out.label, &["0", "1"]);
            probabilities[c][i] = alice.probability * bob_out.probability;
        }
    }
    Ok(JointDistribution::unchecked(probabilities))
}

/// Same statistics with Bob measuring first.
pub fn joint_distribution_bob_first(
    prep: &PreparationSettings,
    analyzer: &AnalyzerSettings,
) -> Result<JointDistribution> {
    let state = initial_state(prep);
    let bell = bell_basis();
    let bob = bob_basis(analyzer);
    let mut probabilities = [[0.0; 2]; 4];
    for bob_out in measure_probabilities(&state, &bob, &[BOB])? {
        let i = outcome_index(&bob_out.label, &["0", "1"]);
        let Some(conditional) = bob_out.remainder else {
            continue;
        };
        for alice in measure_probabilities(&conditional, &bell, bell.labels())? {
            let c = outcome_index(&alice.label, &["00", "01", "10", "11"]);
            probabilities[c][i] = bob_out.probability * alice.probability;
        }
    }
    Ok(JointDistribution::unchecked(probabilities))
}

/// Unitary Bob would apply to `C` after learning Bell outcome `c`.
///
/// With these conventions `C` is left in `σ_c|input⟩` with
/// `σ = (1, X, ZX, Z)`; the corrections undo that up to global phase.
pub fn correction_unitary(outcome: BellOutcome) -> Matrix2 {
    match outcome {
        BellOutcome::B00 => gates::IDENTITY,
        BellOutcome::B01 => gates::BIT_FLIP,
        BellOutcome::B10 => gates::FLIP_BOTH,
        BellOutcome::B11 => gates::PHASE_FLIP,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeleportationRun {
    pub outcome: BellOutcome,
    pub probability: f64,
    pub fidelity: f64,
}

/// Full protocol with the classical link restored.
pub fn run_full_teleportation(prep: &PreparationSettings) -> Result<Vec<TeleportationRun>> {
    let input = prep.input_state();
    let state = initial_state(prep);
    let bell = bell_basis();
    let mut runs = Vec::with_capacity(4);
    for (
        outcome,
        MeasurementOutcome {
            probability,
            remainder,
            ..
        },
    ) in BellOutcome::ALL
        .into_iter()
        .zip(measure_probabilities(&state, &bell, bell.labels())?)
    {
        let conditional = remainder.ok_or(StateError::ZeroNorm)?;
        let corrected = conditional.apply_local_unitary(&correction_unitary(outcome), BOB)?;
        // compare as single-qubit states regardless of label
        let corrected = PureState::new(vec![INPUT], corrected.amplitudes().to_vec())?;
        runs.push(TeleportationRun {
            outcome,
            probability,
            fidelity: input.fidelity(&corrected)?,
        });
    }
    Ok(runs)
}
