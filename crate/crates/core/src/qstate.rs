//! Dense state vectors for a handful of labelled qubits.
//!
//! Every [`PureState`] carries an ordered list of subsystem labels. The first
//! label is the most significant bit of the amplitude index, so for labels
//! `['A', 'B']` the amplitude at index `0b10` belongs to `|1⟩_A |0⟩_B`.
//! Computational `|0⟩` and `|1⟩` stand for the states `|X1⟩` and `|X2⟩` of
//! each subsystem `X`.

use num_complex::Complex64;
use thiserror::Error;

/// Complex amplitude.
pub type Amplitude = Complex64;

/// Single-qubit operator, row-major.
pub type Matrix2 = [[Complex64; 2]; 2];

/// Absolute tolerance for normalization, orthonormality and unitarity checks.
pub const TOLERANCE: f64 = 1e-12;

/// Outcomes below this probability have no post-measurement state.
pub const NULL_PROBABILITY: f64 = 1e-14;

pub const MAX_QUBITS: usize = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("number of qubits must be in 1..={MAX_QUBITS}, got {0}")]
    QubitCount(usize),
    #[error("expected {expected} amplitudes, got {actual}")]
    AmplitudeCount { expected: usize, actual: usize },
    #[error("amplitude {0} is not finite")]
    NonFinite(usize),
    #[error("duplicate subsystem label '{0}'")]
    DuplicateLabel(char),
    #[error("subsystem label '{0}' present in both factors")]
    LabelCollision(char),
    #[error("unknown subsystem label '{0}'")]
    UnknownLabel(char),
    #[error("subsystem labels differ: {left:?} vs {right:?}")]
    LabelMismatch { left: Vec<char>, right: Vec<char> },
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("basis is not orthonormal: |<{i}|{j}> - δ| = {deviation:e}")]
    NonOrthonormal { i: usize, j: usize, deviation: f64 },
    #[error("basis has {actual} states but the measured subspace has dimension {expected}")]
    IncompleteBasis { expected: usize, actual: usize },
    #[error("basis needs one outcome label per state")]
    OutcomeLabelCount,
    #[error("operator is not unitary: deviation {0:e}")]
    NonUnitary(f64),
    #[error("negative probability {0:e}")]
    NegativeProbability(f64),
}

pub type Result<T, E = StateError> = std::result::Result<T, E>;

/// Clamps rounding noise around zero. Anything below `-TOLERANCE` is an error.
pub fn clamp_probability(p: f64) -> Result<f64> {
    if p < -TOLERANCE || !p.is_finite() {
        Err(StateError::NegativeProbability(p))
    } else {
        Ok(p.max(0.0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    labels: Vec<char>,
    amplitudes: Vec<Amplitude>,
}

impl PureState {
    /// Builds a state as given, without normalizing.
    pub fn new(labels: Vec<char>, amplitudes: Vec<Amplitude>) -> Result<Self> {
        let n = labels.len();
        if n == 0 || n > MAX_QUBITS {
            return Err(StateError::QubitCount(n));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(StateError::DuplicateLabel(*l));
            }
        }
        if amplitudes.len() != 1 << n {
            return Err(StateError::AmplitudeCount {
                expected: 1 << n,
                actual: amplitudes.len(),
            });
        }
        if let Some(i) = amplitudes
            .iter()
            .position(|a| !(a.re.is_finite() && a.im.is_finite()))
        {
            return Err(StateError::NonFinite(i));
        }
        Ok(Self { labels, amplitudes })
    }

    /// Single qubit `c0|0⟩ + c1|1⟩`, normalized.
    pub fn qubit(label: char, c0: Amplitude, c1: Amplitude) -> Result<Self> {
        Self::new(vec![label], vec![c0, c1])?.normalize()
    }

    /// Computational basis state `|index⟩` over `labels` (index taken mod 2^n).
    pub fn basis_state(labels: Vec<char>, index: usize) -> Result<Self> {
        if labels.is_empty() || labels.len() > MAX_QUBITS {
            return Err(StateError::QubitCount(labels.len()));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << labels.len()];
        amps[index % (1 << labels.len())] = Complex64::new(1.0, 0.0);
        Self::new(labels, amps)
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[char] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amplitudes
    }

    /// Amplitude of the computational basis state given one bit per label.
    pub fn amplitude(&self, bits: &[u8]) -> Amplitude {
        let idx = bits
            .iter()
            .fold(0usize, |acc, &b| (acc << 1) | (b as usize & 1));
        self.amplitudes[idx]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(mut self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 {
            return Err(StateError::ZeroNorm);
        }
        for a in &mut self.amplitudes {
            *a /= norm;
        }
        Ok(self)
    }

    pub fn scaled(&self, factor: Amplitude) -> Self {
        Self {
            labels: self.labels.clone(),
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }

    fn position(&self, label: char) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or(StateError::UnknownLabel(label))
    }

    /// Kronecker product `self ⊗ other`; labels are concatenated.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        if let Some(l) = other.labels.iter().find(|l| self.labels.contains(l)) {
            return Err(StateError::LabelCollision(*l));
        }
        let n = self.num_qubits() + other.num_qubits();
        if n > MAX_QUBITS {
            return Err(StateError::QubitCount(n));
        }
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        let labels = self.labels.iter().chain(&other.labels).copied().collect();
        PureState::new(labels, amplitudes)
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &PureState) -> Result<Amplitude> {
        if self.labels != other.labels {
            return Err(StateError::LabelMismatch {
                left: self.labels.clone(),
                right: other.labels.clone(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²` after bringing `other` into this state's label order.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        let other = other.permuted(&self.labels)?;
        Ok(self.inner(&other)?.norm_sqr())
    }

    /// Same state with the tensor factors stored in `order`.
    pub fn permuted(&self, order: &[char]) -> Result<PureState> {
        if order.len() != self.labels.len() {
            return Err(StateError::LabelMismatch {
                left: self.labels.clone(),
                right: order.to_vec(),
            });
        }
        if order == self.labels.as_slice() {
            return Ok(self.clone());
        }
        let n = self.labels.len();
        // source[t] = position in self of the label stored at target position t
        let source = order
            .iter()
            .map(|&l| self.position(l))
            .collect::<Result<Vec<_>>>()?;
        let mut seen = 0usize;
        for &s in &source {
            if seen & (1 << s) != 0 {
                return Err(StateError::DuplicateLabel(self.labels[s]));
            }
            seen |= 1 << s;
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
        for (j, slot) in amplitudes.iter_mut().enumerate() {
            let mut i = 0usize;
            for (t, &s) in source.iter().enumerate() {
                let bit = (j >> (n - 1 - t)) & 1;
                i |= bit << (n - 1 - s);
            }
            *slot = self.amplitudes[i];
        }
        PureState::new(order.to_vec(), amplitudes)
    }

    /// Applies `u` to the factor labelled `target`.
    pub fn apply_local_unitary(&self, u: &Matrix2, target: char) -> Result<PureState> {
        check_unitary(u)?;
        let k = self.position(target)?;
        let stride = 1usize << (self.num_qubits() - 1 - k);
        let mut amplitudes = self.amplitudes.clone();
        for i in 0..amplitudes.len() {
            if i & stride == 0 {
                let a0 = self.amplitudes[i];
                let a1 = self.amplitudes[i | stride];
                amplitudes[i] = u[0][0] * a0 + u[0][1] * a1;
                amplitudes[i | stride] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
        PureState::new(self.labels.clone(), amplitudes)
    }

    /// `Tr ρ²` of the reduced state on `keep`.
    pub fn reduced_purity(&self, keep: &[char]) -> Result<f64> {
        let rest: Vec<char> = self
            .labels
            .iter()
            .copied()
            .filter(|l| !keep.contains(l))
            .collect();
        let order: Vec<char> = keep.iter().chain(&rest).copied().collect();
        let s = self.permuted(&order)?;
        let rows = 1usize << keep.len();
        let cols = 1usize << rest.len();
        let m = |r: usize, c: usize| s.amplitudes[r * cols + c];
        let mut purity = 0.0;
        for i in 0..rows {
            for j in 0..rows {
                let rho_ij: Complex64 = (0..cols).map(|c| m(i, c) * m(j, c).conj()).sum();
                purity += rho_ij.norm_sqr();
            }
        }
        Ok(purity)
    }
}

pub fn check_unitary(u: &Matrix2) -> Result<()> {
    let mut deviation: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let entry: Complex64 = (0..2).map(|k| u[k][i].conj() * u[k][j]).sum();
            let expected = if i == j { 1.0 } else { 0.0 };
            deviation = deviation.max((entry - expected).norm());
        }
    }
    if deviation > TOLERANCE || deviation.is_nan() {
        Err(StateError::NonUnitary(deviation))
    } else {
        Ok(())
    }
}

/// Complete orthonormal basis of the space spanned by a fixed set of labels.
#[derive(Debug, Clone)]
pub struct ProjectiveBasis {
    states: Vec<PureState>,
    outcome_labels: Vec<String>,
}

impl ProjectiveBasis {
    pub fn new(states: Vec<PureState>, outcome_labels: Vec<String>) -> Result<Self> {
        let first = states.first().ok_or(StateError::IncompleteBasis {
            expected: 1,
            actual: 0,
        })?;
        if outcome_labels.len() != states.len() {
            return Err(StateError::OutcomeLabelCount);
        }
        let dim = 1usize << first.num_qubits();
        if states.len() != dim {
            return Err(StateError::IncompleteBasis {
                expected: dim,
                actual: states.len(),
            });
        }
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate().skip(i) {
                let overlap = a.inner(b)?;
                let expected = if i == j { 1.0 } else { 0.0 };
                let deviation = (overlap - expected).norm();
                if deviation > TOLERANCE || deviation.is_nan() {
                    return Err(StateError::NonOrthonormal { i, j, deviation });
                }
            }
        }
        Ok(Self {
            states,
            outcome_labels,
        })
    }

    pub fn labels(&self) -> &[char] {
        self.states[0].labels()
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn outcome_labels(&self) -> &[String] {
        &self.outcome_labels
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct MeasurementOutcome {
    pub label: String,
    pub probability: f64,
    /// Normalized `(|b⟩⟨b| ⊗ 1)|ψ⟩` over all of the input's labels; `None`
    /// for outcomes with probability below [`NULL_PROBABILITY`].
    pub post_state: Option<PureState>,
    /// Normalized `⟨b|ψ⟩` on the unmeasured labels; `None` when the outcome is
    /// null or every qubit was measured.
    pub remainder: Option<PureState>,
}

/// Born-rule probabilities for measuring `measured` in `basis`.
///
/// `measured` must list the basis' labels in the basis' own order; the labels
/// may sit anywhere in `state`.
pub fn measure_probabilities(
    state: &PureState,
    basis: &ProjectiveBasis,
    measured: &[char],
) -> Result<Vec<MeasurementOutcome>> {
    if measured != basis.labels() {
        return Err(StateError::LabelMismatch {
            left: basis.labels().to_vec(),
            right: measured.to_vec(),
        });
    }
    if let Some(&l) = measured.iter().find(|l| !state.labels().contains(l)) {
        return Err(StateError::UnknownLabel(l));
    }
    let rest: Vec<char> = state
        .labels()
        .iter()
        .copied()
        .filter(|l| !measured.contains(l))
        .collect();
    let order: Vec<char> = measured.iter().chain(&rest).copied().collect();
    let arranged = state.permuted(&order)?;
    let cols = 1usize << rest.len();

    let mut outcomes = Vec::with_capacity(basis.len());
    for (element, label) in basis.states().iter().zip(basis.outcome_labels()) {
        let mut partial = vec![Complex64::new(0.0, 0.0); cols];
        for (m, b) in element.amplitudes().iter().enumerate() {
            let b = b.conj();
            for (c, slot) in partial.iter_mut().enumerate() {
                *slot += b * arranged.amplitudes[m * cols + c];
            }
        }
        let probability = clamp_probability(partial.iter().map(|a| a.norm_sqr()).sum())?;
        let (post_state, remainder) = if probability < NULL_PROBABILITY {
            (None, None)
        } else {
            let scale = probability.sqrt();
            let partial: Vec<Amplitude> = partial.iter().map(|a| a / scale).collect();
            let post: Vec<Amplitude> = element
                .amplitudes()
                .iter()
                .flat_map(|b| partial.iter().map(move |r| b * r))
                .collect();
            let post = PureState::new(order.clone(), post)?.permuted(state.labels())?;
            let remainder = if rest.is_empty() {
                None
            } else {
                Some(PureState::new(rest.clone(), partial)?)
            };
            (Some(post), remainder)
        };
        outcomes.push(MeasurementOutcome {
            label: label.clone(),
            probability,
            post_state,
            remainder,
        });
    }
    Ok(outcomes)
}

pub mod gates {
    use super::Matrix2;
    use num_complex::Complex64;

    const ZERO: Complex64 = Complex64::new(0.0, 0.0);
    const ONE: Complex64 = Complex64::new(1.0, 0.0);

    pub const IDENTITY: Matrix2 = [[ONE, ZERO], [ZERO, ONE]];
    pub const BIT_FLIP: Matrix2 = [[ZERO, ONE], [ONE, ZERO]];
    pub const PHASE_FLIP: Matrix2 = [[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]];
    /// `Z·X`, i.e. `-iY`.
    pub const FLIP_BOTH: Matrix2 = [[ZERO, Complex64::new(-1.0, 0.0)], [ONE, ZERO]];

    pub fn adjoint(u: &Matrix2) -> Matrix2 {
        [
            [u[0][0].conj(), u[1][0].conj()],
            [u[0][1].conj(), u[1][1].conj()],
        ]
    }
}
