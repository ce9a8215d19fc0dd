//! Vector value assignment and the vector-valued correlation function.
//!
//! Alice's four Bell outcomes are mapped to the sign vectors `(±1, ±1)` read
//! off their binary labels (0 → −1, 1 → +1), Bob's outcomes to `∓1`. The
//! correlation function is the average of Bob's number times Alice's vector.

use std::f64::consts::FRAC_PI_4;
use std::ops::{Add, Mul, Neg};

use crate::teleport::{
    joint_distribution_closed_form, AnalyzerSettings, BellOutcome, BobOutcome, JointDistribution,
    PreparationSettings,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub const ALL: [Sign; 2] = [Sign::Minus, Sign::Plus];

    pub fn value(self) -> f64 {
        match self {
            Sign::Minus => -1.0,
            Sign::Plus => 1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Bob's ±1 value.
pub type BobValue = Sign;

/// A two-component ±1 vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OutcomeVector(pub Sign, pub Sign);

impl OutcomeVector {
    pub const ALL: [OutcomeVector; 4] = [
        OutcomeVector(Sign::Minus, Sign::Minus),
        OutcomeVector(Sign::Minus, Sign::Plus),
        OutcomeVector(Sign::Plus, Sign::Minus),
        OutcomeVector(Sign::Plus, Sign::Plus),
    ];

    pub fn to_vector(self) -> CorrelationVector {
        CorrelationVector::new(self.0.value(), self.1.value())
    }

    pub fn times(self, s: Sign) -> OutcomeVector {
        OutcomeVector(self.0 * s, self.1 * s)
    }
}

pub fn alice_value(outcome: BellOutcome) -> OutcomeVector {
    match outcome {
        BellOutcome::B00 => OutcomeVector(Sign::Minus, Sign::Minus),
        BellOutcome::B01 => OutcomeVector(Sign::Minus, Sign::Plus),
        BellOutcome::B10 => OutcomeVector(Sign::Plus, Sign::Minus),
        BellOutcome::B11 => OutcomeVector(Sign::Plus, Sign::Plus),
    }
}

pub fn bob_value(outcome: BobOutcome) -> BobValue {
    match outcome {
        BobOutcome::Zero => Sign::Minus,
        BobOutcome::One => Sign::Plus,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CorrelationVector {
    pub x: f64,
    pub y: f64,
}

impl CorrelationVector {
    pub const ZERO: CorrelationVector = CorrelationVector { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(&self, other: &CorrelationVector) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm_sqr(&self) -> f64 {
        self.dot(self)
    }

    pub fn scale(&self, k: f64) -> CorrelationVector {
        CorrelationVector::new(k * self.x, k * self.y)
    }

    pub fn max_abs_diff(&self, other: &CorrelationVector) -> f64 {
        (self.x - other.x).abs().max((self.y - other.y).abs())
    }
}

impl Add for CorrelationVector {
    type Output = CorrelationVector;

    fn add(self, rhs: CorrelationVector) -> CorrelationVector {
        CorrelationVector::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Neg for CorrelationVector {
    type Output = CorrelationVector;

    fn neg(self) -> CorrelationVector {
        CorrelationVector::new(-self.x, -self.y)
    }
}

/// `Σ_c Σ_i P(c,i) I_B(i) A(c)` with the standard Bob values.
pub fn correlation_from_distribution(dist: &JointDistribution) -> CorrelationVector {
    correlation_with_bob_values(
        dist,
        [bob_value(BobOutcome::Zero), bob_value(BobOutcome::One)],
    )
}

/// Correlation with an arbitrary assignment of Bob's values to his outcomes.
pub fn correlation_with_bob_values(
    dist: &JointDistribution,
    bob_values: [BobValue; 2],
) -> CorrelationVector {
    dist.iter().fold(CorrelationVector::ZERO, |acc, (c, i, p)| {
        acc + alice_value(c)
            .to_vector()
            .scale(p * bob_values[i.index()].value())
    })
}

/// `sin 2β sin 2β′ (cos φ cos φ′, sin φ sin φ′)`.
pub fn correlation_closed_form(
    prep: &PreparationSettings,
    analyzer: &AnalyzerSettings,
) -> CorrelationVector {
    let amplitude = (2.0 * prep.beta).sin() * (2.0 * analyzer.beta_prime).sin();
    CorrelationVector::new(
        amplitude * prep.phi.cos() * analyzer.phi_prime.cos(),
        amplitude * prep.phi.sin() * analyzer.phi_prime.sin(),
    )
}

/// Alice's phase settings, in the super-vector's order.
pub const ALICE_PHASES_DEG: [f64; 2] = [0.0, 90.0];
/// Bob's phase settings, in the super-vector's order.
pub const BOB_PHASES_DEG: [f64; 2] = [-45.0, 45.0];

/// `(φ, φ′)` in degrees for each super-vector entry.
pub const SUPER_VECTOR_SETTINGS_DEG: [(f64, f64); 4] =
    [(0.0, -45.0), (0.0, 45.0), (90.0, -45.0), (90.0, 45.0)];

/// `(alice index, bob index)` of each super-vector entry.
pub const SUPER_VECTOR_INDICES: [(usize, usize); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];

/// Correlation vectors at the four `(φ, φ′)` pairs `(0°,−45°)`, `(0°,45°)`,
/// `(90°,−45°)`, `(90°,45°)`, in that order.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SuperVector {
    pub entries: [CorrelationVector; 4],
}

impl SuperVector {
    pub const ZERO: SuperVector = SuperVector {
        entries: [CorrelationVector::ZERO; 4],
    };

    pub fn new(entries: [CorrelationVector; 4]) -> Self {
        Self { entries }
    }

    pub fn scale(&self, k: f64) -> SuperVector {
        SuperVector::new(self.entries.map(|e| e.scale(k)))
    }

    pub fn max_abs_diff(&self, other: &SuperVector) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }
}

impl Add for SuperVector {
    type Output = SuperVector;

    fn add(self, rhs: SuperVector) -> SuperVector {
        let mut entries = self.entries;
        for (e, r) in entries.iter_mut().zip(rhs.entries) {
            *e = *e + r;
        }
        SuperVector::new(entries)
    }
}

impl Neg for SuperVector {
    type Output = SuperVector;

    fn neg(self) -> SuperVector {
        self.scale(-1.0)
    }
}

pub fn super_norm_sq(v: &SuperVector) -> f64 {
    v.entries.iter().map(CorrelationVector::norm_sqr).sum()
}

pub fn super_dot(a: &SuperVector, b: &SuperVector) -> f64 {
    a.entries
        .iter()
        .zip(&b.entries)
        .map(|(x, y)| x.dot(y))
        .sum()
}

/// Preparation and analyzer at `β = β′ = 45°` with the given phases.
pub fn symmetric_settings(phi: f64, phi_prime: f64) -> (PreparationSettings, AnalyzerSettings) {
    (
        PreparationSettings::new(FRAC_PI_4, phi),
        AnalyzerSettings::new(FRAC_PI_4, phi_prime),
    )
}

/// Builds a super-vector by evaluating `correlation` at the four settings.
pub fn super_vector_with<F>(mut correlation: F) -> SuperVector
where
    F: FnMut(&PreparationSettings, &AnalyzerSettings) -> CorrelationVector,
{
    SuperVector::new(SUPER_VECTOR_SETTINGS_DEG.map(|(phi, phi_prime)| {
        let (prep, analyzer) = symmetric_settings(phi.to_radians(), phi_prime.to_radians());
        correlation(&prep, &analyzer)
    }))
}

/// The quantum super-vector, from the closed-form correlation.
pub fn build_quantum_super_vector() -> SuperVector {
    super_vector_with(correlation_closed_form)
}

/// Same super-vector routed through the closed-form joint distribution.
pub fn quantum_super_vector_from_distribution() -> SuperVector {
    super_vector_with(|p, a| correlation_from_distribution(&joint_distribution_closed_form(p, a)))
}

/// Correlation vectors on an arbitrary list of settings.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GridSuperVector {
    pub settings: Vec<(PreparationSettings, AnalyzerSettings)>,
    pub entries: Vec<CorrelationVector>,
}

impl GridSuperVector {
    pub fn evaluate<F>(
        settings: Vec<(PreparationSettings, AnalyzerSettings)>,
        correlation: F,
    ) -> Self
    where
        F: Fn(&PreparationSettings, &AnalyzerSettings) -> CorrelationVector,
    {
        let entries = settings.iter().map(|(p, a)| correlation(p, a)).collect();
        Self { settings, entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(CorrelationVector::norm_sqr).sum()
    }

    /// `None` when the lengths differ.
    pub fn dot(&self, other: &GridSuperVector) -> Option<f64> {
        (self.len() == other.len()).then(|| {
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.dot(b))
                .sum()
        })
    }
}

impl From<SuperVector> for GridSuperVector {
    fn from(v: SuperVector) -> Self {
        let settings = SUPER_VECTOR_SETTINGS_DEG
            .iter()
            .map(|(phi, phi_prime)| symmetric_settings(phi.to_radians(), phi_prime.to_radians()))
            .collect();
        Self {
            settings,
            entries: v.entries.to_vec(),
        }
    }
}
