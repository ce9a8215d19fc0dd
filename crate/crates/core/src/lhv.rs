//! Deterministic local hidden variables and the bound on `(V^QM, V^LHV)`.
//!
//! For two settings per side a hidden variable amounts to a table of
//! answers: Bob's sign at `φ′ ∈ {−45°, 45°}` and Alice's sign vector at
//! `φ ∈ {0°, 90°}`. There are `2² · 4² = 64` such tables and any LHV model is
//! a convex mixture of them, so the extremes of the scalar product with a
//! fixed super-vector are reached on one of the 64.

use thiserror::Error;

use crate::corrvec::{
    build_quantum_super_vector, super_dot, super_norm_sq, BobValue, CorrelationVector,
    OutcomeVector, Sign, SuperVector, ALICE_PHASES_DEG, BOB_PHASES_DEG, SUPER_VECTOR_INDICES,
};
use crate::qstate::TOLERANCE;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LhvError {
    #[error("no Alice setting at {0}°")]
    UnknownAliceSetting(f64),
    #[error("no Bob setting at {0}°")]
    UnknownBobSetting(f64),
    #[error("ensemble weight {0} is negative or not finite")]
    BadWeight(f64),
    #[error("ensemble weights sum to {0}, expected 1")]
    WeightSum(f64),
}

/// One hidden-variable value: predetermined answers for every setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeterministicStrategy {
    /// Indexed like [`BOB_PHASES_DEG`].
    pub bob: [BobValue; 2],
    /// Indexed like [`ALICE_PHASES_DEG`].
    pub alice: [OutcomeVector; 2],
}

impl DeterministicStrategy {
    pub fn product(&self, alice_index: usize, bob_index: usize) -> CorrelationVector {
        self.alice[alice_index]
            .times(self.bob[bob_index])
            .to_vector()
    }

    /// The strategy whose every product is negated.
    pub fn sign_flipped(&self) -> DeterministicStrategy {
        DeterministicStrategy {
            bob: self.bob.map(Sign::flip),
            alice: self.alice,
        }
    }
}

/// `H(λ)`: the strategy's products at the four super-vector settings.
pub fn strategy_super_vector(s: &DeterministicStrategy) -> SuperVector {
    SuperVector::new(SUPER_VECTOR_INDICES.map(|(a, b)| s.product(a, b)))
}

/// All 64 strategies, Bob's answers varying slowest.
pub fn enumerate_strategies() -> Vec<DeterministicStrategy> {
    let mut out = Vec::with_capacity(64);
    for b0 in Sign::ALL {
        for b1 in Sign::ALL {
            for a0 in OutcomeVector::ALL {
                for a1 in OutcomeVector::ALL {
                    out.push(DeterministicStrategy {
                        bob: [b0, b1],
                        alice: [a0, a1],
                    });
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalBound {
    pub max: f64,
    pub argmax: DeterministicStrategy,
    pub min: f64,
    pub argmin: DeterministicStrategy,
}

/// Exhaustive extremes of `(v, H(λ))`. Ties go to the first strategy in
/// enumeration order.
pub fn lhv_extremal_bound(v: &SuperVector) -> ExtremalBound {
    let strategies = enumerate_strategies();
    let first = strategies[0];
    let start = super_dot(v, &strategy_super_vector(&first));
    let mut bound = ExtremalBound {
        max: start,
        argmax: first,
        min: start,
        argmin: first,
    };
    for s in &strategies[1..] {
        let value = super_dot(v, &strategy_super_vector(s));
        if value > bound.max {
            bound.max = value;
            bound.argmax = *s;
        }
        if value < bound.min {
            bound.min = value;
            bound.argmin = *s;
        }
    }
    bound
}

/// A finite hidden-variable distribution `ρ(λ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyEnsemble {
    members: Vec<(DeterministicStrategy, f64)>,
}

impl StrategyEnsemble {
    pub fn new(members: Vec<(DeterministicStrategy, f64)>) -> Result<Self, LhvError> {
        let mut total = 0.0;
        for &(_, w) in &members {
            if !(w.is_finite() && w >= 0.0) {
                return Err(LhvError::BadWeight(w));
            }
            total += w;
        }
        if (total - 1.0).abs() > TOLERANCE {
            return Err(LhvError::WeightSum(total));
        }
        Ok(Self { members })
    }

    pub fn point(s: DeterministicStrategy) -> Self {
        Self {
            members: vec![(s, 1.0)],
        }
    }

    /// Equal weight on every deterministic strategy.
    pub fn uniform() -> Self {
        let all = enumerate_strategies();
        let w = 1.0 / all.len() as f64;
        Self {
            members: all.into_iter().map(|s| (s, w)).collect(),
        }
    }

    pub fn members(&self) -> &[(DeterministicStrategy, f64)] {
        &self.members
    }

    fn average<F>(&self, f: F) -> CorrelationVector
    where
        F: Fn(&DeterministicStrategy) -> CorrelationVector,
    {
        self.members
            .iter()
            .fold(CorrelationVector::ZERO, |acc, (s, w)| acc + f(s).scale(*w))
    }

    /// `V^LHV` for this distribution.
    pub fn super_vector(&self) -> SuperVector {
        SuperVector::new(SUPER_VECTOR_INDICES.map(|(a, b)| self.average(|s| s.product(a, b))))
    }
}

fn setting_index(grid: &[f64; 2], degrees: f64) -> Option<usize> {
    grid.iter().position(|g| (g - degrees).abs() < 1e-9)
}

/// `∫ dλ ρ(λ) I_B(φ′, λ) A(φ, λ)` at the given phases (degrees).
pub fn ensemble_correlation(
    ensemble: &StrategyEnsemble,
    alice_phase_deg: f64,
    bob_phase_deg: f64,
) -> Result<CorrelationVector, LhvError> {
    let a = setting_index(&ALICE_PHASES_DEG, alice_phase_deg)
        .ok_or(LhvError::UnknownAliceSetting(alice_phase_deg))?;
    let b = setting_index(&BOB_PHASES_DEG, bob_phase_deg)
        .ok_or(LhvError::UnknownBobSetting(bob_phase_deg))?;
    Ok(ensemble.average(|s| s.product(a, b)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellTestReport {
    /// `(V^QM, V)` for the tested super-vector `V`.
    pub quantum_value: f64,
    pub lhv_upper_bound: f64,
    pub lhv_lower_bound: f64,
    pub violated: bool,
    pub violation_ratio: f64,
    pub argmax: DeterministicStrategy,
}

impl BellTestReport {
    pub fn margin(&self) -> f64 {
        self.quantum_value - self.lhv_upper_bound
    }
}

/// Tests whether `tested` could be an LHV super-vector by projecting it on the
/// ideal quantum super-vector and comparing with the exhaustive LHV bound.
pub fn bell_test_for(tested: &SuperVector) -> BellTestReport {
    let reference = build_quantum_super_vector();
    let bound = lhv_extremal_bound(&reference);
    let quantum_value = super_dot(&reference, tested);
    BellTestReport {
        quantum_value,
        lhv_upper_bound: bound.max,
        lhv_lower_bound: bound.min,
        violated: quantum_value > bound.max + TOLERANCE,
        violation_ratio: quantum_value / bound.max,
        argmax: bound.argmax,
    }
}

/// The ideal case: `‖V^QM‖²` against the LHV bound.
pub fn bell_test() -> BellTestReport {
    let v = build_quantum_super_vector();
    let report = bell_test_for(&v);
    debug_assert!((report.quantum_value - super_norm_sq(&v)).abs() < TOLERANCE);
    report
}
