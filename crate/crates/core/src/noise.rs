//! Finite visibility: white noise mixed into the joint statistics.

use thiserror::Error;

use crate::corrvec::{correlation_from_distribution, super_vector_with, SuperVector};
use crate::lhv::{bell_test_for, BellTestReport};
use crate::teleport::{
    joint_distribution_closed_form, AnalyzerSettings, JointDistribution, PreparationSettings,
};

#[derive(Debug, Error, Clone, Copy, PartialEq)]
#[error("visibility {0} is outside [0, 1]")]
pub struct VisibilityError(pub f64);

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Visibility(f64);

impl Visibility {
    pub const PERFECT: Visibility = Visibility(1.0);

    pub fn new(v: f64) -> Result<Self, VisibilityError> {
        if (0.0..=1.0).contains(&v) {
            Ok(Self(v))
        } else {
            Err(VisibilityError(v))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `v·P(c,i) + (1−v)/8`.
pub fn noisy_joint_distribution(
    prep: &PreparationSettings,
    analyzer: &AnalyzerSettings,
    vis: Visibility,
) -> JointDistribution {
    joint_distribution_closed_form(prep, analyzer).mix(&JointDistribution::uniform(), vis.value())
}

/// Super-vector measured at visibility `vis`.
pub fn noisy_super_vector(vis: Visibility) -> SuperVector {
    super_vector_with(|p, a| correlation_from_distribution(&noisy_joint_distribution(p, a, vis)))
}

pub fn bell_test_at(vis: Visibility) -> BellTestReport {
    bell_test_for(&noisy_super_vector(vis))
}

/// Smallest visibility whose Bell value exceeds the LHV bound.
///
/// The Bell value is affine in the visibility, so two evaluations fix it.
pub fn violation_threshold() -> f64 {
    let clean = bell_test_at(Visibility::PERFECT);
    let noise_only = bell_test_at(Visibility(0.0));
    let slope = clean.quantum_value - noise_only.quantum_value;
    (clean.lhv_upper_bound - noise_only.quantum_value) / slope
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdReport {
    pub threshold: f64,
    pub below: (f64, bool),
    pub above: (f64, bool),
}

/// Threshold with verdicts `offset` below and above it.
pub fn threshold_report(offset: f64) -> ThresholdReport {
    let threshold = violation_threshold();
    let verdict = |v: f64| {
        let v = v.clamp(0.0, 1.0);
        (v, bell_test_at(Visibility(v)).violated)
    };
    ThresholdReport {
        threshold,
        below: verdict(threshold - offset),
        above: verdict(threshold + offset),
    }
}
