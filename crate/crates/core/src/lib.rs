//! Channel-cut teleportation: joint statistics, vector-valued correlations and
//! a Bell inequality for the quantum part of the protocol.
//!
//! - [`qstate`]: dense state vectors, projective measurement, local unitaries.
//! - [`teleport`]: input state, Bell and analyzer bases, the eight joint
//!   probabilities and the full protocol with corrections.
//! - [`corrvec`]: vector value assignment, correlation vectors, super-vectors.
//! - [`lhv`]: deterministic hidden-variable strategies and the Bell test.
//! - [`noise`]: visibility and the violation threshold.
//! - [`swap`]: entanglement swapping with CHSH on the post-selected pairs.

pub mod corrvec;
pub mod lhv;
pub mod noise;
pub mod qstate;
pub mod swap;
pub mod teleport;
