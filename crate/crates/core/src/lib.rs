//! Grover-based estimation of the mean of an amplitude function.
//!
//! Given `|psi> = sum_x A(x) |x>` on n qubits, [`mean_circuit`] builds a state
//! `|s>` on `2n + 3` qubits whose omega = 0 slice holds `mean(A) / sqrt 2` and
//! `A(y) / sqrt 2` on two orthogonal basis states. [`grover`] amplifies that
//! slice in `O(sqrt(2^n))` iterations without disturbing the ratio of the two
//! amplitudes, and [`estimator`] reads `|mean(A)|` off the measured null and
//! non-null counts. Everything runs on the dense simulator in [`state`].

pub mod amplitude;
pub mod circuit;
pub mod error;
pub mod estimator;
pub mod grover;
pub mod mean_circuit;
pub mod prep;
pub mod state;

pub use amplitude::AmplitudeFunction;
pub use circuit::{Circuit, Control, Gate, GateOp};
pub use error::{Error, Result, Starvation};
pub use estimator::{
    classical_mean, exact_ratio, sampled_estimate, suggest_reference, EstimationReport, OracleResult,
};
pub use grover::{
    amplify, grover_iterate, log2_slope, plan_amplification, scaling_sweep, AmplificationPlan, Amplifier, ScalingRow,
};
pub use mean_circuit::{
    build_s_circuit, decompose_s, verify_claim, ClaimReport, MeanCircuit, QubitLayout, ReferencePoint,
    SDecomposition,
};
pub use prep::{compile_state_prep, prepared_state, StatePrep};
pub use state::{BasisIndex, QuantumState};

/// Tolerance for unitarity and norm checks.
pub const TOLERANCE: f64 = 1e-12;
