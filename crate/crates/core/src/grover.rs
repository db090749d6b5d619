//! Amplitude amplification toward the omega = 0 subspace.
//!
//! One iteration is `G = -(2|s><s| - 1)(1 - 2 P)`, with `P` the projector onto
//! omega = 0. It rotates the state by `2 theta` in the plane spanned by the
//! good and bad components of `|s>`, where `sin^2 theta` is the initial target
//! probability. Inside the good component the ratio of the two hypothesis
//! amplitudes `z1 : z0` never changes.

use std::f64::consts::FRAC_PI_4;

use serde::Serialize;

use crate::amplitude::AmplitudeFunction;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::mean_circuit::{decompose_s, MeanCircuit, QubitLayout, ReferencePoint};
use crate::state::QuantumState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmplificationPlan {
    /// `asin(sqrt(target_prob))`, in `(0, pi/2]`.
    pub theta: f64,
    pub j_opt: u64,
    /// `sin^2((2 j_opt + 1) theta)`
    pub predicted_success: f64,
}

impl AmplificationPlan {
    /// Target probability after `j` iterations.
    pub fn success_after(&self, j: u64) -> f64 {
        ((2 * j + 1) as f64 * self.theta).sin().powi(2)
    }
}

pub fn plan_amplification(target_prob: f64) -> Result<AmplificationPlan> {
    if !(target_prob > 0.0 && target_prob <= 1.0) {
        return Err(Error::DegenerateTarget(target_prob));
    }
    let theta = target_prob.sqrt().asin();
    let j_opt = (FRAC_PI_4 / theta - 0.5).round().max(0.0) as u64;
    let mut plan = AmplificationPlan { theta, j_opt, predicted_success: 0.0 };
    plan.predicted_success = plan.success_after(j_opt);
    Ok(plan)
}

/// Holds `S` and `S^dagger` so repeated iterations don't rebuild the inverse.
#[derive(Debug, Clone)]
pub struct Amplifier<'a> {
    s_circuit: &'a Circuit,
    s_inverse: Circuit,
    layout: QubitLayout,
}

impl<'a> Amplifier<'a> {
    pub fn new(s_circuit: &'a Circuit, layout: QubitLayout) -> Result<Self> {
        if s_circuit.num_qubits() != layout.num_qubits() {
            return Err(Error::arg(format!(
                "s circuit acts on {} qubits, layout has {}",
                s_circuit.num_qubits(),
                layout.num_qubits()
            )));
        }
        Ok(Amplifier { s_circuit, s_inverse: s_circuit.inverse(), layout })
    }

    /// `|s> = S |0^m>`
    pub fn start(&self) -> Result<QuantumState> {
        let mut state = QuantumState::basis_state(self.layout.num_qubits(), 0)?;
        state.apply_circuit(self.s_circuit)?;
        Ok(state)
    }

    pub fn iterate(&self, state: &mut QuantumState) -> Result<()> {
        let omega = 1usize << self.layout.omega();
        // 1 - 2P: flip the sign of the omega = 0 slice.
        state.negate_where(omega, 0);
        // -(2|s><s| - 1) = -S (2|0><0| - 1) S^dagger
        state.apply_circuit(&self.s_inverse)?;
        state.negate_all();
        state.negate_basis(0);
        state.apply_circuit(self.s_circuit)?;
        state.negate_all();
        Ok(())
    }
}

pub fn grover_iterate(mut state: QuantumState, s_circuit: &Circuit, layout: &QubitLayout) -> Result<QuantumState> {
    Amplifier::new(s_circuit, *layout)?.iterate(&mut state)?;
    Ok(state)
}

/// `|s>` followed by `j` iterations.
pub fn amplify(s_circuit: &Circuit, layout: &QubitLayout, j: u64) -> Result<QuantumState> {
    let amp = Amplifier::new(s_circuit, *layout)?;
    let mut state = amp.start()?;
    for _ in 0..j {
        amp.iterate(&mut state)?;
    }
    Ok(state)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingRow {
    pub n: usize,
    /// Simulated `P(omega = 0)` of `|s>`.
    pub target_prob: f64,
    pub j_opt: u64,
    pub predicted_success: f64,
    /// Terms the brute-force mean sums over, `2^n`.
    pub oracle_terms: u64,
}

/// Simulates `|s>` for the uniform amplitude function at each `n` and plans
/// its amplification. Target probability is `2^{-n}`, so `j_opt` grows like
/// `(pi/4) 2^{n/2}`.
pub fn scaling_sweep(ns: impl IntoIterator<Item = usize>) -> Result<Vec<ScalingRow>> {
    ns.into_iter()
        .map(|n| {
            let amps = AmplitudeFunction::uniform(n)?;
            let mc = MeanCircuit::new(&amps, &ReferencePoint::zero(n))?;
            let d = decompose_s(&mc.s_state()?, &mc.layout)?;
            let plan = plan_amplification(d.target_prob)?;
            Ok(ScalingRow {
                n,
                target_prob: d.target_prob,
                j_opt: plan.j_opt,
                predicted_success: plan.predicted_success,
                oracle_terms: 1u64 << n,
            })
        })
        .collect()
}

/// Least-squares slope of `log2(j_opt)` against `n`. Rows with `j_opt == 0`
/// are skipped.
pub fn log2_slope(rows: &[ScalingRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        rows.iter().filter(|r| r.j_opt > 0).map(|r| (r.n as f64, (r.j_opt as f64).log2())).collect();
    if pts.len() < 2 {
        return None;
    }
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn quarter_target_needs_one_step() {
        let p = plan_amplification(0.25).unwrap();
        assert!((p.theta - PI / 6.0).abs() < 1e-15);
        assert_eq!(p.j_opt, 1);
        assert!((p.predicted_success - 1.0).abs() < 1e-12);
    }

    #[test]
    fn full_target_needs_none() {
        let p = plan_amplification(1.0).unwrap();
        assert_eq!(p.theta, FRAC_PI_2);
        assert_eq!(p.j_opt, 0);
        assert!((p.predicted_success - 1.0).abs() < 1e-15);
    }

    #[test]
    fn small_target() {
        let p = plan_amplification(2f64.powi(-6)).unwrap();
        assert_eq!(p.j_opt, 6);
        // sin^2(13 asin(1/8)) evaluated independently
        let expected = (13.0 * 0.125f64.asin()).sin().powi(2);
        assert!((p.predicted_success - expected).abs() < 1e-12);
        assert!((p.predicted_success - 0.9966).abs() < 1e-4);
    }

    #[test]
    fn degenerate_targets() {
        assert!(matches!(plan_amplification(0.0), Err(Error::DegenerateTarget(_))));
        assert!(plan_amplification(-0.1).is_err());
        assert!(plan_amplification(1.5).is_err());
        assert!(plan_amplification(f64::NAN).is_err());
    }

    #[test]
    fn sweep_small() {
        let rows = scaling_sweep(2..=4).unwrap();
        assert_eq!(rows.iter().map(|r| r.j_opt).collect::<Vec<_>>(), vec![1, 2, 3]);
        for r in &rows {
            assert!((r.target_prob - 0.5f64.powi(r.n as i32)).abs() < 1e-12);
        }
        assert!(log2_slope(&rows[..1]).is_none());
    }

    #[test]
    fn layout_mismatch() {
        assert!(Amplifier::new(&Circuit::new(4), QubitLayout::new(2)).is_err());
    }
}
