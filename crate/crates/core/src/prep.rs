//! Exact state preparation by uniformly controlled rotations.
//!
//! Level `k` rotates qubit `k` with an `RY` whose angle depends on the values
//! of qubits `0..k`, splitting each branch's weight between `x_k = 0` and
//! `x_k = 1`. After all levels the register holds `sum |A(x)| |x>`; a final
//! uniformly controlled diagonal on qubit `n - 1` writes the relative phases.
//! The phase of the largest amplitude is factored out and reported instead of
//! being applied.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::amplitude::AmplitudeFunction;
use crate::circuit::{Circuit, Control, Gate, GateOp};
use crate::error::{Error, Result};
use crate::state::QuantumState;

// Multiplexed angles closer than this are treated as one uncontrolled gate.
const MERGE_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct StatePrep {
    pub circuit: Circuit,
    /// The prepared state equals `e^{-i global_phase} |psi>`.
    pub global_phase: f64,
}

impl StatePrep {
    /// `e^{i global_phase}`, the factor that maps prepared amplitudes back
    /// onto `A(x)`.
    pub fn phase_factor(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.global_phase)
    }
}

pub fn compile_state_prep(amps: &AmplitudeFunction) -> Result<StatePrep> {
    let n = amps.n();
    let values = amps.values();
    let mut circuit = Circuit::new(n);

    // weights[k][p] = sum of |A(x)|^2 over x with (x mod 2^k) == p
    let mut weights: Vec<Vec<f64>> = vec![Vec::new(); n + 1];
    weights[n] = values.iter().map(|z| z.norm_sqr()).collect();
    for k in (0..n).rev() {
        let finer = &weights[k + 1];
        let half = 1usize << k;
        weights[k] = (0..half).map(|p| finer[p] + finer[p + half]).collect();
    }

    for k in 0..n {
        let finer = &weights[k + 1];
        let half = 1usize << k;
        // atan2(0, 0) == 0: empty branches get no rotation.
        let angles: Vec<f64> =
            (0..half).map(|p| 2.0 * finer[p + half].sqrt().atan2(finer[p].sqrt())).collect();
        emit_multiplexed(&mut circuit, k, &angles, |&theta| {
            // Qubit k is still |0> here, so RY(pi) and X agree; X leaves no
            // cos(pi/2) residue on the emptied branch.
            if theta == 0.0 {
                None
            } else if theta == PI {
                Some(Gate::X)
            } else {
                Some(Gate::Ry(theta))
            }
        })?;
    }

    let reference = values
        .iter()
        .enumerate()
        .fold(0, |best, (i, z)| if z.norm_sqr() > values[best].norm_sqr() { i } else { best });
    let global_phase = values[reference].arg();
    let unwind = values[reference].conj();
    let phase = |z: &Complex64| if z.norm_sqr() == 0.0 { 0.0 } else { (z * unwind).arg() };

    let top = n - 1;
    let half = 1usize << top;
    let pairs: Vec<(f64, f64)> = (0..half).map(|p| (phase(&values[p]), phase(&values[p + half]))).collect();
    emit_multiplexed(&mut circuit, top, &pairs, |&(p0, p1)| {
        (p0 != 0.0 || p1 != 0.0).then_some(Gate::Diag(p0, p1))
    })?;

    Ok(StatePrep { circuit, global_phase })
}

/// Emits one gate per control pattern `p` on qubits `0..target`, or a single
/// uncontrolled gate when every pattern carries the same parameters.
fn emit_multiplexed<T: Copy + Close>(
    circuit: &mut Circuit,
    target: usize,
    params: &[T],
    gate_for: impl Fn(&T) -> Option<Gate>,
) -> Result<()> {
    if params.iter().all(|t| t.close_to(&params[0])) {
        if let Some(g) = gate_for(&params[0]) {
            circuit.push(GateOp::single(g, target))?;
        }
        return Ok(());
    }
    for (p, t) in params.iter().enumerate() {
        if let Some(g) = gate_for(t) {
            let controls = (0..target).map(|q| Control { qubit: q, value: (p >> q) & 1 == 1 }).collect();
            circuit.push(GateOp::controlled(g, target, controls)?)?;
        }
    }
    Ok(())
}

trait Close {
    fn close_to(&self, other: &Self) -> bool;
}

impl Close for f64 {
    fn close_to(&self, other: &Self) -> bool {
        (self - other).abs() <= MERGE_TOLERANCE
    }
}

impl Close for (f64, f64) {
    fn close_to(&self, other: &Self) -> bool {
        self.0.close_to(&other.0) && self.1.close_to(&other.1)
    }
}

/// Runs `circuit` on `|0^n>`.
pub fn prepared_state(circuit: &Circuit, n: usize) -> Result<QuantumState> {
    if circuit.num_qubits() != n {
        return Err(Error::arg(format!(
            "circuit acts on {} qubits, expected {n}",
            circuit.num_qubits()
        )));
    }
    let mut state = QuantumState::basis_state(n, 0)?;
    state.apply_circuit(circuit)?;
    Ok(state)
}
