//! The `|s>` preparation circuit on the `(alpha, beta, gamma, mu0, omega)`
//! register and the decomposition of `|s>` into its two target components.
//!
//! Starting from `|0^m>` the circuit builds
//!
//! ```text
//! |s> = X(omega)^{pi(beta) pi(alpha)} (1/sqrt 2) [ T |psi>_alpha |0>_beta |1>_gamma |1>_mu0 |1>_omega
//!                                               +   |psi>_alpha |0>_beta |0>_gamma |0>_mu0 |1>_omega ]
//! ```
//!
//! where `T` is a Hadamard on every alpha and beta qubit and `pi(r)` projects
//! register `r` onto all zeros. The omega = 0 slice then holds exactly two
//! basis states: `z1 = mean(A) / sqrt 2` at (gamma, mu0) = (1, 1) and
//! `z0 = A(y) / sqrt 2` at (gamma, mu0) = (0, 0).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::amplitude::AmplitudeFunction;
use crate::circuit::{Circuit, Control, Gate, GateOp};
use crate::error::{Error, Result};
use crate::estimator::classical_mean;
use crate::prep::compile_state_prep;
use crate::state::{BasisIndex, QuantumState};

/// Qubit assignment: alpha = `0..n`, beta = `n..2n`, gamma = `2n`,
/// mu0 = `2n + 1`, omega = `2n + 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitLayout {
    n: usize,
}

impl QubitLayout {
    pub fn new(n: usize) -> Self {
        QubitLayout { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_qubits(&self) -> usize {
        2 * self.n + 3
    }

    pub fn alpha(&self, j: usize) -> usize {
        debug_assert!(j < self.n);
        j
    }

    pub fn beta(&self, j: usize) -> usize {
        debug_assert!(j < self.n);
        self.n + j
    }

    pub fn gamma(&self) -> usize {
        2 * self.n
    }

    pub fn mu0(&self) -> usize {
        2 * self.n + 1
    }

    pub fn omega(&self) -> usize {
        2 * self.n + 2
    }

    /// Basis index carrying `z1`: alpha = beta = 0, gamma = mu0 = 1, omega = 0.
    pub fn z1_index(&self) -> BasisIndex {
        (1 << self.gamma()) | (1 << self.mu0())
    }

    /// Basis index carrying `z0`: every qubit 0.
    pub fn z0_index(&self) -> BasisIndex {
        0
    }
}

/// The bit string `y` whose amplitude `A(y)` anchors the null hypothesis.
///
/// Written as a binary number, most significant bit (`y_{n-1}`) first, so
/// `"01"` at n = 2 is index 1 (`y_0 = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReferencePoint {
    n: usize,
    index: usize,
}

impl ReferencePoint {
    pub fn new(n: usize, index: usize) -> Result<Self> {
        if n == 0 || n >= usize::BITS as usize || index >= 1usize << n {
            return Err(Error::arg(format!("reference index {index} out of range for n = {n}")));
        }
        Ok(ReferencePoint { n, index })
    }

    pub fn zero(n: usize) -> Self {
        ReferencePoint { n, index: 0 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn bit(&self, j: usize) -> bool {
        (self.index >> j) & 1 == 1
    }
}

impl fmt::Display for ReferencePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.index, width = self.n)
    }
}

impl FromStr for ReferencePoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || !s.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::arg(format!("reference point {s:?} is not a bit string")));
        }
        let index = usize::from_str_radix(s, 2)
            .map_err(|e| Error::arg(format!("reference point {s:?}: {e}")))?;
        ReferencePoint::new(s.len(), index)
    }
}

impl Serialize for ReferencePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The omega = 0 amplitudes of `|s>` (or of any amplified iterate) and the
/// residual omega = 1 mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SDecomposition {
    pub z1: Complex64,
    pub z0: Complex64,
    /// `||chi||^2`, the probability of omega = 1.
    pub chi_sq_norm: f64,
    /// `|z1|^2 + |z0|^2`.
    pub target_prob: f64,
}

impl SDecomposition {
    /// Multiplies `z1` and `z0` by `factor` (a unit phase).
    pub fn rephased(self, factor: Complex64) -> Self {
        SDecomposition { z1: self.z1 * factor, z0: self.z0 * factor, ..self }
    }
}

/// Builds the `|s>` circuit around `psi_prep`, an n-qubit circuit preparing
/// `|psi>` from `|0^n>`. With reference point `y`, the null branch is shifted
/// by `X` on every alpha qubit with `y_j = 1` so that `z0 = A(y) / sqrt 2`.
pub fn build_s_circuit(n: usize, psi_prep: &Circuit, y: &ReferencePoint) -> Result<(Circuit, QubitLayout)> {
    if psi_prep.num_qubits() != n {
        return Err(Error::arg(format!(
            "state preparation acts on {} qubits, expected n = {n}",
            psi_prep.num_qubits()
        )));
    }
    if y.n() != n {
        return Err(Error::arg(format!("reference point has {} bits, expected n = {n}", y.n())));
    }
    let layout = QubitLayout::new(n);
    let (gamma, mu0, omega) = (layout.gamma(), layout.mu0(), layout.omega());
    let mut c = Circuit::new(layout.num_qubits());

    let alpha: Vec<usize> = (0..n).map(|j| layout.alpha(j)).collect();
    c.append_mapped(psi_prep, &alpha)?;

    // Two branches, gamma = mu0.
    c.push(GateOp::single(Gate::H, mu0))?;
    c.push(GateOp::controlled(Gate::X, gamma, vec![Control::one(mu0)])?)?;

    // T(alpha, beta) on the gamma = 1 branch only.
    for j in 0..n {
        c.push(GateOp::controlled(Gate::H, layout.alpha(j), vec![Control::one(gamma)])?)?;
        c.push(GateOp::controlled(Gate::H, layout.beta(j), vec![Control::one(gamma)])?)?;
    }

    // |y> -> |0^n> on the gamma = 0 branch.
    for j in (0..n).filter(|&j| y.bit(j)) {
        c.push(GateOp::controlled(Gate::X, layout.alpha(j), vec![Control::zero(gamma)])?)?;
    }

    c.push(GateOp::single(Gate::X, omega))?;
    let zero_controls = (0..n)
        .flat_map(|j| [layout.alpha(j), layout.beta(j)])
        .map(Control::zero)
        .collect();
    c.push(GateOp::controlled(Gate::X, omega, zero_controls)?)?;

    Ok((c, layout))
}

/// Reads `z1`, `z0` and the omega = 1 mass off a `2n + 3` qubit state.
pub fn decompose_s(state: &QuantumState, layout: &QubitLayout) -> Result<SDecomposition> {
    if state.num_qubits() != layout.num_qubits() {
        return Err(Error::arg(format!(
            "state has {} qubits, layout expects {}",
            state.num_qubits(),
            layout.num_qubits()
        )));
    }
    let z1 = state.amplitude(layout.z1_index());
    let z0 = state.amplitude(layout.z0_index());
    let chi_sq_norm = state.probability_of(&[(layout.omega(), true)])?;
    Ok(SDecomposition { z1, z0, chi_sq_norm, target_prob: z1.norm_sqr() + z0.norm_sqr() })
}

/// Compiled `|s>` circuit for a concrete amplitude function.
#[derive(Debug, Clone)]
pub struct MeanCircuit {
    pub circuit: Circuit,
    pub layout: QubitLayout,
    /// Global phase dropped by state preparation; `z * e^{i phase}` recovers
    /// the amplitudes of the exact `|s>`.
    pub prep_phase: f64,
}

impl MeanCircuit {
    pub fn new(amps: &AmplitudeFunction, y: &ReferencePoint) -> Result<Self> {
        let prep = compile_state_prep(amps)?;
        let (circuit, layout) = build_s_circuit(amps.n(), &prep.circuit, y)?;
        Ok(MeanCircuit { circuit, layout, prep_phase: prep.global_phase })
    }

    /// `|s>`, as prepared (without the global phase correction).
    pub fn s_state(&self) -> Result<QuantumState> {
        let mut state = QuantumState::basis_state(self.layout.num_qubits(), 0)?;
        state.apply_circuit(&self.circuit)?;
        Ok(state)
    }

    /// Decomposition of `|s>` with the preparation phase restored.
    pub fn decomposition(&self) -> Result<SDecomposition> {
        let d = decompose_s(&self.s_state()?, &self.layout)?;
        Ok(d.rephased(Complex64::from_polar(1.0, self.prep_phase)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClaimReport {
    pub z1: Complex64,
    pub z0: Complex64,
    pub z1_expected: Complex64,
    pub z0_expected: Complex64,
    /// `|z1 - mean(A) / sqrt 2|`
    pub z1_error: f64,
    /// `|z0 - A(y) / sqrt 2|`
    pub z0_error: f64,
}

/// Simulates `|s>` for `amps` and compares `z1`, `z0` against the brute-force
/// mean and `A(y)`.
pub fn verify_claim(amps: &AmplitudeFunction, y: &ReferencePoint) -> Result<ClaimReport> {
    let d = MeanCircuit::new(amps, y)?.decomposition()?;
    let oracle = classical_mean(amps, y)?;
    let root2 = std::f64::consts::SQRT_2;
    let z1_expected = oracle.mean / root2;
    let z0_expected = oracle.ref_amplitude / root2;
    Ok(ClaimReport {
        z1: d.z1,
        z0: d.z0,
        z1_expected,
        z0_expected,
        z1_error: (d.z1 - z1_expected).norm(),
        z0_error: (d.z0 - z0_expected).norm(),
    })
}
