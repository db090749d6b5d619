//! Elementary gates and circuits.
//!
//! A [`GateOp`] is a single-qubit unitary on a target qubit, optionally
//! conditioned on a set of control qubits. Each control carries the bit value
//! it requires, so a control on `0` (an anti-control) realizes a `P0`
//! projector factor directly.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::TOLERANCE;

/// Row-major 2x2 complex matrix `[m00, m01, m10, m11]`.
pub type Matrix2 = [Complex64; 4];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    H,
    X,
    /// `RY(theta)|0> = cos(theta/2)|0> + sin(theta/2)|1>`.
    Ry(f64),
    /// `diag(e^{i phi0}, e^{i phi1})`.
    Diag(f64, f64),
    Unitary(Matrix2),
}

impl Gate {
    /// Arbitrary 2x2 gate; rejects matrices that are not unitary within 1e-12.
    pub fn unitary(m: Matrix2) -> Result<Self> {
        let deviation = unitarity_deviation(&m);
        if deviation > TOLERANCE {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Gate::Unitary(m))
    }

    pub fn matrix(&self) -> Matrix2 {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        match *self {
            Gate::H => [
                c(FRAC_1_SQRT_2, 0.0),
                c(FRAC_1_SQRT_2, 0.0),
                c(FRAC_1_SQRT_2, 0.0),
                c(-FRAC_1_SQRT_2, 0.0),
            ],
            Gate::X => [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            Gate::Ry(theta) => {
                let (s, co) = (theta / 2.0).sin_cos();
                [c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)]
            }
            Gate::Diag(p0, p1) => [
                Complex64::from_polar(1.0, p0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                Complex64::from_polar(1.0, p1),
            ],
            Gate::Unitary(m) => m,
        }
    }

    pub fn inverse(&self) -> Self {
        match *self {
            Gate::H => Gate::H,
            Gate::X => Gate::X,
            Gate::Ry(theta) => Gate::Ry(-theta),
            Gate::Diag(p0, p1) => Gate::Diag(-p0, -p1),
            Gate::Unitary(m) => Gate::Unitary([m[0].conj(), m[2].conj(), m[1].conj(), m[3].conj()]),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::H => write!(f, "H"),
            Gate::X => write!(f, "X"),
            Gate::Ry(theta) => write!(f, "RY({theta})"),
            Gate::Diag(p0, p1) => write!(f, "DIAG({p0},{p1})"),
            Gate::Unitary(m) => {
                write!(f, "U(")?;
                for (k, z) in m.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}{:+}i", z.re, z.im)?;
                }
                write!(f, ")")
            }
        }
    }
}

/// max |(M^dagger M - I)_{ij}|
pub(crate) fn unitarity_deviation(m: &Matrix2) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..2 {
                acc += m[2 * k + i].conj() * m[2 * k + j];
            }
            let expected = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((acc - expected).norm());
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Control {
    pub qubit: usize,
    /// The basis value the control qubit must hold for the gate to act.
    pub value: bool,
}

impl Control {
    pub fn one(qubit: usize) -> Self {
        Control { qubit, value: true }
    }

    pub fn zero(qubit: usize) -> Self {
        Control { qubit, value: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateOp {
    pub gate: Gate,
    pub target: usize,
    pub controls: Vec<Control>,
}

impl GateOp {
    pub fn single(gate: Gate, target: usize) -> Self {
        GateOp { gate, target, controls: Vec::new() }
    }

    /// Controlled gate. Fails if the target appears among the controls or a
    /// control qubit is repeated.
    pub fn controlled(gate: Gate, target: usize, controls: Vec<Control>) -> Result<Self> {
        let op = GateOp { gate, target, controls };
        op.check_wiring()?;
        Ok(op)
    }

    fn check_wiring(&self) -> Result<()> {
        for (k, c) in self.controls.iter().enumerate() {
            if c.qubit == self.target {
                return Err(Error::arg(format!("qubit {} is both target and control", c.qubit)));
            }
            if self.controls[..k].iter().any(|d| d.qubit == c.qubit) {
                return Err(Error::arg(format!("control qubit {} repeated", c.qubit)));
            }
        }
        Ok(())
    }

    /// Checks wiring and that every index is below `num_qubits`.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        self.check_wiring()?;
        if self.target >= num_qubits {
            return Err(Error::arg(format!(
                "target qubit {} out of range for {num_qubits} qubits",
                self.target
            )));
        }
        if let Some(c) = self.controls.iter().find(|c| c.qubit >= num_qubits) {
            return Err(Error::arg(format!(
                "control qubit {} out of range for {num_qubits} qubits",
                c.qubit
            )));
        }
        Ok(())
    }

    /// `(mask, value)` such that the gate acts on basis index `i` iff
    /// `i & mask == value`.
    pub(crate) fn control_mask(&self) -> (usize, usize) {
        self.controls.iter().fold((0, 0), |(mask, value), c| {
            let bit = 1usize << c.qubit;
            (mask | bit, if c.value { value | bit } else { value })
        })
    }

    pub fn inverse(&self) -> Self {
        GateOp { gate: self.gate.inverse(), target: self.target, controls: self.controls.clone() }
    }

    fn remapped(&self, map: &[usize]) -> Self {
        GateOp {
            gate: self.gate,
            target: map[self.target],
            controls: self
                .controls
                .iter()
                .map(|c| Control { qubit: map[c.qubit], value: c.value })
                .collect(),
        }
    }
}

/// `GATE target [controls]`, where controls print as `+q` (requires 1) or
/// `-q` (requires 0).
impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.gate, self.target)?;
        for c in &self.controls {
            write!(f, " {}{}", if c.value { '+' } else { '-' }, c.qubit)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    num_qubits: usize,
    ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit { num_qubits, ops: Vec::new() }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push(&mut self, op: GateOp) -> Result<()> {
        op.validate(self.num_qubits)?;
        self.ops.push(op);
        Ok(())
    }

    /// Appends `other`, sending its qubit `q` to `map[q]`.
    pub fn append_mapped(&mut self, other: &Circuit, map: &[usize]) -> Result<()> {
        if map.len() != other.num_qubits {
            return Err(Error::arg(format!(
                "qubit map has {} entries for a {}-qubit circuit",
                map.len(),
                other.num_qubits
            )));
        }
        for op in &other.ops {
            self.push(op.remapped(map))?;
        }
        Ok(())
    }

    /// The adjoint circuit: inverse gates in reverse order.
    pub fn inverse(&self) -> Self {
        Circuit {
            num_qubits: self.num_qubits,
            ops: self.ops.iter().rev().map(GateOp::inverse).collect(),
        }
    }

    /// One op per line in the `GateOp` display format.
    pub fn dump(&self) -> String {
        self.ops.iter().map(|op| format!("{op}\n")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_gates_are_unitary() {
        for g in [Gate::H, Gate::X, Gate::Ry(0.3), Gate::Diag(1.0, -2.5)] {
            assert!(unitarity_deviation(&g.matrix()) < TOLERANCE, "{g}");
        }
    }

    #[test]
    fn rejects_non_unitary_matrix() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        assert!(matches!(Gate::unitary([one, one, zero, one]), Err(Error::NotUnitary { .. })));
        assert!(Gate::unitary([zero, one, one, zero]).is_ok());
    }

    #[test]
    fn wiring_errors() {
        assert!(GateOp::controlled(Gate::X, 1, vec![Control::one(1)]).is_err());
        assert!(GateOp::controlled(Gate::X, 2, vec![Control::one(0), Control::zero(0)]).is_err());
        let mut c = Circuit::new(2);
        assert!(c.push(GateOp::single(Gate::H, 2)).is_err());
        assert!(c.push(GateOp::controlled(Gate::X, 0, vec![Control::one(5)]).unwrap()).is_err());
        assert!(c.is_empty());
    }

    #[test]
    fn control_mask_encodes_polarity() {
        let op = GateOp::controlled(Gate::X, 0, vec![Control::one(1), Control::zero(3)]).unwrap();
        assert_eq!(op.control_mask(), (0b1010, 0b0010));
    }

    #[test]
    fn dump_format() {
        let mut c = Circuit::new(4);
        c.push(GateOp::single(Gate::H, 2)).unwrap();
        c.push(GateOp::controlled(Gate::X, 3, vec![Control::zero(0), Control::one(1)]).unwrap())
            .unwrap();
        c.push(GateOp::single(Gate::Ry(0.5), 0)).unwrap();
        assert_eq!(c.dump(), "H 2\nX 3 -0 +1\nRY(0.5) 0\n");
    }

    #[test]
    fn inverse_reverses_order() {
        let mut c = Circuit::new(1);
        c.push(GateOp::single(Gate::Ry(0.5), 0)).unwrap();
        c.push(GateOp::single(Gate::Diag(0.1, 0.2), 0)).unwrap();
        let inv = c.inverse();
        assert_eq!(inv.ops()[0].gate, Gate::Diag(-0.1, -0.2));
        assert_eq!(inv.ops()[1].gate, Gate::Ry(-0.5));
    }
}
