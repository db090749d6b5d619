#![allow(dead_code)]

use num_complex::Complex64;
use qmean_core::circuit::Matrix2;
use qmean_core::{AmplitudeFunction, GateOp, QuantumState};

pub type Dense = Vec<Vec<Complex64>>;

pub fn random_state(m: usize, seed: u64) -> QuantumState {
    let a = AmplitudeFunction::random(m, seed).unwrap();
    QuantumState::from_amplitudes(a.values().to_vec()).unwrap()
}

fn identity(dim: usize) -> Dense {
    (0..dim)
        .map(|i| (0..dim).map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect()
}

fn kron(a: &Dense, b: &Dense) -> Dense {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![Complex64::new(0.0, 0.0); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn from2(m: &Matrix2) -> Dense {
    vec![vec![m[0], m[1]], vec![m[2], m[3]]]
}

/// Tensor product over qubits `m-1 .. 0` (qubit 0 is the least significant
/// factor) of `factor(q)`.
fn tensor(m: usize, factor: impl Fn(usize) -> Dense) -> Dense {
    (0..m).rev().fold(identity(1), |acc, q| kron(&acc, &factor(q)))
}

/// `(1 - pi) + U_target pi`, with `pi` the tensor product of the control
/// projectors, built by explicit Kronecker expansion.
pub fn dense_gate(op: &GateOp, m: usize) -> Dense {
    let u = tensor(m, |q| if q == op.target { from2(&op.gate.matrix()) } else { identity(2) });
    let pi = tensor(m, |q| match op.controls.iter().find(|c| c.qubit == q) {
        Some(c) => {
            let mut p = vec![vec![Complex64::new(0.0, 0.0); 2]; 2];
            let b = c.value as usize;
            p[b][b] = Complex64::new(1.0, 0.0);
            p
        }
        None => identity(2),
    });
    let dim = 1 << m;
    let u_pi = matmul(&u, &pi);
    (0..dim)
        .map(|i| (0..dim).map(|j| identity(dim)[i][j] - pi[i][j] + u_pi[i][j]).collect())
        .collect()
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn matvec(a: &Dense, v: &[Complex64]) -> Vec<Complex64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `|<target|built>|` where `target` holds `A(x)`.
pub fn fidelity(amps: &AmplitudeFunction, built: &QuantumState) -> f64 {
    amps.values().iter().zip(built.amplitudes()).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm()
}
