//! Dense statevector simulation.
//!
//! Amplitudes live in one contiguous `Vec<Complex64>` (re/im pairs). Bit `j`
//! of a basis index is the state of qubit `j`, so qubit 0 is the least
//! significant bit. Gates are applied in place by walking the pairs of
//! indices that differ only in the target bit.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::circuit::{Circuit, Control, Gate, GateOp, Matrix2};
use crate::error::{Error, Result};
use crate::TOLERANCE;

/// Index of a computational basis state; bit `j` is qubit `j`.
pub type BasisIndex = usize;

/// Largest register the simulator will allocate.
pub const MAX_QUBITS: usize = 30;

// Below this many amplitudes everything runs on the calling thread.
const PAR_MIN_LEN: usize = 1 << 14;
// Work unit for the parallel kernels, in amplitudes. Power of two.
const CHUNK: usize = 1 << 13;
// Shots drawn per generator stream.
const SHOT_CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl QuantumState {
    /// `|idx>` on `num_qubits` qubits.
    pub fn basis_state(num_qubits: usize, idx: BasisIndex) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        if idx >= dim {
            return Err(Error::arg(format!(
                "basis index {idx} out of range for {num_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[idx] = Complex64::new(1.0, 0.0);
        Ok(QuantumState { num_qubits, amps })
    }

    /// Wraps an amplitude vector. Its length must be a power of two (at least
    /// 2) and its 2-norm must be 1 within 1e-12.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::arg(format!(
                "state vector length {len} is not a power of two >= 2"
            )));
        }
        let num_qubits = len.trailing_zeros() as usize;
        check_qubit_count(num_qubits)?;
        let state = QuantumState { num_qubits, amps };
        let norm_sq = state.norm_sqr();
        if (norm_sq - 1.0).abs() > TOLERANCE {
            return Err(Error::NotNormalized { norm_sq, tolerance: TOLERANCE });
        }
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, idx: BasisIndex) -> Complex64 {
        self.amps[idx]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply_gate(&mut self, op: &GateOp) -> Result<()> {
        op.validate(self.num_qubits)?;
        let (mask, value) = op.control_mask();
        apply_matrix(&mut self.amps, op.target, mask, value, &op.gate.matrix());
        Ok(())
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.num_qubits() != self.num_qubits {
            return Err(Error::arg(format!(
                "{}-qubit circuit applied to a {}-qubit state",
                circuit.num_qubits(),
                self.num_qubits
            )));
        }
        for op in circuit.ops() {
            let (mask, value) = op.control_mask();
            apply_matrix(&mut self.amps, op.target, mask, value, &op.gate.matrix());
        }
        Ok(())
    }

    /// Applies `u^pi = (1 - pi) + u pi` with `pi` the product of `|0><0|` over
    /// `zero_controls`: components whose control qubits all read 0 get `u` on
    /// `target`, everything else is left alone.
    pub fn apply_projector_controlled(
        &mut self,
        u: Gate,
        target: usize,
        zero_controls: &[usize],
    ) -> Result<()> {
        let controls = zero_controls.iter().copied().map(Control::zero).collect();
        self.apply_gate(&GateOp::controlled(u, target, controls)?)
    }

    /// Total probability of the basis states matching every `(qubit, bit)`
    /// constraint.
    pub fn probability_of(&self, constraints: &[(usize, bool)]) -> Result<f64> {
        let (mask, value) = self.constraint_mask(constraints)?;
        // Sequential for a reproducible summation order.
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask == value)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    fn constraint_mask(&self, constraints: &[(usize, bool)]) -> Result<(usize, usize)> {
        let mut mask = 0usize;
        let mut value = 0usize;
        for &(q, bit) in constraints {
            if q >= self.num_qubits {
                return Err(Error::arg(format!(
                    "qubit {q} out of range for {} qubits",
                    self.num_qubits
                )));
            }
            if mask & (1 << q) != 0 {
                return Err(Error::arg(format!("qubit {q} constrained twice")));
            }
            mask |= 1 << q;
            if bit {
                value |= 1 << q;
            }
        }
        Ok((mask, value))
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &QuantumState) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::arg(format!(
                "inner product of {}- and {}-qubit states",
                self.num_qubits, other.num_qubits
            )));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Draws `shots` computational-basis outcomes from `|amplitude|^2`.
    ///
    /// Shots are split into fixed-size blocks and block `k` uses stream `k` of
    /// a ChaCha8 generator keyed by `seed`, so the counts depend only on
    /// `(state, shots, seed)` and not on how the blocks are scheduled.
    pub fn sample_measurements(&self, shots: u64, seed: u64) -> BTreeMap<BasisIndex, u64> {
        let mut cdf = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0;
        for a in &self.amps {
            acc += a.norm_sqr();
            cdf.push(acc);
        }
        let total = acc;
        let last = self.amps.iter().rposition(|a| a.norm_sqr() > 0.0).unwrap_or(0);

        let blocks = shots.div_ceil(SHOT_CHUNK);
        let partial: Vec<BTreeMap<BasisIndex, u64>> = (0..blocks)
            .into_par_iter()
            .map(|block| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(block);
                let take = SHOT_CHUNK.min(shots - block * SHOT_CHUNK);
                let mut counts = BTreeMap::new();
                for _ in 0..take {
                    let u = rng.random::<f64>() * total;
                    let idx = cdf.partition_point(|&p| p <= u).min(last);
                    *counts.entry(idx).or_insert(0) += 1;
                }
                counts
            })
            .collect();

        let mut counts = BTreeMap::new();
        for part in partial {
            for (idx, c) in part {
                *counts.entry(idx).or_insert(0) += c;
            }
        }
        counts
    }

    pub(crate) fn negate_all(&mut self) {
        self.negate_where(0, 0);
    }

    pub(crate) fn negate_basis(&mut self, idx: BasisIndex) {
        self.amps[idx] = -self.amps[idx];
    }

    /// Multiplies every component with `i & mask == value` by -1.
    pub(crate) fn negate_where(&mut self, mask: usize, value: usize) {
        let flip = |base: usize, chunk: &mut [Complex64]| {
            for (k, a) in chunk.iter_mut().enumerate() {
                if (base + k) & mask == value {
                    *a = -*a;
                }
            }
        };
        if self.amps.len() >= PAR_MIN_LEN {
            self.amps
                .par_chunks_mut(CHUNK)
                .enumerate()
                .for_each(|(c, chunk)| flip(c * CHUNK, chunk));
        } else {
            flip(0, &mut self.amps);
        }
    }
}

fn check_qubit_count(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 || num_qubits > MAX_QUBITS {
        return Err(Error::arg(format!(
            "qubit count {num_qubits} outside 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

#[inline]
fn pair_kernel(base: usize, lo: &mut [Complex64], hi: &mut [Complex64], mask: usize, value: usize, m: &Matrix2) {
    for (k, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
        if (base + k) & mask == value {
            let (x, y) = (*a, *b);
            *a = m[0] * x + m[1] * y;
            *b = m[2] * x + m[3] * y;
        }
    }
}

/// Applies `m` to `target` on every pair whose low index satisfies the
/// control mask. Each pair is touched by exactly one task, so the parallel
/// and sequential paths produce identical bits.
fn apply_matrix(amps: &mut [Complex64], target: usize, mask: usize, value: usize, m: &Matrix2) {
    let half = 1usize << target;
    let block = half << 1;
    if amps.len() < PAR_MIN_LEN {
        for (b, chunk) in amps.chunks_mut(block).enumerate() {
            let (lo, hi) = chunk.split_at_mut(half);
            pair_kernel(b * block, lo, hi, mask, value, m);
        }
    } else if block > CHUNK {
        let sub = CHUNK / 2;
        amps.par_chunks_mut(block).enumerate().for_each(|(b, chunk)| {
            let (lo, hi) = chunk.split_at_mut(half);
            lo.par_chunks_mut(sub)
                .zip(hi.par_chunks_mut(sub))
                .enumerate()
                .for_each(|(s, (l, h))| pair_kernel(b * block + s * sub, l, h, mask, value, m));
        });
    } else {
        amps.par_chunks_mut(CHUNK).enumerate().for_each(|(c, chunk)| {
            for (b, pair_block) in chunk.chunks_mut(block).enumerate() {
                let (lo, hi) = pair_block.split_at_mut(half);
                pair_kernel(c * CHUNK + b * block, lo, hi, mask, value, m);
            }
        });
    }
}
