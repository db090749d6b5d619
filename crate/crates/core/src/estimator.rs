//! Brute-force mean oracle and the two-hypothesis sampling estimator.
//!
//! After amplification the omega = 0 outcomes split into non-null events
//! (gamma = 1, weight `|z1|^2`) and null events (gamma = 0, weight `|z0|^2`).
//! Since `|z1| / |z0| = |mean(A)| / |A(y)|`, the count ratio gives
//! `|mean(A)| ~ |A(y)| sqrt(n1 / n0)`. Only magnitudes are recoverable.

use num_complex::Complex64;
use serde::Serialize;

use crate::amplitude::AmplitudeFunction;
use crate::error::{Error, Result, Starvation};
use crate::grover::{plan_amplification, Amplifier};
use crate::mean_circuit::{decompose_s, MeanCircuit, QubitLayout, ReferencePoint};
use crate::state::QuantumState;

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// `|z0|^2 < COMPARABLE_SIZE_RATIO * |z1|^2` marks a reference amplitude too
/// small to yield null events in reasonable time.
pub const COMPARABLE_SIZE_RATIO: f64 = 1e-4;

/// Below this the null-event probability counts as zero.
pub const NULL_PROB_FLOOR: f64 = 1e-300;

/// `|A(y)|` below this is treated as a zero reference amplitude.
pub const ZERO_REFERENCE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleResult {
    pub mean: Complex64,
    pub ref_amplitude: Complex64,
    /// `|mean| / |A(y)|`; `None` when `A(y) == 0`.
    pub magnitude_ratio: Option<f64>,
}

/// `mean(A) = 2^{-n} sum_x A(x)`, summed in index order, plus `A(y)`.
pub fn classical_mean(amps: &AmplitudeFunction, y: &ReferencePoint) -> Result<OracleResult> {
    if y.n() != amps.n() {
        return Err(Error::arg(format!(
            "reference point has {} bits, amplitude function has n = {}",
            y.n(),
            amps.n()
        )));
    }
    let sum = amps.values().iter().fold(Complex64::new(0.0, 0.0), |acc, z| acc + z);
    let mean = sum / (amps.values().len() as f64);
    let ref_amplitude = amps.at(y);
    let magnitude_ratio = (ref_amplitude.norm() != 0.0).then(|| mean.norm() / ref_amplitude.norm());
    Ok(OracleResult { mean, ref_amplitude, magnitude_ratio })
}

/// `sqrt(P(gamma = 1, omega = 0) / P(gamma = 0, omega = 0))` from exact
/// probabilities. Equals `|z1 / z0|` for `|s>` and every amplified iterate.
pub fn exact_ratio(state: &QuantumState, layout: &QubitLayout) -> Result<f64> {
    let (p1, p0) = hypothesis_probs(state, layout)?;
    if p0 < NULL_PROB_FLOOR {
        return Err(Error::NullStarvation(Starvation::Exact { p_null: p0 }));
    }
    Ok((p1 / p0).sqrt())
}

/// `(P(gamma = 1, omega = 0), P(gamma = 0, omega = 0))`.
pub fn hypothesis_probs(state: &QuantumState, layout: &QubitLayout) -> Result<(f64, f64)> {
    let (g, w) = (layout.gamma(), layout.omega());
    Ok((
        state.probability_of(&[(g, true), (w, false)])?,
        state.probability_of(&[(g, false), (w, false)])?,
    ))
}

/// `argmax_y |A(y)|`, smallest index on ties. Since the squared magnitudes sum
/// to 1, the maximum is at least `2^{-n/2}`.
pub fn suggest_reference(amps: &AmplitudeFunction) -> ReferencePoint {
    let values = amps.values();
    let best = (1..values.len()).fold(0, |best, i| {
        if values[i].norm_sqr() > values[best].norm_sqr() {
            i
        } else {
            best
        }
    });
    ReferencePoint::new(amps.n(), best).expect("index within 2^n")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimationReport {
    pub n: usize,
    pub y: ReferencePoint,
    pub seed: u64,
    pub shots: u64,
    /// omega = 0, gamma = 1
    pub n1: u64,
    /// omega = 0, gamma = 0
    pub n0: u64,
    /// omega = 1
    pub discarded: u64,
    /// `sqrt(n1 / n0)`
    pub ratio_estimate: f64,
    /// `|A(y)| sqrt(n1 / n0)`
    pub mean_magnitude_estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub j_used: u64,
    pub predicted_success: f64,
    pub ref_amplitude_magnitude: f64,
    /// Set from the simulated amplitudes when `|z0|^2 < 1e-4 |z1|^2`.
    pub comparable_size_warning: bool,
}

/// Builds `|s>`, amplifies it with the optimal iteration count, samples
/// `shots` outcomes and turns the null/non-null counts into an estimate of
/// `|mean(A)|` with a 95% confidence interval.
pub fn sampled_estimate(
    amps: &AmplitudeFunction,
    y: &ReferencePoint,
    shots: u64,
    seed: u64,
) -> Result<EstimationReport> {
    if shots == 0 {
        return Err(Error::arg("shots must be at least 1"));
    }
    let oracle = classical_mean(amps, y)?;
    let ref_mag = oracle.ref_amplitude.norm();
    if ref_mag < ZERO_REFERENCE_TOLERANCE {
        return Err(Error::ZeroReference { y: y.to_string(), suggestion: suggest_reference(amps).to_string() });
    }

    let mc = MeanCircuit::new(amps, y)?;
    let amplifier = Amplifier::new(&mc.circuit, mc.layout)?;
    let mut state = amplifier.start()?;
    let d = decompose_s(&state, &mc.layout)?;
    let plan = plan_amplification(d.target_prob)?;
    for _ in 0..plan.j_opt {
        amplifier.iterate(&mut state)?;
    }

    let (gamma, omega) = (1usize << mc.layout.gamma(), 1usize << mc.layout.omega());
    let (mut n1, mut n0, mut discarded) = (0u64, 0u64, 0u64);
    for (idx, count) in state.sample_measurements(shots, seed) {
        if idx & omega != 0 {
            discarded += count;
        } else if idx & gamma != 0 {
            n1 += count;
        } else {
            n0 += count;
        }
    }
    if n0 == 0 {
        return Err(Error::NullStarvation(Starvation::Sampled { n1, shots }));
    }

    let ratio_estimate = (n1 as f64 / n0 as f64).sqrt();
    let (ci_low, ci_high) = ratio_interval(n1, n0, ref_mag);
    Ok(EstimationReport {
        n: amps.n(),
        y: *y,
        seed,
        shots,
        n1,
        n0,
        discarded,
        ratio_estimate,
        mean_magnitude_estimate: ref_mag * ratio_estimate,
        ci_low,
        ci_high,
        j_used: plan.j_opt,
        predicted_success: plan.predicted_success,
        ref_amplitude_magnitude: ref_mag,
        comparable_size_warning: d.z0.norm_sqr() < COMPARABLE_SIZE_RATIO * d.z1.norm_sqr(),
    })
}

/// 95% interval for `scale * sqrt(p / (1 - p))` given `n1` successes out of
/// `n1 + n0`: a normal interval on `p` pushed through the delta method. With
/// no successes the interval is `[0, r(p_hi)]`, `p_hi` the exact
/// Clopper-Pearson upper bound `1 - 0.025^{1/N}`. Requires `n0 > 0`.
pub fn ratio_interval(n1: u64, n0: u64, scale: f64) -> (f64, f64) {
    let total = (n1 + n0) as f64;
    let r = |p: f64| scale * (p / (1.0 - p)).sqrt();
    if n1 == 0 {
        let p_hi = 1.0 - 0.025f64.powf(1.0 / total);
        return (0.0, r(p_hi));
    }
    let p = n1 as f64 / total;
    let se = (p * (1.0 - p) / total).sqrt();
    let slope = scale / (2.0 * p.sqrt() * (1.0 - p).powf(1.5));
    let half = Z_95 * slope * se;
    let centre = r(p);
    ((centre - half).max(0.0), centre + half)
}
