//! Python bindings for `qmean-core`.
//!
//! Amplitude functions are passed around as `AmplitudeFunction` objects;
//! reference points are bit strings, most significant bit first.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use qmean_core as core;
use qmean_core::{MeanCircuit, ReferencePoint};

create_exception!(qmean, EstimationError, PyRuntimeError, "Estimation failed on a valid input.");

fn to_py(e: core::Error) -> PyErr {
    if e.is_validation() {
        PyValueError::new_err(e.to_string())
    } else {
        EstimationError::new_err(e.to_string())
    }
}

fn reference(amps: &core::AmplitudeFunction, y: Option<&str>) -> PyResult<ReferencePoint> {
    let Some(y) = y else {
        return Ok(ReferencePoint::zero(amps.n()));
    };
    let point: ReferencePoint = y.parse().map_err(to_py)?;
    if point.n() != amps.n() {
        return Err(PyValueError::new_err(format!(
            "reference point {y:?} has {} bits, amplitude function has n = {}",
            point.n(),
            amps.n()
        )));
    }
    Ok(point)
}

#[pyclass(frozen, name = "AmplitudeFunction")]
struct PyAmplitudes(core::AmplitudeFunction);

#[pymethods]
impl PyAmplitudes {
    /// Wraps a normalized list of `2^n` complex amplitudes.
    #[new]
    fn new(values: Vec<Complex64>) -> PyResult<Self> {
        let n = values.len().max(1).trailing_zeros() as usize;
        core::AmplitudeFunction::new(n, values).map(Self).map_err(to_py)
    }

    /// Normalizes `values` before wrapping them.
    #[staticmethod]
    fn normalized(values: Vec<Complex64>) -> PyResult<Self> {
        let n = values.len().max(1).trailing_zeros() as usize;
        core::AmplitudeFunction::normalized(n, values).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn uniform(n: usize) -> PyResult<Self> {
        core::AmplitudeFunction::uniform(n).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn point(n: usize, index: usize) -> PyResult<Self> {
        core::AmplitudeFunction::point(n, index).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn alternating_sign(n: usize) -> PyResult<Self> {
        core::AmplitudeFunction::alternating_sign(n).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn random(n: usize, seed: u64) -> PyResult<Self> {
        core::AmplitudeFunction::random(n, seed).map(Self).map_err(to_py)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn values(&self) -> Vec<Complex64> {
        self.0.values().to_vec()
    }

    fn at(&self, y: &str) -> PyResult<Complex64> {
        Ok(self.0.at(&reference(&self.0, Some(y))?))
    }

    fn __len__(&self) -> usize {
        self.0.values().len()
    }

    fn __repr__(&self) -> String {
        format!("AmplitudeFunction(n={})", self.0.n())
    }
}

#[pyclass(frozen, get_all)]
struct StatePrep {
    num_qubits: usize,
    gate_count: usize,
    global_phase: f64,
    circuit: String,
}

#[pymethods]
impl StatePrep {
    fn __repr__(&self) -> String {
        format!("StatePrep(num_qubits={}, gate_count={})", self.num_qubits, self.gate_count)
    }
}

#[pyclass(frozen, get_all)]
struct ClaimReport {
    z1: Complex64,
    z0: Complex64,
    z1_expected: Complex64,
    z0_expected: Complex64,
    z1_error: f64,
    z0_error: f64,
}

#[pyclass(frozen, get_all)]
struct AmplificationPlan {
    theta: f64,
    j_opt: u64,
    predicted_success: f64,
}

#[pymethods]
impl AmplificationPlan {
    fn success_after(&self, j: u64) -> f64 {
        ((2 * j + 1) as f64 * self.theta).sin().powi(2)
    }

    fn __repr__(&self) -> String {
        format!("AmplificationPlan(j_opt={}, predicted_success={})", self.j_opt, self.predicted_success)
    }
}

#[pyclass(frozen, get_all)]
struct EstimationReport {
    n: usize,
    y: String,
    seed: u64,
    shots: u64,
    n1: u64,
    n0: u64,
    discarded: u64,
    ratio_estimate: f64,
    mean_magnitude_estimate: f64,
    ci_low: f64,
    ci_high: f64,
    j_used: u64,
    predicted_success: f64,
    ref_amplitude_magnitude: f64,
    comparable_size_warning: bool,
}

#[pymethods]
impl EstimationReport {
    fn __repr__(&self) -> String {
        format!(
            "EstimationReport(estimate={}, ci=({}, {}), n1={}, n0={})",
            self.mean_magnitude_estimate, self.ci_low, self.ci_high, self.n1, self.n0
        )
    }
}

#[pyclass(frozen, get_all)]
struct ScalingRow {
    n: usize,
    target_prob: f64,
    j_opt: u64,
    predicted_success: f64,
    oracle_terms: u64,
}

#[pyfunction]
fn compile_state_prep(amps: &PyAmplitudes) -> PyResult<StatePrep> {
    let prep = core::compile_state_prep(&amps.0).map_err(to_py)?;
    Ok(StatePrep {
        num_qubits: prep.circuit.num_qubits(),
        gate_count: prep.circuit.len(),
        global_phase: prep.global_phase,
        circuit: prep.circuit.dump(),
    })
}

/// Brute-force `(mean(A), A(y))`.
#[pyfunction]
#[pyo3(signature = (amps, y=None))]
fn classical_mean(amps: &PyAmplitudes, y: Option<&str>) -> PyResult<(Complex64, Complex64)> {
    let r = core::classical_mean(&amps.0, &reference(&amps.0, y)?).map_err(to_py)?;
    Ok((r.mean, r.ref_amplitude))
}

#[pyfunction]
#[pyo3(signature = (amps, y=None))]
fn verify_claim(amps: &PyAmplitudes, y: Option<&str>) -> PyResult<ClaimReport> {
    let r = core::verify_claim(&amps.0, &reference(&amps.0, y)?).map_err(to_py)?;
    Ok(ClaimReport {
        z1: r.z1,
        z0: r.z0,
        z1_expected: r.z1_expected,
        z0_expected: r.z0_expected,
        z1_error: r.z1_error,
        z0_error: r.z0_error,
    })
}

/// Amplitudes of the mean-circuit output state, little-endian, with the
/// preparation phase restored.
#[pyfunction]
#[pyo3(signature = (amps, y=None))]
fn s_statevector(amps: &PyAmplitudes, y: Option<&str>) -> PyResult<Vec<Complex64>> {
    let mc = MeanCircuit::new(&amps.0, &reference(&amps.0, y)?).map_err(to_py)?;
    let phase = Complex64::from_polar(1.0, mc.prep_phase);
    Ok(mc.s_state().map_err(to_py)?.amplitudes().iter().map(|z| z * phase).collect())
}

/// `|mean(A)| / |A(y)|` read from the simulated amplitudes, no sampling.
#[pyfunction]
#[pyo3(signature = (amps, y=None))]
fn exact_ratio(amps: &PyAmplitudes, y: Option<&str>) -> PyResult<f64> {
    let mc = MeanCircuit::new(&amps.0, &reference(&amps.0, y)?).map_err(to_py)?;
    core::exact_ratio(&mc.s_state().map_err(to_py)?, &mc.layout).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (amps, y=None, shots=100_000, seed=0))]
fn sampled_estimate(amps: &PyAmplitudes, y: Option<&str>, shots: u64, seed: u64) -> PyResult<EstimationReport> {
    let r = core::sampled_estimate(&amps.0, &reference(&amps.0, y)?, shots, seed).map_err(to_py)?;
    Ok(EstimationReport {
        n: r.n,
        y: r.y.to_string(),
        seed: r.seed,
        shots: r.shots,
        n1: r.n1,
        n0: r.n0,
        discarded: r.discarded,
        ratio_estimate: r.ratio_estimate,
        mean_magnitude_estimate: r.mean_magnitude_estimate,
        ci_low: r.ci_low,
        ci_high: r.ci_high,
        j_used: r.j_used,
        predicted_success: r.predicted_success,
        ref_amplitude_magnitude: r.ref_amplitude_magnitude,
        comparable_size_warning: r.comparable_size_warning,
    })
}

#[pyfunction]
fn plan_amplification(target_prob: f64) -> PyResult<AmplificationPlan> {
    let p = core::plan_amplification(target_prob).map_err(to_py)?;
    Ok(AmplificationPlan { theta: p.theta, j_opt: p.j_opt, predicted_success: p.predicted_success })
}

#[pyfunction]
fn suggest_reference(amps: &PyAmplitudes) -> String {
    core::suggest_reference(&amps.0).to_string()
}

#[pyfunction]
fn scaling_sweep(n_min: usize, n_max: usize) -> PyResult<Vec<ScalingRow>> {
    if n_min == 0 || n_min > n_max {
        return Err(PyValueError::new_err("need 1 <= n_min <= n_max"));
    }
    let rows = core::scaling_sweep(n_min..=n_max).map_err(to_py)?;
    Ok(rows
        .into_iter()
        .map(|r| ScalingRow {
            n: r.n,
            target_prob: r.target_prob,
            j_opt: r.j_opt,
            predicted_success: r.predicted_success,
            oracle_terms: r.oracle_terms,
        })
        .collect())
}

#[pymodule]
fn qmean(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("EstimationError", m.py().get_type::<EstimationError>())?;
    m.add_class::<PyAmplitudes>()?;
    m.add_class::<StatePrep>()?;
    m.add_class::<ClaimReport>()?;
    m.add_class::<AmplificationPlan>()?;
    m.add_class::<EstimationReport>()?;
    m.add_class::<ScalingRow>()?;
    m.add_function(wrap_pyfunction!(compile_state_prep, m)?)?;
    m.add_function(wrap_pyfunction!(classical_mean, m)?)?;
    m.add_function(wrap_pyfunction!(verify_claim, m)?)?;
    m.add_function(wrap_pyfunction!(s_statevector, m)?)?;
    m.add_function(wrap_pyfunction!(exact_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(sampled_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(plan_amplification, m)?)?;
    m.add_function(wrap_pyfunction!(suggest_reference, m)?)?;
    m.add_function(wrap_pyfunction!(scaling_sweep, m)?)?;
    Ok(())
}
