//! Experiment runner behind the `qmean` binary.
//!
//! Exit codes: 0 on success, 1 for I/O failures on output, 2 for invalid
//! input (bad flags, bad JSON, wrong vector length, unnormalized amplitudes),
//! 3 when the estimator cannot run on a valid input (zero reference
//! amplitude, null starvation).

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use qmean_core::{
    classical_mean, exact_ratio, log2_slope, plan_amplification, sampled_estimate, scaling_sweep,
    suggest_reference, verify_claim, AmplificationPlan, AmplitudeFunction, EstimationReport, MeanCircuit,
    OracleResult, ReferencePoint, ScalingRow,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    VerifyClaim,
    Exact,
    Sample,
    ScalingSweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Uniform,
    Point,
    AlternatingSign,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    File(PathBuf),
    Builtin(Builtin),
    Random(u64),
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::File(p) => write!(f, "file:{}", p.display()),
            Source::Builtin(b) => write!(f, "builtin:{}", b.to_possible_value().expect("no skipped variants").get_name()),
            Source::Random(seed) => write!(f, "random:{seed}"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qmean", version, about = "Estimate the mean of an amplitude function by amplitude amplification")]
pub struct Args {
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Number of qubits of |psi>; upper end of the range for scaling-sweep.
    #[arg(long)]
    pub n: Option<usize>,
    /// Lower end of the scaling-sweep range.
    #[arg(long, default_value_t = 2)]
    pub n_min: usize,
    /// Amplitude function JSON: {"n": N, "amplitudes": [[re, im], ...]}.
    #[arg(long, conflicts_with_all = ["builtin", "random_seed"])]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, conflicts_with = "random_seed")]
    pub builtin: Option<Builtin>,
    /// Draw a random amplitude function with this seed.
    #[arg(long)]
    pub random_seed: Option<u64>,
    /// Reference point as a bit string (most significant bit first) or "auto".
    #[arg(long, default_value = "auto")]
    pub y: String,
    #[arg(long, default_value_t = 100_000)]
    pub shots: u64,
    /// Sampling seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report path. Defaults to stdout. Scaling sweeps also write a .csv
    /// next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub n: Option<usize>,
    pub n_min: usize,
    pub source: Option<Source>,
    /// `None` means pick with `suggest_reference`.
    pub y: Option<String>,
    pub shots: u64,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl TryFrom<Args> for ExperimentConfig {
    type Error = RunError;

    fn try_from(a: Args) -> Result<Self, RunError> {
        let source = match (a.input, a.builtin, a.random_seed) {
            (Some(p), None, None) => Some(Source::File(p)),
            (None, Some(b), None) => Some(Source::Builtin(b)),
            (None, None, Some(s)) => Some(Source::Random(s)),
            (None, None, None) => None,
            _ => return Err(RunError::Invalid("give at most one of --input, --builtin, --random-seed".into())),
        };
        let config = ExperimentConfig {
            mode: a.mode,
            n: a.n,
            n_min: a.n_min,
            source,
            y: (a.y != "auto").then_some(a.y),
            shots: a.shots,
            seed: a.seed,
            out: a.out,
        };
        config.validate()?;
        Ok(config)
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), RunError> {
        if self.n == Some(0) {
            return Err(RunError::Invalid("n must be at least 1".into()));
        }
        match self.mode {
            Mode::ScalingSweep => {
                let hi = self.n.unwrap_or(DEFAULT_SWEEP_MAX);
                if self.n_min == 0 || self.n_min > hi {
                    return Err(RunError::Invalid(format!("empty sweep range {}..={hi}", self.n_min)));
                }
            }
            _ => {
                match &self.source {
                    None => return Err(RunError::Invalid("one of --input, --builtin, --random-seed is required".into())),
                    Some(Source::Builtin(_) | Source::Random(_)) if self.n.is_none() => {
                        return Err(RunError::Invalid("--n is required with --builtin and --random-seed".into()))
                    }
                    _ => {}
                }
                if self.mode == Mode::Sample && self.shots == 0 {
                    return Err(RunError::Invalid("shots must be at least 1".into()));
                }
            }
        }
        Ok(())
    }
}

pub const DEFAULT_SWEEP_MAX: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub enum RunError {
    Invalid(String),
    Estimation(String),
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Io(_) => 1,
            RunError::Invalid(_) => 2,
            RunError::Estimation(_) => 3,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Invalid(m) => write!(f, "invalid input: {m}"),
            RunError::Estimation(m) => write!(f, "estimation failed: {m}"),
            RunError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<qmean_core::Error> for RunError {
    fn from(e: qmean_core::Error) -> Self {
        if e.is_validation() {
            RunError::Invalid(e.to_string())
        } else {
            RunError::Estimation(e.to_string())
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ClaimOutput {
    pub source: String,
    pub n: usize,
    pub y: ReferencePoint,
    pub z1: Complex64,
    pub z0: Complex64,
    pub z1_expected: Complex64,
    pub z0_expected: Complex64,
    pub z1_error: f64,
    pub z0_error: f64,
}

#[derive(Debug, Serialize)]
pub struct ExactOutput {
    pub source: String,
    pub n: usize,
    pub y: ReferencePoint,
    pub oracle: OracleResult,
    /// `sqrt(P(gamma=1, omega=0) / P(gamma=0, omega=0))` from the simulated `|s>`.
    pub exact_ratio: f64,
    /// `exact_ratio * |A(y)|`
    pub mean_magnitude: f64,
    pub target_prob: f64,
    pub plan: AmplificationPlan,
    /// `sqrt(2) z1` read off the simulated amplitudes. Not observable on
    /// hardware, where only `|mean|` is recoverable.
    pub simulator_only_mean: Complex64,
}

#[derive(Debug, Serialize)]
pub struct SampleOutput {
    pub source: String,
    #[serde(flatten)]
    pub report: EstimationReport,
}

#[derive(Debug, Serialize)]
pub struct SweepOutput {
    pub n_min: usize,
    pub n_max: usize,
    pub rows: Vec<ScalingRow>,
    pub log2_slope: Option<f64>,
}

#[derive(Debug, Serialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum Report {
    VerifyClaim(ClaimOutput),
    Exact(ExactOutput),
    Sample(SampleOutput),
    ScalingSweep(SweepOutput),
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// CSV table for scaling sweeps.
    pub fn csv(&self) -> Option<String> {
        let Report::ScalingSweep(sweep) = self else { return None };
        let mut out = String::from("n,target_prob,j_opt,predicted_success,oracle_terms\n");
        for r in &sweep.rows {
            out.push_str(&format!("{},{},{},{},{}\n", r.n, r.target_prob, r.j_opt, r.predicted_success, r.oracle_terms));
        }
        Some(out)
    }
}

pub fn load_amplitudes(source: &Source, n: Option<usize>) -> Result<AmplitudeFunction, RunError> {
    let amps = match *source {
        Source::File(ref path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| RunError::Invalid(format!("cannot read {}: {e}", path.display())))?;
            let amps: AmplitudeFunction = serde_json::from_str(&text)
                .map_err(|e| RunError::Invalid(format!("{}: {e}", path.display())))?;
            if let Some(n) = n.filter(|&n| n != amps.n()) {
                return Err(RunError::Invalid(format!("--n {n} disagrees with n = {} in {}", amps.n(), path.display())));
            }
            amps
        }
        Source::Builtin(b) => {
            let n = n.ok_or_else(|| RunError::Invalid("--n is required".into()))?;
            match b {
                Builtin::Uniform => AmplitudeFunction::uniform(n)?,
                Builtin::Point => AmplitudeFunction::point(n, 0)?,
                Builtin::AlternatingSign => AmplitudeFunction::alternating_sign(n)?,
            }
        }
        Source::Random(seed) => {
            let n = n.ok_or_else(|| RunError::Invalid("--n is required".into()))?;
            generate_random_amps(n, seed)?
        }
    };
    Ok(amps)
}

/// Standard-normal real and imaginary parts, normalized; deterministic in
/// `(n, seed)`.
pub fn generate_random_amps(n: usize, seed: u64) -> Result<AmplitudeFunction, RunError> {
    Ok(AmplitudeFunction::random(n, seed)?)
}

fn reference_point(config: &ExperimentConfig, amps: &AmplitudeFunction) -> Result<ReferencePoint, RunError> {
    match &config.y {
        None => Ok(suggest_reference(amps)),
        Some(bits) => {
            let y: ReferencePoint = bits.parse()?;
            if y.n() != amps.n() {
                return Err(RunError::Invalid(format!("y = {bits} has {} bits, expected n = {}", y.n(), amps.n())));
            }
            Ok(y)
        }
    }
}

pub fn run(config: &ExperimentConfig) -> Result<Report, RunError> {
    config.validate()?;
    if config.mode == Mode::ScalingSweep {
        let n_max = config.n.unwrap_or(DEFAULT_SWEEP_MAX);
        let rows = scaling_sweep(config.n_min..=n_max)?;
        let slope = log2_slope(&rows);
        return Ok(Report::ScalingSweep(SweepOutput { n_min: config.n_min, n_max, rows, log2_slope: slope }));
    }

    let source = config.source.as_ref().expect("validated");
    let amps = load_amplitudes(source, config.n)?;
    let y = reference_point(config, &amps)?;
    let n = amps.n();
    let source = source.to_string();

    Ok(match config.mode {
        Mode::VerifyClaim => {
            let r = verify_claim(&amps, &y)?;
            Report::VerifyClaim(ClaimOutput {
                source,
                n,
                y,
                z1: r.z1,
                z0: r.z0,
                z1_expected: r.z1_expected,
                z0_expected: r.z0_expected,
                z1_error: r.z1_error,
                z0_error: r.z0_error,
            })
        }
        Mode::Exact => {
            let oracle = classical_mean(&amps, &y)?;
            let mc = MeanCircuit::new(&amps, &y)?;
            let s = mc.s_state()?;
            let ratio = exact_ratio(&s, &mc.layout)?;
            let d = mc.decomposition()?;
            Report::Exact(ExactOutput {
                source,
                n,
                y,
                oracle,
                exact_ratio: ratio,
                mean_magnitude: ratio * oracle.ref_amplitude.norm(),
                target_prob: d.target_prob,
                plan: plan_amplification(d.target_prob)?,
                simulator_only_mean: d.z1 * std::f64::consts::SQRT_2,
            })
        }
        Mode::Sample => {
            Report::Sample(SampleOutput { source, report: sampled_estimate(&amps, &y, config.shots, config.seed)? })
        }
        Mode::ScalingSweep => unreachable!(),
    })
}

/// Runs `config` and writes the report (and sweep CSV) to `config.out`, or
/// prints the JSON when no path is given.
pub fn execute(config: &ExperimentConfig) -> Result<Report, RunError> {
    let report = run(config)?;
    match &config.out {
        Some(path) => {
            write(path, &report.to_json())?;
            if let Some(csv) = report.csv() {
                write(&path.with_extension("csv"), &csv)?;
            }
        }
        None => println!("{}", report.to_json()),
    }
    Ok(report)
}

fn write(path: &Path, contents: &str) -> Result<(), RunError> {
    fs::write(path, contents).map_err(|e| RunError::Io(format!("cannot write {}: {e}", path.display())))
}
