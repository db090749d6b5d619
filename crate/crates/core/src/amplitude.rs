//! Amplitude functions `A(x)` over n-bit strings.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mean_circuit::ReferencePoint;

/// Tolerance on `sum |A(x)|^2 = 1`.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-10;

/// Largest `n` accepted. The mean circuit needs `2n + 3` qubits.
pub const MAX_N: usize = 12;

/// The `2^n` values `A(x)`, indexed little-endian (bit `j` of the index is
/// `x_j`), with unit 2-norm. Doubles as the amplitude table of an n-qubit
/// state `|psi>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AmplitudeFile", into = "AmplitudeFile")]
pub struct AmplitudeFunction {
    n: usize,
    values: Vec<Complex64>,
}

/// On-disk form: `{"n": 2, "amplitudes": [[re, im], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplitudeFile {
    pub n: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl TryFrom<AmplitudeFile> for AmplitudeFunction {
    type Error = Error;

    fn try_from(file: AmplitudeFile) -> Result<Self> {
        let values = file.amplitudes.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        AmplitudeFunction::new(file.n, values)
    }
}

impl From<AmplitudeFunction> for AmplitudeFile {
    fn from(a: AmplitudeFunction) -> Self {
        AmplitudeFile { n: a.n, amplitudes: a.values.iter().map(|z| [z.re, z.im]).collect() }
    }
}

impl AmplitudeFunction {
    pub fn new(n: usize, values: Vec<Complex64>) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::arg(format!("n = {n} outside 1..={MAX_N}")));
        }
        let expected = 1usize << n;
        if values.len() != expected {
            return Err(Error::LengthMismatch { n, expected, got: values.len() });
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::arg("amplitudes must be finite"));
        }
        let norm_sq: f64 = values.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized { norm_sq, tolerance: NORMALIZATION_TOLERANCE });
        }
        Ok(AmplitudeFunction { n, values })
    }

    /// Real-valued convenience constructor.
    pub fn from_real(n: usize, values: &[f64]) -> Result<Self> {
        Self::new(n, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Rescales arbitrary (nonzero, finite) values to unit norm.
    pub fn normalized(n: usize, mut values: Vec<Complex64>) -> Result<Self> {
        let norm = values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::arg("cannot normalize a zero or non-finite vector"));
        }
        values.iter_mut().for_each(|z| *z /= norm);
        Self::new(n, values)
    }

    /// `A(x) = 2^{-n/2}` for all x.
    pub fn uniform(n: usize) -> Result<Self> {
        let v = (0.5f64).powf(n as f64 / 2.0);
        Self::new(n, vec![Complex64::new(v, 0.0); 1usize.checked_shl(n as u32).unwrap_or(0)])
    }

    /// `A(x) = 1` at `x = idx`, 0 elsewhere.
    pub fn point(n: usize, idx: usize) -> Result<Self> {
        let len = 1usize.checked_shl(n as u32).unwrap_or(0);
        if idx >= len {
            return Err(Error::arg(format!("point index {idx} out of range for n = {n}")));
        }
        let mut values = vec![Complex64::new(0.0, 0.0); len];
        values[idx] = Complex64::new(1.0, 0.0);
        Self::new(n, values)
    }

    /// `A(x) = (-1)^x 2^{-n/2}`; the mean is exactly 0.
    pub fn alternating_sign(n: usize) -> Result<Self> {
        let v = (0.5f64).powf(n as f64 / 2.0);
        let len = 1usize.checked_shl(n as u32).unwrap_or(0);
        Self::new(
            n,
            (0..len).map(|x| Complex64::new(if x % 2 == 0 { v } else { -v }, 0.0)).collect(),
        )
    }

    /// Independent standard-normal real and imaginary parts, then normalized.
    /// Deterministic in `(n, seed)`.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::arg(format!("n = {n} outside 1..={MAX_N}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..1usize << n)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im)
            })
            .collect();
        Self::normalized(n, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at(&self, y: &ReferencePoint) -> Complex64 {
        self.values[y.index()]
    }

    /// Multiplies every value by `e^{i phi}`.
    pub fn with_global_phase(&self, phi: f64) -> Self {
        let w = Complex64::from_polar(1.0, phi);
        AmplitudeFunction { n: self.n, values: self.values.iter().map(|z| z * w).collect() }
    }
}
