use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An index, size or other argument violates an operation's precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("amplitude vector has length {got}, expected 2^{n} = {expected}")]
    LengthMismatch { n: usize, expected: usize, got: usize },

    #[error("amplitudes are not normalized: sum of |A(x)|^2 = {norm_sq} (tolerance {tolerance})")]
    NotNormalized { norm_sq: f64, tolerance: f64 },

    #[error("gate matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    /// The target subspace carries no probability, nothing to amplify.
    #[error("degenerate target: target probability {0} must lie in (0, 1]")]
    DegenerateTarget(f64),

    /// No null events (omega = 0, gamma = 0): A(y) is far smaller than the
    /// mean, so another reference point is needed.
    #[error("null starvation: {0}; A(y) is not of comparable size to the mean")]
    NullStarvation(Starvation),

    #[error("reference amplitude A({y}) is zero; try y = {suggestion}")]
    ZeroReference { y: String, suggestion: String },
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Input-validation failures, as opposed to estimation failures that
    /// depend on the amplitude function itself.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument(_)
                | Error::LengthMismatch { .. }
                | Error::NotNormalized { .. }
                | Error::NotUnitary { .. }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Starvation {
    /// Sampling produced no null events.
    Sampled { n1: u64, shots: u64 },
    /// The exact null probability underflows.
    Exact { p_null: f64 },
}

impl std::fmt::Display for Starvation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Starvation::Sampled { n1, shots } => {
                write!(f, "no null events in {shots} shots ({n1} non-null)")
            }
            Starvation::Exact { p_null } => write!(f, "null-event probability {p_null:e}"),
        }
    }
}
