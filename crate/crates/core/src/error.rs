//! Crate-wide error type.

use thiserror::Error;

use crate::experiment::config::ConfigError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |A - A^H| = {0:e})")]
    NotHermitian(f64),

    #[error("matrix has eigenvalue {0:e} below the PSD tolerance")]
    NegativeSpectrum(f64),

    #[error("states have zero overlap, relative phase is undefined")]
    ZeroOverlap,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("flux {0} outside [0, 0.5]")]
    FluxOutOfRange(f64),

    #[error("difference function does not change sign on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("inconsistent tuning: {0}")]
    InconsistentTuning(String),

    #[error("site {site} out of range for {n} qubits")]
    SiteOutOfRange { site: usize, n: usize },

    #[error("qubit {qubit} is not at the charge degeneracy point (offset charge {offset})")]
    NotAtDegeneracy { qubit: usize, offset: f64 },

    #[error("coupling between sites {0} and {1} is not nearest-neighbour")]
    NotNearestNeighbor(usize, usize),

    #[error("operator difference is not proportional to the identity (residual {0:e})")]
    NotProportionalToIdentity(f64),

    #[error("constant shift {found} differs from expected {expected}")]
    UnexpectedShift { expected: f64, found: f64 },

    #[error("unphysical decoherence rates: pure dephasing rate {0} < 0")]
    UnphysicalRates(f64),

    #[error("step too large: eigenvalue {eigenvalue:e} at t = {time}")]
    StepTooLarge { time: f64, eigenvalue: f64 },

    #[error("series has no interior local maximum")]
    NoPeaks,

    #[error("target {target} unreachable: achievable range on the bracket is [{low}, {high}]")]
    TargetUnreachable { target: f64, low: f64, high: f64 },

    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidParameter(_) => 1,
            Error::Io(_) => 3,
            _ => 2,
        }
    }
}
