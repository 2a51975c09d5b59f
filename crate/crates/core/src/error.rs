use thiserror::Error;

/// Errors raised by spectrum generation, root finding and the experiments.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("spectrum is empty below e_max = {e_max}")]
    EmptySpectrum { e_max: f64 },

    #[error("scatterer ({x}, {y}) is not strictly inside the domain")]
    ScattererOnBoundary { x: f64, y: f64 },

    #[error("energy {energy} exceeds the spectrum cutoff {e_max}")]
    OutOfRange { energy: f64, e_max: f64 },

    #[error("coupling angle {theta} is singular (|1 - cos theta| < 1e-12)")]
    SingularCoupling { theta: f64 },

    #[error("lambda = {lambda} is within pole distance of level {index} (E = {energy})")]
    PoleProximity {
        lambda: f64,
        index: usize,
        energy: f64,
    },

    #[error("no sign change of the secular function on gap {gap_index} ({lo}, {hi}): f(lo) = {f_lo}, f(hi) = {f_hi}")]
    BracketFailure {
        gap_index: usize,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("interval [{lo}, {hi}] contains no spectral level")]
    EmptyInterval { lo: f64, hi: f64 },

    #[error("no quasi-eigenvalue exists: {0}")]
    NoRoot(String),

    #[error("zeta with fractional exponent {s} is undefined for level {index} below lambda")]
    Domain { s: f64, index: usize },

    #[error(
        "series cutoff {e_cutoff} is too small for interval upper end {hi} (need >= {required})"
    )]
    CutoffTooSmall {
        e_cutoff: f64,
        hi: f64,
        required: f64,
    },

    #[error("mu = {mu} does not solve the quasi-eigenvalue equation (step {step})")]
    NotARoot { mu: f64, step: f64 },

    #[error("quasimodes are built on different intervals or sigma values")]
    IntervalMismatch,

    #[error("objects were built on different spectra")]
    SpectrumMismatch,

    #[error("eigenpairs do not cover the window [{lo}, {hi}]")]
    InsufficientCoverage { lo: f64, hi: f64 },

    #[error("no satisfied gap quadruple for eps = {eps}")]
    NoQuadruple { eps: f64 },

    #[error("grid resolution {resolution} is below the minimum of 8")]
    GridResolution { resolution: usize },

    #[error("grid extent {extent} does not cover point ({px}, {py}) with margin {radius}")]
    Coverage {
        extent: f64,
        px: f64,
        py: f64,
        radius: f64,
    },

    #[error("resource budget exceeded: {0}")]
    Resource(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    /// True for failures of the numerics (pole, bracket and root errors), as
    /// opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::PoleProximity { .. }
                | Error::BracketFailure { .. }
                | Error::NoRoot(_)
                | Error::NotARoot { .. }
                | Error::Domain { .. }
                | Error::SingularCoupling { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
