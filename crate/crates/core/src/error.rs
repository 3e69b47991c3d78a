use thiserror::Error;

/// Broad class of a failure, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    /// Malformed or out-of-domain input.
    Config,
    /// Parameters outside the physical validity of the method.
    Physics,
    /// An iterative or numerical procedure did not meet its tolerance.
    Numerical,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("spin-wave spectrum is not real: h(h + J P(k)) = {value:e} < 0 at k = {k}")]
    StabilityViolation { k: f64, value: f64 },

    #[error("group velocity diverges for alpha = {alpha} < 2 (quasi-local regime)")]
    DivergentVelocity { alpha: f64 },

    #[error("operation requires 1 < alpha < 2, got alpha = {alpha}")]
    RegimeViolation { alpha: f64 },

    #[error("small-k regression is ill-conditioned: relative residual {residual:e}")]
    RegressionIllConditioned { residual: f64 },

    #[error("no stationary point: R/t = {ratio} exceeds 2 max V_g = {limit}")]
    NoStationaryPoint { ratio: f64, limit: f64 },

    #[error("cut R = {r} outside [1, {max}]")]
    CutOutOfRange { r: usize, max: usize },

    #[error("special function argument outside its domain: {0}")]
    DomainError(String),

    #[error("edge has only {found} threshold crossings (need at least {needed})")]
    EmptyEdge { found: usize, needed: usize },

    #[error("fit needs at least {needed} points inside the window, got {found}")]
    InsufficientPoints { found: usize, needed: usize },

    #[error("no extrema ridge survived the length cut")]
    NoRidges,

    #[error("exact diagonalization limited to N <= {max}, got N = {n}")]
    SizeLimit { n: usize, max: usize },

    #[error("{method} did not converge after {iterations} iterations (residual {residual:e})")]
    ConvergenceFailure { method: &'static str, iterations: usize, residual: f64 },

    #[error("lowering operator annihilates the state (norm {norm:e})")]
    AnnihilatedState { norm: f64 },

    #[error("malformed field: {0}")]
    InvalidField(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "InvalidParameter",
            Error::StabilityViolation { .. } => "StabilityViolation",
            Error::DivergentVelocity { .. } => "DivergentVelocity",
            Error::RegimeViolation { .. } => "RegimeViolation",
            Error::RegressionIllConditioned { .. } => "RegressionIllConditioned",
            Error::NoStationaryPoint { .. } => "NoStationaryPoint",
            Error::CutOutOfRange { .. } => "CutOutOfRange",
            Error::DomainError(_) => "DomainError",
            Error::EmptyEdge { .. } => "EmptyEdge",
            Error::InsufficientPoints { .. } => "InsufficientPoints",
            Error::NoRidges => "NoRidges",
            Error::SizeLimit { .. } => "SizeLimit",
            Error::ConvergenceFailure { .. } => "ConvergenceFailure",
            Error::AnnihilatedState { .. } => "AnnihilatedState",
            Error::InvalidField(_) => "InvalidField",
        }
    }

    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::InvalidParameter { .. }
            | Error::CutOutOfRange { .. }
            | Error::DomainError(_)
            | Error::SizeLimit { .. }
            | Error::InvalidField(_) => ErrorCategory::Config,
            Error::StabilityViolation { .. }
            | Error::DivergentVelocity { .. }
            | Error::RegimeViolation { .. }
            | Error::NoStationaryPoint { .. }
            | Error::AnnihilatedState { .. } => ErrorCategory::Physics,
            Error::RegressionIllConditioned { .. }
            | Error::EmptyEdge { .. }
            | Error::InsufficientPoints { .. }
            | Error::NoRidges
            | Error::ConvergenceFailure { .. } => ErrorCategory::Numerical,
        }
    }

    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
