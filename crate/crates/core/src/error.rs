use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("x = {x} lies outside the potential domain ({alpha}, {beta})")]
    Domain { x: f64, alpha: f64, beta: f64 },

    #[error("radius r = {0} outside [0, 1)")]
    InvalidRadius(f64),

    #[error("root finder did not converge after {iterations} iterations (t = {t}, r = {r})")]
    NoConvergence { t: f64, r: f64, iterations: usize },

    #[error("Bessel argument |x| = {0} exceeds the series range 30")]
    BesselRange(f64),

    #[error("Bessel order {0} not supported (0, 1 or 2)")]
    BesselOrder(u32),

    #[error("invalid Urabe function: {0}")]
    InvalidUrabe(String),

    #[error("Urabe construction not integrable: 1 + S(X) vanishes at X = {0} before the boundary")]
    NonIntegrable(f64),

    #[error("invalid quadrature rule: {0}")]
    InvalidRule(String),

    #[error("sampled forcing needs at least 16 samples, got {0}")]
    TooFewSamples(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown {kind} `{name}` (known: {known})")]
    UnknownName {
        kind: &'static str,
        name: String,
        known: String,
    },

    #[error("integrator step size underflow at t = {0}")]
    StepUnderflow(f64),

    #[error("trajectory reached the singularity at t = {t} (x = {x})")]
    SingularityApproach { t: f64, x: f64 },

    #[error("trajectory left the domain through its right end at t = {t} (x = {x})")]
    DomainExit { t: f64, x: f64 },

    #[error("invalid configuration: {}", .0.join("; "))]
    Config(Vec<String>),

    #[error("{0}")]
    Usage(String),

    #[error("I/O error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
