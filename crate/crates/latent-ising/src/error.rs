//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An enumeration was requested for a model larger than the brute-force
    /// bound permits.
    #[error("capacity exceeded: {what} needs {needed} variables, bound is {bound}")]
    Capacity {
        what: &'static str,
        needed: usize,
        bound: usize,
    },

    /// A caller-supplied parameter was out of range or inconsistent.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A configuration with zero mass was encountered where positive mass is
    /// required (e.g. taking the log-mass Fourier transform).
    #[error("configuration {config:#x} has zero probability mass")]
    ZeroMass { config: usize },

    /// The greedy learner found no candidate with a defined influence
    /// estimate in some round.
    #[error("greedy round {round} for node {node}: no candidate has a defined influence estimate")]
    GreedyExhausted { node: usize, round: usize },

    /// The subset search found no neighborhood candidate passing the gap
    /// test; either the nondegeneracy assumptions fail or M is too small.
    #[error("subset search for node {node}: no subset of size <= {d2} passed the influence-gap test")]
    SearchFailed { node: usize, d2: usize },

    /// A regression split was too small to fit.
    #[error("insufficient data: {split} split has {rows} rows, need at least {min}")]
    InsufficientData {
        split: &'static str,
        rows: usize,
        min: usize,
    },

    /// A building-block target was outside the feasible coefficient range.
    #[error("building-block target {target} outside feasible range [{lo}, {hi}]")]
    InfeasibleTarget { target: f64, lo: f64, hi: f64 },

    /// A model/sample/structure file did not parse.
    #[error("format error at line {line}: {message}")]
    Format { line: usize, message: String },

    /// The operation requires an assumption (ferromagneticity,
    /// nondegeneracy) the input violates.
    #[error("assumption violated: {0}")]
    Assumption(String),

    /// The polynomial root finder did not converge.
    #[error("root finder failed to converge after {iters} iterations (residual {residual:.3e})")]
    RootFinding { iters: usize, residual: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 1 usage, 2 assumption violation,
    /// 3 capacity.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Capacity { .. } => 3,
            Error::Assumption(_) => 2,
            _ => 1,
        }
    }
}
