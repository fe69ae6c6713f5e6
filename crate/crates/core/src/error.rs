use thiserror::Error;

/// Errors raised by the analyzers, constructors and solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition does not hold at the given input.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The induced metric (or a map differential) is degenerate.
    #[error("degenerate metric: {0}")]
    Degenerate(String),

    /// An iterative solver did not reach its tolerance.
    #[error("no convergence after {iterations} iterations: {detail}")]
    Convergence { iterations: usize, detail: String },

    /// A discrete eigenvalue falls inside the safety band below 1.
    #[error("eigenvalue {eigenvalue} lies in the ambiguity band ({lo}, {hi}); refine the grid")]
    Ambiguity { eigenvalue: f64, lo: f64, hi: f64 },

    /// An ODE integration blew up.
    #[error("integration diverged at t = {t}: |v| = {value}")]
    Divergence { t: f64, value: f64 },

    /// Unknown catalog identifier or malformed user input.
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
