//! Error types shared across the library.
//!
//! Every failure mode maps to one process exit code at the CLI boundary:
//! usage errors exit 2, resource-budget errors exit 3, solver failures
//! exit 4, and a report containing failed checks exits 1.

use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// The estimated amount of work exceeds the configured term budget.
    #[error("term budget exceeded: {estimate} terms needed, budget is {budget}")]
    Budget { estimate: u128, budget: u128 },

    /// A dilogarithm argument landed on the cut [1, oo).
    #[error("dilogarithm argument on the cut [1, oo): {term} = {value}")]
    CutArgument { term: String, value: String },

    /// An input value was outside an operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The least-squares design matrix is (numerically) rank deficient.
    #[error("degenerate design matrix: {0}; provide more or better-spread N values")]
    DegenerateFit(String),

    /// No admissible critical point was found within the start budget.
    #[error("critical solver failed: no admissible solution in {starts} starts (best residual {best_residual:.3e})")]
    SolverFailure { starts: usize, best_residual: f64 },

    /// Bad command-line usage, config file, or flag value.
    #[error("usage error: {0}")]
    Usage(String),

    /// Filesystem trouble while reading a config or writing a report.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for this error at the CLI boundary.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Budget { .. } => 3,
            Error::SolverFailure { .. } => 4,
            Error::Usage(_) | Error::Io { .. } => 2,
            Error::CutArgument { .. } | Error::Domain(_) | Error::DegenerateFit(_) => 2,
        }
    }
}
