//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors surfaced by grid construction, assembly, eigensolves, and the
/// nonlinear solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// Interval endpoints do not satisfy `b > a`.
    #[error("invalid domain: require b > a, got a = {a}, b = {b}")]
    InvalidDomain { a: f64, b: f64 },

    /// Fewer interior nodes than the minimum the discretization supports.
    #[error("too few nodes: require n >= 3, got n = {n}")]
    TooFewNodes { n: usize },

    /// A scalar parameter violates its admissible range.
    /// `requirement` states the violated condition, `value` echoes the input.
    #[error("parameter out of range: {requirement}, got {name} = {value}")]
    ParamOutOfRange {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },

    /// Vector length does not match the grid it is paired with.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A nodal value is NaN or infinite.
    #[error("non-finite value at node {index}")]
    NonFinite { index: usize },

    /// Adaptive panel refinement hit its depth cap without meeting the
    /// disagreement tolerance.
    #[error("quadrature refinement exceeded depth {depth} (panel [{lo}, {hi}])")]
    QuadratureDepth { depth: usize, lo: f64, hi: f64 },

    /// A dense factorization failed (matrix not positive definite).
    #[error("factorization failed: {context}")]
    Factorization { context: &'static str },

    /// An iterative routine hit its iteration cap.
    #[error("{what} did not converge within {cap} iterations (residual {residual:.3e})")]
    NoConvergence {
        what: &'static str,
        cap: usize,
        residual: f64,
    },

    /// The fixed-point iteration for the sublinear problem left the positive
    /// cone; signals a discretization failure, not a solver bug.
    #[error("positivity lost at iteration {iteration}")]
    PositivityLost { iteration: usize },

    /// The descent for the logarithmic problem collapsed to the zero
    /// function, which contradicts the nontriviality of its minimizer.
    #[error("solver converged to the zero function; bad initialization or step control")]
    ConvergedToZero,

    /// A sweep schedule violates a structural requirement (length, ordering,
    /// range, or regime coupling).
    #[error("invalid schedule: {reason}")]
    Schedule { reason: &'static str },

    /// I/O failure while exporting CSV/JSON artifacts.
    #[error("export failed: {0}")]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short stable identifier used in run manifests.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidDomain { .. } => "invalid_domain",
            Error::TooFewNodes { .. } => "too_few_nodes",
            Error::ParamOutOfRange { .. } => "param_out_of_range",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NonFinite { .. } => "non_finite",
            Error::QuadratureDepth { .. } => "quadrature_depth",
            Error::Factorization { .. } => "factorization",
            Error::NoConvergence { .. } => "no_convergence",
            Error::PositivityLost { .. } => "positivity_lost",
            Error::ConvergedToZero => "converged_to_zero",
            Error::Schedule { .. } => "schedule",
            Error::Io(_) => "io",
        }
    }
}
