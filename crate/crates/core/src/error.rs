//! Error types shared across the crate.

/// Errors reported by the solver, the analytic oracle, and configuration
/// validation.
///
/// Contract violations (out-of-range node indices, mismatched field shapes)
/// panic instead: they indicate a bug in the caller, not a recoverable
/// condition.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Configuration invariants were violated; every violation is listed.
    #[error("invalid configuration: {}", .0.join("; "))]
    InvalidConfig(Vec<String>),

    /// A stepper received a field containing non-finite values.
    #[error("non-finite input field at time level {level}")]
    BlownUpInput { level: usize },

    /// The analytic solution needs a strictly positive loading speed (its
    /// construction divides by the cube root of 9·β·v_σ²).
    #[error("degenerate loading: the analytic solution requires v_sigma > 0")]
    DegenerateLoading,

    /// Incomplete gamma domain: `a > 0` and `x >= 0` are required.
    #[error("incomplete gamma domain error: require a > 0 and x >= 0, got a={a}, x={x}")]
    GammaDomain { a: f64, x: f64 },

    /// The analytic solution is singular at `l = 0` (it carries a 1/l²).
    #[error("the analytic solution is singular at l = 0")]
    SingularPoint,
}
