//! Error type shared by all operations in this crate.

use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by construction and evolution operations.
#[derive(Debug, Clone, Error)]
pub enum DynamicsError {
    /// An input had the wrong length or layout.
    #[error("shape error: {0}")]
    Shape(String),

    /// An input value is outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The drift matrix has an eigenvalue with nonnegative real part, so the
    /// stationary covariance does not exist.
    #[error("unstable drift: eigenvalues {}", format_eigenvalues(.eigenvalues))]
    UnstableDrift { eigenvalues: [Complex64; 6] },

    /// The Lyapunov linear system degenerated (marginal eigenvalues).
    #[error("singular Lyapunov system")]
    SingularSystem,

    /// Quadrature refinement stalled before reaching the requested tolerance.
    #[error("quadrature did not converge: reached {achieved:e}, requested {requested:e}")]
    NonConvergent { achieved: f64, requested: f64 },

    /// A numeric range was exceeded (overflow in the matrix exponential or an
    /// excessive integration step count).
    #[error("range error: {0}")]
    Range(String),
}

fn format_eigenvalues(eigenvalues: &[Complex64; 6]) -> String {
    eigenvalues
        .iter()
        .map(|z| format!("{}{:+}i", z.re, z.im))
        .collect::<Vec<_>>()
        .join(", ")
}
