//! Damped Gaussian dynamics of three harmonic oscillators.
//!
//! Three uncoupled oscillators open to an environment through operators
//! linear in the coordinates and momenta stay Gaussian forever, so their
//! dynamics reduces to a linear flow of the mean vector and covariance
//! matrix. This crate builds the phenomenological coefficient matrices from
//! the environment coupling, assembles the 6x6 drift and diffusion matrices,
//! propagates the moments in closed form (with independent Runge-Kutta and
//! quadrature oracles), and evaluates the angular-momentum observables
//! `<L3>` and `<L2>` together with their damping laws.
//!
//! The phase-space ordering is `(q1, q2, q3, p1, p2, p3)` throughout.
//!
//! ```
//! use lindosc::{
//!     assemble_diffusion, build_drift_matrix, l3_decay, l3_expectation,
//!     GaussianState, Mat6, OpeningCoefficients, OscillatorSystem, Vec6,
//! };
//!
//! // Identical axes, unit friction, balanced diffusion.
//! let system = OscillatorSystem::isotropic(1.0, 1.0, 1.0)?;
//! let coeff = OpeningCoefficients::diagonal([1.0; 3], [0.5; 3], [0.5; 3], [0.0; 3]);
//! let drift = build_drift_matrix(&system, &coeff)?;
//! let diffusion = assemble_diffusion(&coeff);
//!
//! let mut cov = Mat6::identity();
//! cov[(0, 4)] = 0.3;
//! cov[(4, 0)] = 0.3;
//! let state = GaussianState::new(Vec6::zeros(), cov)?;
//!
//! let evolved = state.evolved(&drift, &diffusion, 1.0)?;
//! let expected = l3_decay(l3_expectation(&state), 1.0, 1.0);
//! assert!((l3_expectation(&evolved) - expected).abs() < 1e-12);
//! # Ok::<(), lindosc::DynamicsError>(())
//! ```

pub mod error;
mod linalg;
pub mod observables;
pub mod propagator;
pub mod system;

/// 3x3 real matrix.
pub type Mat3 = nalgebra::Matrix3<f64>;
/// 6x6 real matrix in the `(q1,q2,q3,p1,p2,p3)` ordering.
pub type Mat6 = nalgebra::Matrix6<f64>;
/// 6-component real vector in the `(q1,q2,q3,p1,p2,p3)` ordering.
pub type Vec6 = nalgebra::Vector6<f64>;

pub use error::DynamicsError;
pub use observables::{
    cross_covariance_closed_form, l2_asymptotic, l2_expectation, l3_decay, l3_expectation,
    stationary_equality_check, stationary_single_axis, CrossMoment, CrossMoments,
    SingleAxisStationary,
};
pub use propagator::{
    closed_form_propagator, evolve_covariance, evolve_mean, matrix_exponential, rk4_covariance,
    rk4_mean, stationary_covariance, stationary_covariance_integral, GaussianState, Propagator,
};
pub use system::{
    assemble_diffusion, build_coefficients, build_drift_matrix, DiffusionMatrix, DriftMatrix,
    LindbladVectors, OpeningCoefficients, OscillatorSystem, StabilityClass,
};
