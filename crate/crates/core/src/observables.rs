//! Angular-momentum observables of the damped three-oscillator system.
//!
//! The projection onto the third axis is read off the full symmetrized
//! second moments as `<L3> = s_q1p2 - s_q2p1`; for identical, uncoupled axes
//! it decays as `exp(-2 lambda t)`. The squared angular momentum `<L2>` is
//! assembled from per-axis second moments and relaxes to
//! `6 (s_pp s_qq - s_pq^2) - 3 hbar^2 / 2`.

use crate::error::DynamicsError;
use crate::propagator::GaussianState;
use crate::system::{DiffusionMatrix, DriftMatrix, OscillatorSystem};
use crate::{stationary_covariance, Mat6};

/// Expectation of the angular-momentum projection `<L3>`.
///
/// Uses the full symmetrized moments, i.e. central covariance plus the
/// product of means.
pub fn l3_expectation(state: &GaussianState) -> f64 {
    let full = state.full_second_moments();
    full[(0, 4)] - full[(1, 3)]
}

/// Decay law of `<L3>` for three identical uncoupled axes:
/// `<L3(t)> = <L3(0)> exp(-2 lambda t)`.
pub fn l3_decay(initial_l3: f64, lambda: f64, t: f64) -> f64 {
    initial_l3 * (-2.0 * lambda * t).exp()
}

/// Which off-axis moment a closed-form evaluation targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossMoment {
    /// `s_q1p2`
    Q1P2,
    /// `s_q2p1`
    Q2P1,
}

/// The four full second moments entering the closed-form cross-covariance
/// flow between axes 1 and 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossMoments {
    pub q1p2: f64,
    pub q2p1: f64,
    pub q1q2: f64,
    pub p1p2: f64,
}

impl CrossMoments {
    /// Reads the four moments out of a full 6x6 second-moment matrix.
    pub fn from_matrix(sigma: &Mat6) -> Self {
        Self {
            q1p2: sigma[(0, 4)],
            q2p1: sigma[(1, 3)],
            q1q2: sigma[(0, 1)],
            p1p2: sigma[(3, 4)],
        }
    }
}

/// Closed-form time dependence of `s_q1p2(t)` / `s_q2p1(t)` in the uncoupled
/// case: an `exp[-(l11 + l22) t]` envelope times a trigonometric mix of the
/// four initial offsets from their stationary values.
pub fn cross_covariance_closed_form(
    which: CrossMoment,
    initial: &CrossMoments,
    stationary: &CrossMoments,
    system: &OscillatorSystem,
    lambda11: f64,
    lambda22: f64,
    t: f64,
) -> f64 {
    let envelope = (-(lambda11 + lambda22) * t).exp();
    let (s1, c1) = (system.omega[0] * t).sin_cos();
    let (s2, c2) = (system.omega[1] * t).sin_cos();
    let mw1 = system.mass[0] * system.omega[0];
    let mw2 = system.mass[1] * system.omega[1];
    let dq1p2 = initial.q1p2 - stationary.q1p2;
    let dq2p1 = initial.q2p1 - stationary.q2p1;
    let dq1q2 = initial.q1q2 - stationary.q1q2;
    let dp1p2 = initial.p1p2 - stationary.p1p2;
    match which {
        CrossMoment::Q1P2 => {
            envelope
                * (dq1p2 * c1 * c2 + dp1p2 * s1 * c2 / mw1
                    - mw2 * dq1q2 * c1 * s2
                    - (mw2 / mw1) * dq2p1 * s1 * s2)
                + stationary.q1p2
        }
        CrossMoment::Q2P1 => {
            envelope
                * (dq2p1 * c1 * c2 - mw1 * dq1q2 * s1 * c2 + dp1p2 * c1 * s2 / mw2
                    - (mw1 / mw2) * dq1p2 * s1 * s2)
                + stationary.q2p1
        }
    }
}

/// Residual of the stationary cross-moment equality
/// `s_q1p2(inf) = s_q2p1(inf)`, as an absolute difference.
pub fn stationary_equality_check(
    drift: &DriftMatrix,
    diffusion: &DiffusionMatrix,
) -> Result<f64, DynamicsError> {
    let stationary = stationary_covariance(drift, diffusion)?;
    Ok((stationary[(0, 4)] - stationary[(1, 3)]).abs())
}

/// Expectation of the squared angular momentum for three independent axes.
///
/// Evaluated verbatim from the per-axis moments
/// `<p_k^2> = c_pp + m_p^2`, `<q_k^2> = c_qq + m_q^2`,
/// `u_k = <pq+qp>_k / 2 = c_pq + m_p m_q`:
///
/// ```text
/// <L2> = sum_{k != l} <p_k^2><q_l^2> - 2 sum_{cyclic} u_k u_l - 3 hbar^2 / 2.
/// ```
///
/// The formula presumes vanishing
/// cross-axis correlations; it is evaluated as printed regardless, so
/// non-physical inputs (all moments zero) yield `-3 hbar^2 / 2`.
pub fn l2_expectation(state: &GaussianState, hbar: f64) -> f64 {
    let mut q2 = [0.0; 3];
    let mut p2 = [0.0; 3];
    let mut pq = [0.0; 3];
    for k in 0..3 {
        q2[k] = state.cov[(k, k)] + state.mean[k].powi(2);
        p2[k] = state.cov[(3 + k, 3 + k)] + state.mean[3 + k].powi(2);
        pq[k] = state.cov[(k, 3 + k)] + state.mean[k] * state.mean[3 + k];
    }
    let mut value = -1.5 * hbar * hbar;
    #[allow(clippy::needless_range_loop)] // index pairs mirror the formula
    for k in 0..3 {
        for l in 0..3 {
            if k != l {
                value += p2[k] * q2[l];
            }
        }
        // -(1/2) <pq+qp>_k <pq+qp>_l per cyclic pair, with <pq+qp> = 2 u.
        value -= 2.0 * pq[k] * pq[(k + 1) % 3];
    }
    value
}

/// Stationary variances of one damped axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleAxisStationary {
    pub sqq: f64,
    pub spp: f64,
    pub spq: f64,
}

/// Closed-form stationary variances of a single damped oscillator:
///
/// ```text
/// sqq = [ (m w)^2 (2 l^2 + w^2) Dqq + w^2 Dpp + 2 m w^2 l Dpq ] / [2 (m w)^2 l (l^2 + w^2)]
/// spp = [ (m w)^2 w^2 Dqq + (2 l^2 + w^2) Dpp - 2 m w^2 l Dpq ] / [2 l (l^2 + w^2)]
/// spq = [ -l (m w)^2 Dqq + l Dpp + 2 m l^2 Dpq ]               / [2 m l (l^2 + w^2)]
/// ```
pub fn stationary_single_axis(
    mass: f64,
    omega: f64,
    lambda: f64,
    dqq: f64,
    dpp: f64,
    dpq: f64,
) -> Result<SingleAxisStationary, DynamicsError> {
    if !(mass.is_finite() && mass > 0.0) || !(omega.is_finite() && omega > 0.0) {
        return Err(DynamicsError::Domain(format!(
            "mass and frequency must be positive, got m = {mass}, omega = {omega}"
        )));
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(DynamicsError::Domain(format!(
            "stationary variances need positive friction, got lambda = {lambda}"
        )));
    }
    let mw2 = (mass * omega).powi(2);
    let rates = lambda * lambda + omega * omega;
    Ok(SingleAxisStationary {
        sqq: (mw2 * (2.0 * lambda * lambda + omega * omega) * dqq
            + omega * omega * dpp
            + 2.0 * mass * omega * omega * lambda * dpq)
            / (2.0 * mw2 * lambda * rates),
        spp: (mw2 * omega * omega * dqq + (2.0 * lambda * lambda + omega * omega) * dpp
            - 2.0 * mass * omega * omega * lambda * dpq)
            / (2.0 * lambda * rates),
        spq: (-lambda * mw2 * dqq + lambda * dpp + 2.0 * mass * lambda * lambda * dpq)
            / (2.0 * mass * lambda * rates),
    })
}

/// Asymptotic squared angular momentum of three identical damped axes:
/// `<L2(inf)> = 6 (spp sqq - spq^2) - 3 hbar^2 / 2`.
pub fn l2_asymptotic(stationary: &SingleAxisStationary, hbar: f64) -> f64 {
    6.0 * (stationary.spp * stationary.sqq - stationary.spq * stationary.spq)
        - 1.5 * hbar * hbar
}
