//! Time evolution of the first and second moments.
//!
//! The mean obeys `dm/dt = Y m` and the (central or full symmetrized)
//! covariance obeys `ds/dt = Y s + s Y^T + 2 D`. For stable drift the
//! covariance relaxes to the stationary solution of the algebraic Lyapunov
//! equation, and the flow takes the sandwich form
//! `s(t) = M(t) (s(0) - s_inf) M(t)^T + s_inf` with `M(t) = exp(t Y)`.
//!
//! Every closed-form path here has an independent check: the stationary
//! solution can also be computed by quadrature of `2 M D M^T`, and
//! [`rk4_mean`]/[`rk4_covariance`] integrate the underlying ODEs directly.

use crate::error::DynamicsError;
use crate::linalg;
use crate::system::{DiffusionMatrix, DriftMatrix, OscillatorSystem};
use crate::{Mat6, Vec6};

/// Maximum number of RK4 steps accepted per call.
pub const MAX_RK4_STEPS: f64 = 1e8;

/// Minimum quadrature horizon in units of the slowest decay time.
const MIN_HORIZON_DECAY_TIMES: f64 = 10.0;

/// A Gaussian state: mean vector and central covariance matrix in the
/// `(q1,q2,q3,p1,p2,p3)` ordering.
///
/// The full symmetrized second moments of the underlying dynamics are
/// recovered as `cov + mean * mean^T`; both conventions obey the same flow.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    pub mean: Vec6,
    pub cov: Mat6,
}

impl GaussianState {
    /// Builds a state, requiring the covariance to be symmetric within
    /// `1e-12` relative; the stored matrix is symmetrized exactly.
    pub fn new(mean: Vec6, cov: Mat6) -> Result<Self, DynamicsError> {
        if mean.iter().any(|x| !x.is_finite()) || cov.iter().any(|x| !x.is_finite()) {
            return Err(DynamicsError::Domain(
                "state contains a nonfinite entry".into(),
            ));
        }
        let scale = cov.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
        if (cov - cov.transpose()).amax() > 1e-12 * scale {
            return Err(DynamicsError::Domain(
                "covariance matrix must be symmetric".into(),
            ));
        }
        Ok(Self {
            mean,
            cov: (cov + cov.transpose()) * 0.5,
        })
    }

    /// The state at the phase-space origin with zero spread.
    pub fn origin() -> Self {
        Self {
            mean: Vec6::zeros(),
            cov: Mat6::zeros(),
        }
    }

    /// Full symmetrized second-moment matrix, `cov + mean * mean^T`.
    pub fn full_second_moments(&self) -> Mat6 {
        self.cov + self.mean * self.mean.transpose()
    }

    /// Propagates both moments by `t` and returns the evolved state.
    pub fn evolved(
        &self,
        drift: &DriftMatrix,
        diffusion: &DiffusionMatrix,
        t: f64,
    ) -> Result<Self, DynamicsError> {
        Ok(Self {
            mean: evolve_mean(self, drift, t)?,
            cov: evolve_covariance(self, drift, diffusion, t)?,
        })
    }
}

/// The propagator `M(t) = exp(t Y)` of the first-moment flow.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagator {
    pub matrix: Mat6,
    pub t: f64,
}

/// Computes the propagator `exp(t Y)`.
pub fn matrix_exponential(y: &Mat6, t: f64) -> Result<Propagator, DynamicsError> {
    if !t.is_finite() || t < 0.0 {
        return Err(DynamicsError::Domain(format!(
            "propagation time must be finite and nonnegative, got {t}"
        )));
    }
    Ok(Propagator {
        matrix: linalg::expm(&(y * t))?,
        t,
    })
}

/// The propagator of three mutually uncoupled damped oscillators in closed
/// form: per axis `k`,
///
/// ```text
/// M_k   =  exp(-l_k t) cos(w_k t)            (both diagonal slots)
/// M_1k  =  exp(-l_k t) sin(w_k t) / (m_k w_k)   (q row, p column)
/// M_2k  = -m_k w_k exp(-l_k t) sin(w_k t)       (p row, q column)
/// ```
///
/// Valid when all rotation terms and off-diagonal friction vanish.
pub fn closed_form_propagator(
    system: &OscillatorSystem,
    lambda_diag: [f64; 3],
    t: f64,
) -> Propagator {
    let mut m = Mat6::zeros();
    for k in 0..3 {
        let envelope = (-lambda_diag[k] * t).exp();
        let (sin, cos) = (system.omega[k] * t).sin_cos();
        let mw = system.mass[k] * system.omega[k];
        m[(k, k)] = envelope * cos;
        m[(3 + k, 3 + k)] = envelope * cos;
        m[(k, 3 + k)] = envelope * sin / mw;
        m[(3 + k, k)] = -mw * envelope * sin;
    }
    Propagator { matrix: m, t }
}

/// Propagates the mean: `m(t) = exp(t Y) m(0)`.
pub fn evolve_mean(
    state: &GaussianState,
    drift: &DriftMatrix,
    t: f64,
) -> Result<Vec6, DynamicsError> {
    Ok(matrix_exponential(&drift.y, t)?.matrix * state.mean)
}

/// Propagates the central covariance:
/// `s(t) = M(t) (s(0) - s_inf) M(t)^T + s_inf`.
///
/// The stationary matrix requires stable drift. Zero diffusion is the one
/// case that needs no stationary matrix (`s(t) = M s(0) M^T` exactly), so it
/// is propagated regardless of stability; this is what keeps the undamped
/// limit usable.
pub fn evolve_covariance(
    state: &GaussianState,
    drift: &DriftMatrix,
    diffusion: &DiffusionMatrix,
    t: f64,
) -> Result<Mat6, DynamicsError> {
    if t == 0.0 {
        return Ok(state.cov);
    }
    let m = matrix_exponential(&drift.y, t)?.matrix;
    if diffusion.matrix == Mat6::zeros() {
        let s = m * state.cov * m.transpose();
        return Ok((s + s.transpose()) * 0.5);
    }
    let stationary = stationary_covariance(drift, diffusion)?;
    let s = m * (state.cov - stationary) * m.transpose() + stationary;
    Ok((s + s.transpose()) * 0.5)
}

/// Solves the algebraic Lyapunov equation `Y s + s Y^T + 2 D = 0` for the
/// stationary covariance of a stable drift.
pub fn stationary_covariance(
    drift: &DriftMatrix,
    diffusion: &DiffusionMatrix,
) -> Result<Mat6, DynamicsError> {
    if !drift.stable {
        return Err(DynamicsError::UnstableDrift {
            eigenvalues: drift.eigenvalues,
        });
    }
    linalg::solve_lyapunov(&drift.y, &diffusion.matrix)
}

/// Computes the stationary covariance by quadrature of
/// `2 int_0^horizon M(t) D M(t)^T dt`, refining the grid until two
/// successive Simpson refinements agree within `tol`.
///
/// Requires stable drift and a horizon of at least ten decay times of the
/// slowest mode, so the truncated tail is negligible against `tol`.
pub fn stationary_covariance_integral(
    drift: &DriftMatrix,
    diffusion: &DiffusionMatrix,
    horizon: f64,
    tol: f64,
) -> Result<Mat6, DynamicsError> {
    if !drift.stable {
        return Err(DynamicsError::UnstableDrift {
            eigenvalues: drift.eigenvalues,
        });
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(DynamicsError::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let min_horizon = MIN_HORIZON_DECAY_TIMES / drift.slowest_decay_rate();
    if !horizon.is_finite() || horizon < min_horizon {
        return Err(DynamicsError::Domain(format!(
            "horizon {horizon} is below {min_horizon:.6} (ten decay times of the slowest mode)"
        )));
    }

    let d = &diffusion.matrix;
    let integrand_at_zero = 2.0 * d;

    // Composite trapezoid over 2^level intervals, evaluated by sweeping the
    // semigroup: M((k+1)h) = M(kh) M(h). Each doubling only adds midpoints.
    let trapezoid = |intervals: u64| -> Result<Mat6, DynamicsError> {
        let h = horizon / intervals as f64;
        let step = linalg::expm(&(drift.y * h))?;
        let mut m = Mat6::identity();
        let mut sum = integrand_at_zero * 0.5;
        for k in 1..=intervals {
            m *= step;
            let f = 2.0 * m * d * m.transpose();
            sum += if k == intervals { f * 0.5 } else { f };
        }
        Ok(sum * h)
    };

    // Romberg refinement: double the grid, extrapolate the trapezoid column,
    // stop when the highest-order entries of successive rows agree.
    const MAX_LEVELS: usize = 16;
    const MAX_COLUMNS: usize = 6;
    let mut previous_row: Vec<Mat6> = Vec::new();
    let mut intervals: u64 = 32;
    let mut last_diff = f64::INFINITY;
    for _ in 0..MAX_LEVELS {
        let mut row = vec![trapezoid(intervals)?];
        if !previous_row.is_empty() {
            for j in 1..=previous_row.len().min(MAX_COLUMNS - 1) {
                let factor = 4f64.powi(j as i32);
                let extrapolated = (row[j - 1] * factor - previous_row[j - 1]) / (factor - 1.0);
                row.push(extrapolated);
            }
            let current = *row.last().unwrap();
            let previous = *previous_row.last().unwrap();
            last_diff = (current - previous).amax();
            if last_diff < tol {
                return Ok((current + current.transpose()) * 0.5);
            }
        }
        previous_row = row;
        intervals *= 2;
    }
    Err(DynamicsError::NonConvergent {
        achieved: last_diff,
        requested: tol,
    })
}

fn rk4_step_count(t: f64, dt: f64) -> Result<u64, DynamicsError> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(DynamicsError::Domain(format!(
            "step size must be positive, got {dt}"
        )));
    }
    if !t.is_finite() || t < 0.0 {
        return Err(DynamicsError::Domain(format!(
            "integration time must be finite and nonnegative, got {t}"
        )));
    }
    let steps = (t / dt).round();
    if steps > MAX_RK4_STEPS {
        return Err(DynamicsError::Range(format!(
            "t/dt = {:e} exceeds the step budget of {MAX_RK4_STEPS:e}",
            t / dt
        )));
    }
    Ok(steps.max(1.0) as u64)
}

/// Fixed-step classical Runge-Kutta integration of `dm/dt = Y m`.
///
/// Independent of the matrix-exponential path; used as an oracle.
pub fn rk4_mean(
    state: &GaussianState,
    drift: &DriftMatrix,
    t: f64,
    dt: f64,
) -> Result<Vec6, DynamicsError> {
    if t == 0.0 {
        return Ok(state.mean);
    }
    let steps = rk4_step_count(t, dt)?;
    let h = t / steps as f64;
    let y = &drift.y;
    let mut m = state.mean;
    for _ in 0..steps {
        let k1 = y * m;
        let k2 = y * (m + k1 * (h / 2.0));
        let k3 = y * (m + k2 * (h / 2.0));
        let k4 = y * (m + k3 * h);
        m += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
    Ok(m)
}

/// Fixed-step classical Runge-Kutta integration of
/// `ds/dt = Y s + s Y^T + 2 D`.
pub fn rk4_covariance(
    state: &GaussianState,
    drift: &DriftMatrix,
    diffusion: &DiffusionMatrix,
    t: f64,
    dt: f64,
) -> Result<Mat6, DynamicsError> {
    if t == 0.0 {
        return Ok(state.cov);
    }
    let steps = rk4_step_count(t, dt)?;
    let h = t / steps as f64;
    let y = &drift.y;
    let rhs = |s: &Mat6| y * s + s * y.transpose() + 2.0 * diffusion.matrix;
    let mut s = state.cov;
    for _ in 0..steps {
        let k1 = rhs(&s);
        let k2 = rhs(&(s + k1 * (h / 2.0)));
        let k3 = rhs(&(s + k2 * (h / 2.0)));
        let k4 = rhs(&(s + k3 * h));
        s += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
    Ok((s + s.transpose()) * 0.5)
}
