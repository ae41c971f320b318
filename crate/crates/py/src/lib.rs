//! Python bindings for the damped three-oscillator moment dynamics.
//!
//! Exposes the domain types as frozen classes and the operations as plain
//! functions. Vectors and matrices cross the boundary as (nested) lists of
//! floats in the `(q1,q2,q3,p1,p2,p3)` ordering; opening-operator vectors
//! are lists of Python complex numbers.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use lindosc::{DynamicsError, Mat3, Mat6, Vec6};

fn to_py_err(err: DynamicsError) -> PyErr {
    match err {
        DynamicsError::Domain(_) | DynamicsError::Shape(_) => {
            PyValueError::new_err(err.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn mat3_from_rows(name: &str, rows: &[Vec<f64>]) -> PyResult<Mat3> {
    if rows.len() != 3 || rows.iter().any(|r| r.len() != 3) {
        return Err(PyValueError::new_err(format!(
            "{name} must be a 3x3 nested list"
        )));
    }
    Ok(Mat3::from_fn(|i, j| rows[i][j]))
}

fn mat3_to_rows(m: &Mat3) -> Vec<Vec<f64>> {
    (0..3).map(|i| (0..3).map(|j| m[(i, j)]).collect()).collect()
}

fn mat6_from_rows(name: &str, rows: &[Vec<f64>]) -> PyResult<Mat6> {
    if rows.len() != 6 || rows.iter().any(|r| r.len() != 6) {
        return Err(PyValueError::new_err(format!(
            "{name} must be a 6x6 nested list"
        )));
    }
    Ok(Mat6::from_fn(|i, j| rows[i][j]))
}

fn mat6_to_rows(m: &Mat6) -> Vec<Vec<f64>> {
    (0..6).map(|i| (0..6).map(|j| m[(i, j)]).collect()).collect()
}

// ============================================================================
// Domain types
// ============================================================================

/// Masses, angular frequencies and hbar of the three oscillators.
#[pyclass(frozen)]
struct OscillatorSystem {
    inner: lindosc::OscillatorSystem,
}

#[pymethods]
impl OscillatorSystem {
    #[new]
    #[pyo3(signature = (mass, omega, hbar = 1.0))]
    fn new(mass: [f64; 3], omega: [f64; 3], hbar: f64) -> PyResult<Self> {
        Ok(Self {
            inner: lindosc::OscillatorSystem::new(mass, omega, hbar).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn mass(&self) -> [f64; 3] {
        self.inner.mass
    }

    #[getter]
    fn omega(&self) -> [f64; 3] {
        self.inner.omega
    }

    #[getter]
    fn hbar(&self) -> f64 {
        self.inner.hbar
    }

    fn __repr__(&self) -> String {
        format!(
            "OscillatorSystem(mass={:?}, omega={:?}, hbar={})",
            self.inner.mass, self.inner.omega, self.inner.hbar
        )
    }
}

/// The six complex coefficient vectors of the opening operators.
///
/// `a` and `b` are lists of three length-6 lists of complex numbers.
#[pyclass(frozen)]
struct LindbladVectors {
    inner: lindosc::LindbladVectors,
}

#[pymethods]
impl LindbladVectors {
    #[new]
    fn new(a: Vec<Vec<Complex64>>, b: Vec<Vec<Complex64>>) -> PyResult<Self> {
        Ok(Self {
            inner: lindosc::LindbladVectors::from_slices(&a, &b).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn a(&self) -> Vec<Vec<Complex64>> {
        self.inner.a.iter().map(|v| v.to_vec()).collect()
    }

    #[getter]
    fn b(&self) -> Vec<Vec<Complex64>> {
        self.inner.b.iter().map(|v| v.to_vec()).collect()
    }
}

/// Diffusion, rotation and friction coefficient matrices (3x3 each).
#[pyclass(frozen)]
struct OpeningCoefficients {
    inner: lindosc::OpeningCoefficients,
}

#[pymethods]
impl OpeningCoefficients {
    /// Builds user-asserted coefficients from 3x3 nested lists; symmetry of
    /// `dqq`/`dpp` and antisymmetry of `alpha`/`beta` are required.
    #[new]
    fn new(
        dqq: Vec<Vec<f64>>,
        dpp: Vec<Vec<f64>>,
        dqp: Vec<Vec<f64>>,
        alpha: Vec<Vec<f64>>,
        beta: Vec<Vec<f64>>,
        lambda: Vec<Vec<f64>>,
    ) -> PyResult<Self> {
        let inner = lindosc::OpeningCoefficients::from_matrices(
            mat3_from_rows("dqq", &dqq)?,
            mat3_from_rows("dpp", &dpp)?,
            mat3_from_rows("dqp", &dqp)?,
            mat3_from_rows("alpha", &alpha)?,
            mat3_from_rows("beta", &beta)?,
            mat3_from_rows("lambda", &lambda)?,
        )
        .map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn dqq(&self) -> Vec<Vec<f64>> {
        mat3_to_rows(&self.inner.dqq)
    }

    #[getter]
    fn dpp(&self) -> Vec<Vec<f64>> {
        mat3_to_rows(&self.inner.dpp)
    }

    #[getter]
    fn dqp(&self) -> Vec<Vec<f64>> {
        mat3_to_rows(&self.inner.dqp)
    }

    #[getter]
    fn alpha(&self) -> Vec<Vec<f64>> {
        mat3_to_rows(&self.inner.alpha)
    }

    #[getter]
    fn beta(&self) -> Vec<Vec<f64>> {
        mat3_to_rows(&self.inner.beta)
    }

    #[getter]
    fn lambda_(&self) -> Vec<Vec<f64>> {
        mat3_to_rows(&self.inner.lambda)
    }

    /// Violations of positive semidefiniteness or the per-axis uncertainty
    /// bound, as human-readable strings (empty when admissible).
    fn admissibility_warnings(&self, hbar: f64) -> Vec<String> {
        self.inner.admissibility_warnings(hbar)
    }
}

/// The 6x6 drift matrix with its spectrum and stability flag.
#[pyclass(frozen)]
struct DriftMatrix {
    inner: lindosc::DriftMatrix,
}

#[pymethods]
impl DriftMatrix {
    #[getter]
    fn matrix(&self) -> Vec<Vec<f64>> {
        mat6_to_rows(&self.inner.y)
    }

    #[getter]
    fn eigenvalues(&self) -> Vec<Complex64> {
        self.inner.eigenvalues.to_vec()
    }

    #[getter]
    fn stable(&self) -> bool {
        self.inner.stable
    }

    fn __repr__(&self) -> String {
        format!("DriftMatrix(stable={})", self.inner.stable)
    }
}

/// The 6x6 symmetric diffusion matrix.
#[pyclass(frozen)]
struct DiffusionMatrix {
    inner: lindosc::DiffusionMatrix,
}

#[pymethods]
impl DiffusionMatrix {
    #[new]
    fn new(matrix: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(Self {
            inner: lindosc::DiffusionMatrix::new(mat6_from_rows("matrix", &matrix)?)
                .map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn zero() -> Self {
        Self {
            inner: lindosc::DiffusionMatrix::zero(),
        }
    }

    #[getter]
    fn matrix(&self) -> Vec<Vec<f64>> {
        mat6_to_rows(&self.inner.matrix)
    }
}

/// Mean vector and central covariance in the `(q1,q2,q3,p1,p2,p3)` ordering.
#[pyclass(frozen)]
struct GaussianState {
    inner: lindosc::GaussianState,
}

#[pymethods]
impl GaussianState {
    #[new]
    fn new(mean: [f64; 6], cov: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(Self {
            inner: lindosc::GaussianState::new(
                Vec6::from_row_slice(&mean),
                mat6_from_rows("cov", &cov)?,
            )
            .map_err(to_py_err)?,
        })
    }

    #[getter]
    fn mean(&self) -> [f64; 6] {
        let mut out = [0.0; 6];
        out.copy_from_slice(self.inner.mean.as_slice());
        out
    }

    #[getter]
    fn cov(&self) -> Vec<Vec<f64>> {
        mat6_to_rows(&self.inner.cov)
    }

    /// Full symmetrized second moments, `cov + mean mean^T`.
    fn full_second_moments(&self) -> Vec<Vec<f64>> {
        mat6_to_rows(&self.inner.full_second_moments())
    }

    /// Propagates both moments by `t`.
    fn evolved(&self, drift: &DriftMatrix, diffusion: &DiffusionMatrix, t: f64) -> PyResult<Self> {
        Ok(Self {
            inner: self
                .inner
                .evolved(&drift.inner, &diffusion.inner, t)
                .map_err(to_py_err)?,
        })
    }
}

/// The propagator matrix `exp(t Y)` at one time.
#[pyclass(frozen)]
struct Propagator {
    inner: lindosc::Propagator,
}

#[pymethods]
impl Propagator {
    #[getter]
    fn matrix(&self) -> Vec<Vec<f64>> {
        mat6_to_rows(&self.inner.matrix)
    }

    #[getter]
    fn t(&self) -> f64 {
        self.inner.t
    }
}

/// Stationary variances of one damped axis.
#[pyclass(frozen)]
struct SingleAxisStationary {
    inner: lindosc::SingleAxisStationary,
}

#[pymethods]
impl SingleAxisStationary {
    #[getter]
    fn sqq(&self) -> f64 {
        self.inner.sqq
    }

    #[getter]
    fn spp(&self) -> f64 {
        self.inner.spp
    }

    #[getter]
    fn spq(&self) -> f64 {
        self.inner.spq
    }

    fn __repr__(&self) -> String {
        format!(
            "SingleAxisStationary(sqq={}, spp={}, spq={})",
            self.inner.sqq, self.inner.spp, self.inner.spq
        )
    }
}

// ============================================================================
// Operations
// ============================================================================

/// Coefficient matrices from the opening-operator vectors.
#[pyfunction]
fn build_coefficients(vectors: &LindbladVectors, hbar: f64) -> PyResult<OpeningCoefficients> {
    Ok(OpeningCoefficients {
        inner: lindosc::build_coefficients(&vectors.inner, hbar).map_err(to_py_err)?,
    })
}

/// The 6x6 drift matrix of the first-moment flow, with spectrum and
/// stability flag.
#[pyfunction]
fn build_drift_matrix(
    system: &OscillatorSystem,
    coefficients: &OpeningCoefficients,
) -> PyResult<DriftMatrix> {
    Ok(DriftMatrix {
        inner: lindosc::build_drift_matrix(&system.inner, &coefficients.inner)
            .map_err(to_py_err)?,
    })
}

/// The block diffusion matrix `[[dqq, dqp], [dqp^T, dpp]]`.
#[pyfunction]
fn assemble_diffusion(coefficients: &OpeningCoefficients) -> DiffusionMatrix {
    DiffusionMatrix {
        inner: lindosc::assemble_diffusion(&coefficients.inner),
    }
}

/// `exp(t Y)` for a raw 6x6 matrix.
#[pyfunction]
fn matrix_exponential(y: Vec<Vec<f64>>, t: f64) -> PyResult<Propagator> {
    Ok(Propagator {
        inner: lindosc::matrix_exponential(&mat6_from_rows("y", &y)?, t).map_err(to_py_err)?,
    })
}

/// Closed-form propagator of mutually uncoupled damped oscillators.
#[pyfunction]
fn closed_form_propagator(
    system: &OscillatorSystem,
    lambda_diag: [f64; 3],
    t: f64,
) -> Propagator {
    Propagator {
        inner: lindosc::closed_form_propagator(&system.inner, lambda_diag, t),
    }
}

/// Propagated mean vector at time `t`.
#[pyfunction]
fn evolve_mean(state: &GaussianState, drift: &DriftMatrix, t: f64) -> PyResult<[f64; 6]> {
    let mean = lindosc::evolve_mean(&state.inner, &drift.inner, t).map_err(to_py_err)?;
    let mut out = [0.0; 6];
    out.copy_from_slice(mean.as_slice());
    Ok(out)
}

/// Propagated central covariance at time `t`.
#[pyfunction]
fn evolve_covariance(
    state: &GaussianState,
    drift: &DriftMatrix,
    diffusion: &DiffusionMatrix,
    t: f64,
) -> PyResult<Vec<Vec<f64>>> {
    let cov = lindosc::evolve_covariance(&state.inner, &drift.inner, &diffusion.inner, t)
        .map_err(to_py_err)?;
    Ok(mat6_to_rows(&cov))
}

/// Stationary covariance from the algebraic Lyapunov equation.
#[pyfunction]
fn stationary_covariance(
    drift: &DriftMatrix,
    diffusion: &DiffusionMatrix,
) -> PyResult<Vec<Vec<f64>>> {
    let s = lindosc::stationary_covariance(&drift.inner, &diffusion.inner).map_err(to_py_err)?;
    Ok(mat6_to_rows(&s))
}

/// Stationary covariance by quadrature of `2 M D M^T` over `[0, horizon]`.
#[pyfunction]
fn stationary_covariance_integral(
    drift: &DriftMatrix,
    diffusion: &DiffusionMatrix,
    horizon: f64,
    tol: f64,
) -> PyResult<Vec<Vec<f64>>> {
    let s = lindosc::stationary_covariance_integral(&drift.inner, &diffusion.inner, horizon, tol)
        .map_err(to_py_err)?;
    Ok(mat6_to_rows(&s))
}

/// Fixed-step Runge-Kutta integration of the mean flow.
#[pyfunction]
fn rk4_mean(state: &GaussianState, drift: &DriftMatrix, t: f64, dt: f64) -> PyResult<[f64; 6]> {
    let mean = lindosc::rk4_mean(&state.inner, &drift.inner, t, dt).map_err(to_py_err)?;
    let mut out = [0.0; 6];
    out.copy_from_slice(mean.as_slice());
    Ok(out)
}

/// Fixed-step Runge-Kutta integration of the covariance flow.
#[pyfunction]
fn rk4_covariance(
    state: &GaussianState,
    drift: &DriftMatrix,
    diffusion: &DiffusionMatrix,
    t: f64,
    dt: f64,
) -> PyResult<Vec<Vec<f64>>> {
    let cov = lindosc::rk4_covariance(&state.inner, &drift.inner, &diffusion.inner, t, dt)
        .map_err(to_py_err)?;
    Ok(mat6_to_rows(&cov))
}

/// `<L3> = s_q1p2 - s_q2p1` from the full symmetrized moments.
#[pyfunction]
fn l3_expectation(state: &GaussianState) -> f64 {
    lindosc::l3_expectation(&state.inner)
}

/// `<L3(0)> exp(-2 lambda t)` for identical uncoupled axes.
#[pyfunction]
fn l3_decay(initial_l3: f64, lambda: f64, t: f64) -> f64 {
    lindosc::l3_decay(initial_l3, lambda, t)
}

/// Closed-form `s_q1p2(t)` or `s_q2p1(t)` in the uncoupled case.
///
/// `which` is `"q1p2"` or `"q2p1"`; `initial` and `stationary` are the four
/// moments `(q1p2, q2p1, q1q2, p1p2)`.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
fn cross_covariance_closed_form(
    which: &str,
    initial: [f64; 4],
    stationary: [f64; 4],
    system: &OscillatorSystem,
    lambda11: f64,
    lambda22: f64,
    t: f64,
) -> PyResult<f64> {
    let which = match which {
        "q1p2" => lindosc::CrossMoment::Q1P2,
        "q2p1" => lindosc::CrossMoment::Q2P1,
        other => {
            return Err(PyValueError::new_err(format!(
                "which must be 'q1p2' or 'q2p1', got {other:?}"
            )))
        }
    };
    let unpack = |m: [f64; 4]| lindosc::CrossMoments {
        q1p2: m[0],
        q2p1: m[1],
        q1q2: m[2],
        p1p2: m[3],
    };
    Ok(lindosc::cross_covariance_closed_form(
        which,
        &unpack(initial),
        &unpack(stationary),
        &system.inner,
        lambda11,
        lambda22,
        t,
    ))
}

/// `|s_q1p2(inf) - s_q2p1(inf)|` from the stationary covariance.
#[pyfunction]
fn stationary_equality_check(
    drift: &DriftMatrix,
    diffusion: &DiffusionMatrix,
) -> PyResult<f64> {
    lindosc::stationary_equality_check(&drift.inner, &diffusion.inner).map_err(to_py_err)
}

/// `<L2>` assembled from per-axis second moments.
#[pyfunction]
fn l2_expectation(state: &GaussianState, hbar: f64) -> f64 {
    lindosc::l2_expectation(&state.inner, hbar)
}

/// Closed-form stationary variances of a single damped axis.
#[pyfunction]
fn stationary_single_axis(
    mass: f64,
    omega: f64,
    lambda: f64,
    dqq: f64,
    dpp: f64,
    dpq: f64,
) -> PyResult<SingleAxisStationary> {
    Ok(SingleAxisStationary {
        inner: lindosc::stationary_single_axis(mass, omega, lambda, dqq, dpp, dpq)
            .map_err(to_py_err)?,
    })
}

/// `<L2(inf)> = 6 (spp sqq - spq^2) - 3 hbar^2 / 2`.
#[pyfunction]
fn l2_asymptotic(stationary: &SingleAxisStationary, hbar: f64) -> f64 {
    lindosc::l2_asymptotic(&stationary.inner, hbar)
}

#[pymodule]
fn lindosc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<OscillatorSystem>()?;
    m.add_class::<LindbladVectors>()?;
    m.add_class::<OpeningCoefficients>()?;
    m.add_class::<DriftMatrix>()?;
    m.add_class::<DiffusionMatrix>()?;
    m.add_class::<GaussianState>()?;
    m.add_class::<Propagator>()?;
    m.add_class::<SingleAxisStationary>()?;
    m.add_function(wrap_pyfunction!(build_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(build_drift_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(assemble_diffusion, m)?)?;
    m.add_function(wrap_pyfunction!(matrix_exponential, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_propagator, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_mean, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_covariance, m)?)?;
    m.add_function(wrap_pyfunction!(stationary_covariance, m)?)?;
    m.add_function(wrap_pyfunction!(stationary_covariance_integral, m)?)?;
    m.add_function(wrap_pyfunction!(rk4_mean, m)?)?;
    m.add_function(wrap_pyfunction!(rk4_covariance, m)?)?;
    m.add_function(wrap_pyfunction!(l3_expectation, m)?)?;
    m.add_function(wrap_pyfunction!(l3_decay, m)?)?;
    m.add_function(wrap_pyfunction!(cross_covariance_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(stationary_equality_check, m)?)?;
    m.add_function(wrap_pyfunction!(l2_expectation, m)?)?;
    m.add_function(wrap_pyfunction!(stationary_single_axis, m)?)?;
    m.add_function(wrap_pyfunction!(l2_asymptotic, m)?)?;
    Ok(())
}
