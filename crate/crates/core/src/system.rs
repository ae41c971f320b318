//! Domain types and construction of the phenomenological coefficients.
//!
//! The environment coupling is specified either by the six complex vectors of
//! the opening operators (from which every coefficient matrix follows) or by
//! the coefficient matrices themselves. Both routes end in an
//! [`OpeningCoefficients`] value, from which the 6x6 drift and diffusion
//! matrices of the moment equations are assembled.
//!
//! The state ordering is `(q1, q2, q3, p1, p2, p3)` everywhere in this crate.

use nalgebra::Schur;
use num_complex::Complex64;

use crate::error::DynamicsError;
use crate::{Mat3, Mat6};

/// Eigenvalues with real part above this (negative) band are not accepted as
/// stable: the decay of the propagator must be a genuine limit, not roundoff.
pub const STABILITY_BAND: f64 = 1e-12;

/// Relative eigenvalue tolerance accepted when checking positive
/// semidefiniteness of floating-point Gram constructions.
pub const PSD_TOLERANCE: f64 = 1e-12;

/// Masses, angular frequencies and hbar for the three oscillators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorSystem {
    /// Mass per axis.
    pub mass: [f64; 3],
    /// Angular frequency per axis.
    pub omega: [f64; 3],
    /// Reduced Planck constant in the chosen unit system.
    pub hbar: f64,
}

impl OscillatorSystem {
    /// Builds a system, rejecting nonpositive or nonfinite parameters.
    pub fn new(mass: [f64; 3], omega: [f64; 3], hbar: f64) -> Result<Self, DynamicsError> {
        for (k, &m) in mass.iter().enumerate() {
            if !(m.is_finite() && m > 0.0) {
                return Err(DynamicsError::Domain(format!(
                    "mass[{k}] must be a positive finite real, got {m}"
                )));
            }
        }
        for (k, &w) in omega.iter().enumerate() {
            if !(w.is_finite() && w > 0.0) {
                return Err(DynamicsError::Domain(format!(
                    "omega[{k}] must be a positive finite real, got {w}"
                )));
            }
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(DynamicsError::Domain(format!(
                "hbar must be a positive finite real, got {hbar}"
            )));
        }
        Ok(Self { mass, omega, hbar })
    }

    /// All three axes share the same mass and frequency.
    pub fn isotropic(mass: f64, omega: f64, hbar: f64) -> Result<Self, DynamicsError> {
        Self::new([mass; 3], [omega; 3], hbar)
    }
}

/// The six complex coefficient vectors of the opening operators.
///
/// `a[k]` collects the momentum coefficients of axis `k` across the six
/// opening operators, `b[k]` the coordinate coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladVectors {
    pub a: [[Complex64; 6]; 3],
    pub b: [[Complex64; 6]; 3],
}

impl LindbladVectors {
    /// Builds the vector family from slices, checking the 3 x 6 shape.
    pub fn from_slices(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Result<Self, DynamicsError> {
        let pack = |family: &[Vec<Complex64>], name: &str| -> Result<[[Complex64; 6]; 3], DynamicsError> {
            if family.len() != 3 {
                return Err(DynamicsError::Shape(format!(
                    "{name} must contain exactly 3 vectors, got {}",
                    family.len()
                )));
            }
            let mut out = [[Complex64::ZERO; 6]; 3];
            for (k, v) in family.iter().enumerate() {
                if v.len() != 6 {
                    return Err(DynamicsError::Shape(format!(
                        "{name}[{k}] must have length 6, got {}",
                        v.len()
                    )));
                }
                out[k].copy_from_slice(v);
            }
            Ok(out)
        };
        Ok(Self {
            a: pack(a, "a")?,
            b: pack(b, "b")?,
        })
    }

    /// All coefficients zero: the system decouples from the environment.
    pub fn zero() -> Self {
        Self {
            a: [[Complex64::ZERO; 6]; 3],
            b: [[Complex64::ZERO; 6]; 3],
        }
    }
}

fn hermitian_dot(x: &[Complex64; 6], y: &[Complex64; 6]) -> Complex64 {
    x.iter().zip(y).map(|(xi, yi)| xi.conj() * yi).sum()
}

/// Diffusion, rotation and friction coefficient matrices.
///
/// `dqp[k][l]` holds the cross diffusion between coordinate `k` and momentum
/// `l`. `alpha` and `beta` are antisymmetric, `dqq` and `dpp` symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct OpeningCoefficients {
    pub dqq: Mat3,
    pub dpp: Mat3,
    pub dqp: Mat3,
    pub alpha: Mat3,
    pub beta: Mat3,
    pub lambda: Mat3,
}

impl OpeningCoefficients {
    /// All six matrices zero.
    pub fn zero() -> Self {
        Self {
            dqq: Mat3::zeros(),
            dpp: Mat3::zeros(),
            dqp: Mat3::zeros(),
            alpha: Mat3::zeros(),
            beta: Mat3::zeros(),
            lambda: Mat3::zeros(),
        }
    }

    /// Uncoupled axes: diagonal friction and diffusion, no rotation terms.
    pub fn diagonal(lambda: [f64; 3], dqq: [f64; 3], dpp: [f64; 3], dqp: [f64; 3]) -> Self {
        Self {
            dqq: Mat3::from_diagonal(&nalgebra::Vector3::from(dqq)),
            dpp: Mat3::from_diagonal(&nalgebra::Vector3::from(dpp)),
            dqp: Mat3::from_diagonal(&nalgebra::Vector3::from(dqp)),
            alpha: Mat3::zeros(),
            beta: Mat3::zeros(),
            lambda: Mat3::from_diagonal(&nalgebra::Vector3::from(lambda)),
        }
    }

    /// Accepts user-supplied coefficient matrices.
    ///
    /// Symmetry of `dqq`/`dpp` and antisymmetry of `alpha`/`beta` are required
    /// (within `1e-12` relative) and then enforced exactly. Physical
    /// admissibility is NOT required here: the moment equations treat the
    /// coefficients as free phenomenological parameters. Use
    /// [`admissibility_warnings`](Self::admissibility_warnings) to check it.
    pub fn from_matrices(
        dqq: Mat3,
        dpp: Mat3,
        dqp: Mat3,
        alpha: Mat3,
        beta: Mat3,
        lambda: Mat3,
    ) -> Result<Self, DynamicsError> {
        for (name, m) in [
            ("dqq", &dqq),
            ("dpp", &dpp),
            ("dqp", &dqp),
            ("alpha", &alpha),
            ("beta", &beta),
            ("lambda", &lambda),
        ] {
            if m.iter().any(|x| !x.is_finite()) {
                return Err(DynamicsError::Domain(format!(
                    "{name} contains a nonfinite entry"
                )));
            }
        }
        let scale = |m: &Mat3| m.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
        let check_sym = |m: &Mat3, name: &str, sign: f64| -> Result<(), DynamicsError> {
            let tol = 1e-12 * scale(m);
            for i in 0..3 {
                for j in 0..3 {
                    if (m[(i, j)] - sign * m[(j, i)]).abs() > tol {
                        return Err(DynamicsError::Domain(format!(
                            "{name} must be {}symmetric: entry ({i},{j}) = {} vs ({j},{i}) = {}",
                            if sign < 0.0 { "anti" } else { "" },
                            m[(i, j)],
                            m[(j, i)],
                        )));
                    }
                }
            }
            Ok(())
        };
        check_sym(&dqq, "dqq", 1.0)?;
        check_sym(&dpp, "dpp", 1.0)?;
        check_sym(&alpha, "alpha", -1.0)?;
        check_sym(&beta, "beta", -1.0)?;
        let sym = |m: &Mat3| (m + m.transpose()) * 0.5;
        let antisym = |m: &Mat3| (m - m.transpose()) * 0.5;
        Ok(Self {
            dqq: sym(&dqq),
            dpp: sym(&dpp),
            dqp,
            alpha: antisym(&alpha),
            beta: antisym(&beta),
            lambda,
        })
    }

    /// Reports violations of the constraints that hold automatically for
    /// coefficients built from opening-operator vectors: positive
    /// semidefiniteness of `dqq`/`dpp` and the per-axis uncertainty bound
    /// `dqq[kk]*dpp[kk] - dqp[kk]^2 >= (hbar*lambda[kk])^2 / 4`.
    pub fn admissibility_warnings(&self, hbar: f64) -> Vec<String> {
        let mut warnings = Vec::new();
        for (name, m) in [("dqq", &self.dqq), ("dpp", &self.dpp)] {
            let eigs = m.symmetric_eigenvalues();
            let tol = PSD_TOLERANCE * m.trace().abs().max(1.0);
            if let Some(min) = eigs.iter().cloned().reduce(f64::min) {
                if min < -tol {
                    warnings.push(format!(
                        "{name} is not positive semidefinite (smallest eigenvalue {min:e})"
                    ));
                }
            }
        }
        for k in 0..3 {
            let lhs = self.dqq[(k, k)] * self.dpp[(k, k)] - self.dqp[(k, k)].powi(2);
            let rhs = (hbar * self.lambda[(k, k)]).powi(2) / 4.0;
            let tol = PSD_TOLERANCE * rhs.max(1.0);
            if lhs < rhs - tol {
                warnings.push(format!(
                    "axis {} violates the uncertainty bound: dqq*dpp - dqp^2 = {lhs:e} < (hbar*lambda)^2/4 = {rhs:e}",
                    k + 1
                ));
            }
        }
        warnings
    }
}

/// Builds the coefficient matrices from the opening-operator vectors.
///
/// With `<x, y>` the Hermitian dot product over the six operators:
///
/// ```text
/// dqq[k][l]    =  (hbar/2) Re <a_k, a_l>
/// dpp[k][l]    =  (hbar/2) Re <b_k, b_l>
/// dqp[k][l]    = -(hbar/2) Re <a_k, b_l>
/// alpha[k][l]  = -Im <a_k, a_l>
/// beta[k][l]   = -Im <b_k, b_l>
/// lambda[k][l] = -Im <a_k, b_l>
/// ```
pub fn build_coefficients(
    vectors: &LindbladVectors,
    hbar: f64,
) -> Result<OpeningCoefficients, DynamicsError> {
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(DynamicsError::Domain(format!(
            "hbar must be a positive finite real, got {hbar}"
        )));
    }
    let mut coeff = OpeningCoefficients::zero();
    for k in 0..3 {
        for l in 0..3 {
            let aa = hermitian_dot(&vectors.a[k], &vectors.a[l]);
            let bb = hermitian_dot(&vectors.b[k], &vectors.b[l]);
            let ab = hermitian_dot(&vectors.a[k], &vectors.b[l]);
            coeff.dqq[(k, l)] = 0.5 * hbar * aa.re;
            coeff.dpp[(k, l)] = 0.5 * hbar * bb.re;
            coeff.dqp[(k, l)] = -0.5 * hbar * ab.re;
            coeff.alpha[(k, l)] = -aa.im;
            coeff.beta[(k, l)] = -bb.im;
            coeff.lambda[(k, l)] = -ab.im;
        }
    }
    Ok(coeff)
}

/// Stability classification of the drift spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityClass {
    /// Every eigenvalue has real part below the stability band.
    Stable,
    /// No eigenvalue is genuinely positive but at least one sits in the band.
    Marginal,
    /// An eigenvalue has a genuinely positive real part.
    Unstable,
}

/// The 6x6 drift matrix of the first-moment flow with its spectrum.
///
/// `stable` is derived metadata; construct through [`build_drift_matrix`].
#[derive(Debug, Clone, PartialEq)]
pub struct DriftMatrix {
    pub y: Mat6,
    pub eigenvalues: [Complex64; 6],
    pub stable: bool,
}

impl DriftMatrix {
    pub fn stability_class(&self) -> StabilityClass {
        if self.stable {
            StabilityClass::Stable
        } else if self
            .eigenvalues
            .iter()
            .all(|z| z.re < STABILITY_BAND)
        {
            StabilityClass::Marginal
        } else {
            StabilityClass::Unstable
        }
    }

    /// The decay rate of the slowest mode, `|max Re z|`, positive iff stable.
    pub fn slowest_decay_rate(&self) -> f64 {
        -self
            .eigenvalues
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Assembles the drift matrix of the first-moment flow in the
/// `(q1,q2,q3,p1,p2,p3)` ordering:
///
/// ```text
///        | -l11  -l12  -l13 |  1/m1  -a12  -a13 |
///        | -l21  -l22  -l23 |  -a21  1/m2  -a23 |
///   Y =  | -l31  -l32  -l33 |  -a31  -a32  1/m3 |
///        | -m1w1^2  b12  b13 | -l11  -l21  -l31 |
///        |  b21 -m2w2^2  b23 | -l12  -l22  -l32 |
///        |  b31  b32 -m3w3^2 | -l13  -l23  -l33 |
/// ```
///
/// (`l` = lambda, `a` = alpha, `b` = beta). Note that the momentum rows carry
/// the transposed friction block.
pub fn build_drift_matrix(
    system: &OscillatorSystem,
    coeff: &OpeningCoefficients,
) -> Result<DriftMatrix, DynamicsError> {
    let mut y = Mat6::zeros();
    for k in 0..3 {
        for l in 0..3 {
            y[(k, l)] = -coeff.lambda[(k, l)];
            y[(3 + k, 3 + l)] = -coeff.lambda[(l, k)];
            y[(k, 3 + l)] = if k == l {
                1.0 / system.mass[k]
            } else {
                -coeff.alpha[(k, l)]
            };
            y[(3 + k, l)] = if k == l {
                -system.mass[k] * system.omega[k].powi(2)
            } else {
                coeff.beta[(k, l)]
            };
        }
    }

    let schur = Schur::try_new(y, f64::EPSILON, 100_000).ok_or_else(|| {
        DynamicsError::Range(format!("eigenvalue solver failed to converge on {y}"))
    })?;
    let eig_vec = schur.complex_eigenvalues();
    let mut eigenvalues = [Complex64::ZERO; 6];
    for (dst, src) in eigenvalues.iter_mut().zip(eig_vec.iter()) {
        *dst = *src;
    }
    eigenvalues.sort_by(|u, v| (u.re, u.im).partial_cmp(&(v.re, v.im)).unwrap());
    let stable = eigenvalues.iter().all(|z| z.re < -STABILITY_BAND);

    Ok(DriftMatrix {
        y,
        eigenvalues,
        stable,
    })
}

/// The 6x6 symmetric diffusion matrix of the covariance flow.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionMatrix {
    pub matrix: Mat6,
}

impl DiffusionMatrix {
    pub fn zero() -> Self {
        Self {
            matrix: Mat6::zeros(),
        }
    }

    /// Wraps a raw 6x6 matrix, requiring symmetry within `1e-12` relative.
    pub fn new(matrix: Mat6) -> Result<Self, DynamicsError> {
        let scale = matrix.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
        if (matrix - matrix.transpose()).amax() > 1e-12 * scale {
            return Err(DynamicsError::Domain(
                "diffusion matrix must be symmetric".into(),
            ));
        }
        Ok(Self {
            matrix: (matrix + matrix.transpose()) * 0.5,
        })
    }
}

/// Assembles the block diffusion matrix
/// `[[dqq, dqp], [dqp^T, dpp]]` in the `(q, p)` ordering.
pub fn assemble_diffusion(coeff: &OpeningCoefficients) -> DiffusionMatrix {
    let mut d = Mat6::zeros();
    for i in 0..3 {
        for j in 0..3 {
            d[(i, j)] = coeff.dqq[(i, j)];
            d[(3 + i, 3 + j)] = coeff.dpp[(i, j)];
            d[(i, 3 + j)] = coeff.dqp[(i, j)];
            d[(3 + i, j)] = coeff.dqp[(j, i)];
        }
    }
    DiffusionMatrix { matrix: d }
}
