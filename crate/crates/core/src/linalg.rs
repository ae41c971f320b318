//! Dense 6x6 helpers: matrix exponential and the Lyapunov solve.

use nalgebra::DMatrix;

use crate::error::DynamicsError;
use crate::Mat6;

/// Pade(13) numerator coefficients (Higham 2005, scaling-and-squaring).
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Norm threshold above which the argument is scaled down by powers of two.
const THETA13: f64 = 5.371920351148152;

fn one_norm(a: &Mat6) -> f64 {
    (0..6)
        .map(|j| (0..6).map(|i| a[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling-and-squaring with a Pade(13) approximant.
///
/// Relative accuracy is near machine precision for moderate norms; callers
/// are expected to check the result for overflow where extreme arguments are
/// possible.
pub fn expm(a: &Mat6) -> Result<Mat6, DynamicsError> {
    let norm = one_norm(a);
    if !norm.is_finite() {
        return Err(DynamicsError::Domain(
            "matrix exponential argument has nonfinite entries".into(),
        ));
    }

    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as u32
    } else {
        0
    };
    if squarings > 60 {
        return Err(DynamicsError::Range(format!(
            "matrix exponential argument norm {norm:e} is out of range"
        )));
    }
    let a_scaled = a / 2f64.powi(squarings as i32);

    let ident = Mat6::identity();
    let a2 = a_scaled * a_scaled;
    let a4 = a2 * a2;
    let a6 = a2 * a4;

    let u = a_scaled
        * (a6 * (a6 * PADE13[13] + a4 * PADE13[11] + a2 * PADE13[9])
            + a6 * PADE13[7]
            + a4 * PADE13[5]
            + a2 * PADE13[3]
            + ident * PADE13[1]);
    let v = a6 * (a6 * PADE13[12] + a4 * PADE13[10] + a2 * PADE13[8])
        + a6 * PADE13[6]
        + a4 * PADE13[4]
        + a2 * PADE13[2]
        + ident * PADE13[0];

    // exp(A) ~= (V - U)^-1 (V + U)
    let mut result = (v - u)
        .lu()
        .solve(&(v + u))
        .ok_or(DynamicsError::SingularSystem)?;
    for _ in 0..squarings {
        result = result * result;
    }
    if result.iter().any(|x| !x.is_finite()) {
        return Err(DynamicsError::Range(format!(
            "matrix exponential overflowed for argument norm {norm:e}"
        )));
    }
    Ok(result)
}

/// Solves the continuous Lyapunov equation `Y S + S Y^T + 2 D = 0` for `S`.
///
/// The equation is vectorized through the Kronecker-sum identity into a
/// 36x36 linear system solved by LU with partial pivoting. The caller is
/// responsible for checking that the spectrum of `Y` admits a unique
/// solution (no pair of eigenvalues summing to zero).
pub fn solve_lyapunov(y: &Mat6, d: &Mat6) -> Result<Mat6, DynamicsError> {
    // vec(Y S) = (I (x) Y) vec(S), vec(S Y^T) = (Y (x) I) vec(S).
    let mut system = DMatrix::<f64>::zeros(36, 36);
    for i in 0..6 {
        for j in 0..6 {
            for k in 0..6 {
                // (I (x) Y): block j on the diagonal holds Y.
                system[(j * 6 + i, j * 6 + k)] += y[(i, k)];
                // (Y (x) I): block (j, k) holds Y[(j, k)] * I.
                system[(j * 6 + i, k * 6 + i)] += y[(j, k)];
            }
        }
    }
    let mut rhs = DMatrix::<f64>::zeros(36, 1);
    for i in 0..6 {
        for j in 0..6 {
            rhs[(j * 6 + i, 0)] = -2.0 * d[(i, j)];
        }
    }

    let solution = system
        .lu()
        .solve(&rhs)
        .ok_or(DynamicsError::SingularSystem)?;
    let mut s = Mat6::zeros();
    for i in 0..6 {
        for j in 0..6 {
            s[(i, j)] = solution[(j * 6 + i, 0)];
        }
    }
    // The exact solution is symmetric; strip the roundoff skew.
    Ok((s + s.transpose()) * 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn expm_zero_is_identity() {
        assert_eq!(expm(&Mat6::zeros()).unwrap(), Mat6::identity());
    }

    #[test]
    fn expm_diagonal() {
        let a = Mat6::from_diagonal(&nalgebra::Vector6::new(-1.0, 0.5, 2.0, -3.0, 0.0, 1.0));
        let e = expm(&a).unwrap();
        for k in 0..6 {
            assert_abs_diff_eq!(e[(k, k)], a[(k, k)].exp(), epsilon = 1e-14 * a[(k, k)].exp());
        }
        assert_abs_diff_eq!(e.lower_triangle() - Mat6::from_diagonal(&e.diagonal()), Mat6::zeros(), epsilon = 0.0);
    }

    #[test]
    fn expm_rotation_block() {
        // exp(t J) with J the symplectic unit is a rotation by t.
        let mut j = Mat6::zeros();
        j[(0, 3)] = 1.0;
        j[(3, 0)] = -1.0;
        let t = std::f64::consts::FRAC_PI_3;
        let e = expm(&(j * t)).unwrap();
        assert_abs_diff_eq!(e[(0, 0)], t.cos(), epsilon = 1e-14);
        assert_abs_diff_eq!(e[(0, 3)], t.sin(), epsilon = 1e-14);
        assert_abs_diff_eq!(e[(3, 0)], -t.sin(), epsilon = 1e-14);
        assert_abs_diff_eq!(e[(1, 1)], 1.0, epsilon = 0.0);
    }

    #[test]
    fn expm_needs_scaling_for_large_norm() {
        let a = Mat6::identity() * 40.0;
        let e = expm(&a).unwrap();
        let expected = 40f64.exp();
        assert_abs_diff_eq!(e[(0, 0)], expected, epsilon = 1e-10 * expected);
    }

    #[test]
    fn expm_overflow_is_a_range_error() {
        let a = Mat6::identity() * 1e6;
        assert!(matches!(expm(&a), Err(DynamicsError::Range(_))));
    }

    #[test]
    fn lyapunov_residual_is_small() {
        let y = Mat6::new(
            -0.5, 0.1, 0.0, 1.0, 0.0, 0.0, //
            -0.1, -0.7, 0.2, 0.0, 1.0, 0.0, //
            0.0, -0.2, -0.9, 0.0, 0.0, 1.0, //
            -1.0, 0.0, 0.0, -0.5, -0.1, 0.0, //
            0.0, -1.5, 0.0, 0.1, -0.7, -0.2, //
            0.0, 0.0, -2.0, 0.0, 0.2, -0.9,
        );
        let d = Mat6::identity() * 0.3;
        let s = solve_lyapunov(&y, &d).unwrap();
        let residual = y * s + s * y.transpose() + d * 2.0;
        assert!(residual.amax() < 1e-12);
        assert_eq!(s, s.transpose());
    }

    #[test]
    fn lyapunov_marginal_spectrum_is_singular() {
        // Pure rotation: eigenvalue pairs +-i sum to zero.
        let mut y = Mat6::zeros();
        for k in 0..3 {
            y[(k, 3 + k)] = 1.0;
            y[(3 + k, k)] = -1.0;
        }
        let d = Mat6::identity();
        assert!(matches!(
            solve_lyapunov(&y, &d),
            Err(DynamicsError::SingularSystem)
        ));
    }
}
