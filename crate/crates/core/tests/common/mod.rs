//! Random instance generation shared by the property and acceptance suites.
#![allow(dead_code)] // each test target uses its own subset

use lindosc::{
    assemble_diffusion, build_coefficients, build_drift_matrix, DiffusionMatrix, DriftMatrix,
    GaussianState, LindbladVectors, Mat3, Mat6, OpeningCoefficients, OscillatorSystem, Vec6,
};
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vectors(rng: &mut ChaCha8Rng, scale: f64) -> LindbladVectors {
    let mut v = LindbladVectors::zero();
    for k in 0..3 {
        for j in 0..6 {
            v.a[k][j] = Complex64::new(
                scale * rng.random_range(-1.0..1.0),
                scale * rng.random_range(-1.0..1.0),
            );
            v.b[k][j] = Complex64::new(
                scale * rng.random_range(-1.0..1.0),
                scale * rng.random_range(-1.0..1.0),
            );
        }
    }
    v
}

pub fn random_system(rng: &mut ChaCha8Rng, omega_max: f64) -> OscillatorSystem {
    let draw3 = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| {
        [
            rng.random_range(lo..hi),
            rng.random_range(lo..hi),
            rng.random_range(lo..hi),
        ]
    };
    OscillatorSystem::new(
        draw3(rng, 0.5, 2.0),
        draw3(rng, 0.1, omega_max),
        1.0,
    )
    .unwrap()
}

/// A diagonal (uncoupled-bath) instance with per-axis admissible diffusion.
pub struct DiagonalInstance {
    pub system: OscillatorSystem,
    pub lambda: [f64; 3],
    pub dqq: [f64; 3],
    pub dpp: [f64; 3],
    pub dpq: [f64; 3],
    pub drift: DriftMatrix,
    pub diffusion: DiffusionMatrix,
}

pub fn random_diagonal_instance(rng: &mut ChaCha8Rng, omega_max: f64) -> DiagonalInstance {
    let system = random_system(rng, omega_max);
    let mut lambda = [0.0; 3];
    let mut dqq = [0.0; 3];
    let mut dpp = [0.0; 3];
    let mut dpq = [0.0; 3];
    for k in 0..3 {
        lambda[k] = rng.random_range(0.05..2.0);
        // Keep the per-axis uncertainty product above (lambda/2)^2.
        dqq[k] = rng.random_range(0.6..1.2) * lambda[k];
        dpp[k] = rng.random_range(0.6..1.2) * lambda[k];
        dpq[k] = rng.random_range(-0.2..0.2) * lambda[k];
    }
    let coeff = OpeningCoefficients::diagonal(lambda, dqq, dpp, dpq);
    let drift = build_drift_matrix(&system, &coeff).unwrap();
    assert!(drift.stable);
    DiagonalInstance {
        system,
        lambda,
        dqq,
        dpp,
        dpq,
        drift,
        diffusion: assemble_diffusion(&coeff),
    }
}

/// A stable instance, coupled across axes when requested: random rotation
/// terms and off-diagonal friction on top of a damped diagonal core.
pub fn random_stable_instance(
    rng: &mut ChaCha8Rng,
    coupled: bool,
) -> (OscillatorSystem, DriftMatrix, DiffusionMatrix) {
    loop {
        let system = random_system(rng, 2.5);
        let lambda_diag = [
            rng.random_range(0.3..1.2),
            rng.random_range(0.3..1.2),
            rng.random_range(0.3..1.2),
        ];
        let eps = if coupled { 0.12 } else { 0.0 };
        let skew = |rng: &mut ChaCha8Rng| {
            let (a, b, c) = (
                rng.random_range(-eps..=eps),
                rng.random_range(-eps..=eps),
                rng.random_range(-eps..=eps),
            );
            Mat3::new(0.0, a, b, -a, 0.0, c, -b, -c, 0.0)
        };
        let mut lambda = Mat3::from_diagonal(&nalgebra::Vector3::from(lambda_diag));
        if coupled {
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        lambda[(i, j)] = rng.random_range(-eps..=eps);
                    }
                }
            }
        }
        // Symmetric positive semidefinite diffusion via a Gram product.
        let g = Mat6::from_fn(|_, _| rng.random_range(-0.5..0.5));
        let d = DiffusionMatrix::new(g.transpose() * g * (1.0 / 6.0)).unwrap();

        let coeff = OpeningCoefficients::from_matrices(
            Mat3::from_fn(|i, j| d.matrix[(i, j)]),
            Mat3::from_fn(|i, j| d.matrix[(3 + i, 3 + j)]),
            Mat3::from_fn(|i, j| d.matrix[(i, 3 + j)]),
            skew(rng),
            skew(rng),
            lambda,
        )
        .unwrap();
        let drift = build_drift_matrix(&system, &coeff).unwrap();
        if drift.stable {
            return (system, drift, assemble_diffusion(&coeff));
        }
    }
}

/// The fully symmetric damped setup: identical axes, diagonal coefficients.
pub struct SymmetricInstance {
    pub system: OscillatorSystem,
    pub lambda: f64,
    pub dqq: f64,
    pub dpp: f64,
    pub dpq: f64,
    pub drift: DriftMatrix,
    pub diffusion: DiffusionMatrix,
}

pub fn random_symmetric_instance(rng: &mut ChaCha8Rng) -> SymmetricInstance {
    let mass = rng.random_range(0.5..2.0);
    let omega = rng.random_range(0.5..2.0);
    let lambda = rng.random_range(0.2..1.5);
    let dqq = rng.random_range(0.6..1.2) * lambda;
    let dpp = rng.random_range(0.6..1.2) * lambda;
    let dpq = rng.random_range(-0.2..0.2) * lambda;
    let system = OscillatorSystem::isotropic(mass, omega, 1.0).unwrap();
    let coeff = OpeningCoefficients::diagonal([lambda; 3], [dqq; 3], [dpp; 3], [dpq; 3]);
    let drift = build_drift_matrix(&system, &coeff).unwrap();
    assert!(drift.stable);
    SymmetricInstance {
        system,
        lambda,
        dqq,
        dpp,
        dpq,
        drift,
        diffusion: assemble_diffusion(&coeff),
    }
}

pub fn random_state(rng: &mut ChaCha8Rng) -> GaussianState {
    let mean = Vec6::from_fn(|_, _| rng.random_range(-1.0..1.0));
    let g = Mat6::from_fn(|_, _| rng.random_range(-0.7..0.7));
    let cov = g.transpose() * g + Mat6::identity() * 0.5;
    GaussianState::new(mean, cov).unwrap()
}

/// Coefficients straight from random opening-operator vectors plus a strong
/// per-axis damping pair, so the result is both physically admissible and
/// reliably stable.
pub fn random_lindblad_stable_instance(
    rng: &mut ChaCha8Rng,
) -> (OscillatorSystem, DriftMatrix, DiffusionMatrix) {
    loop {
        let system = random_system(rng, 2.5);
        let mut vectors = random_vectors(rng, 0.25);
        for k in 0..3 {
            // One opening operator per axis with a_j = g e_j, b_j = -i g e_j
            // contributes lambda_kk = g^2 and balanced diffusion.
            let g = rng.random_range(0.6..1.1);
            vectors.a[k][k] += Complex64::new(g, 0.0);
            vectors.b[k][k] += Complex64::new(0.0, -g);
        }
        let coeff = build_coefficients(&vectors, system.hbar).unwrap();
        let drift = build_drift_matrix(&system, &coeff).unwrap();
        if drift.stable {
            return (system, drift, assemble_diffusion(&coeff));
        }
    }
}
