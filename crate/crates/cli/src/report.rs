//! Stationary analysis report: plain text, one `key: value` per line.

use std::fmt::Write as _;

use lindosc::{
    assemble_diffusion, build_drift_matrix, l2_expectation, stationary_covariance,
    stationary_covariance_integral, stationary_single_axis, GaussianState, Vec6,
};
use num_complex::Complex64;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::timeseries::{fmt_float, STATE_LABELS};

/// Horizon for the quadrature route, in decay times of the slowest mode.
const QUADRATURE_DECAY_TIMES: f64 = 14.0;
const QUADRATURE_TOL: f64 = 1e-9;

/// `re+imi` with shortest round-trip parts.
pub fn fmt_complex(z: &Complex64) -> String {
    let sign = if z.im < 0.0 { "-" } else { "+" };
    format!("{}{sign}{}i", fmt_float(z.re), fmt_float(z.im.abs()))
}

/// Solves the stationary problem by both routes and renders the report.
pub fn run_stationary_report(config: &RunConfig) -> Result<String, CliError> {
    let drift = build_drift_matrix(&config.system, &config.coefficients)?;
    let diffusion = assemble_diffusion(&config.coefficients);

    let stationary = stationary_covariance(&drift, &diffusion)?;
    let horizon = QUADRATURE_DECAY_TIMES / drift.slowest_decay_rate();
    let integral =
        stationary_covariance_integral(&drift, &diffusion, horizon, QUADRATURE_TOL)?;

    let residual =
        drift.y * stationary + stationary * drift.y.transpose() + 2.0 * diffusion.matrix;

    let mut out = String::new();
    writeln!(out, "stable: {}", drift.stable).unwrap();
    for (index, z) in drift.eigenvalues.iter().enumerate() {
        writeln!(out, "eigenvalue_{}: {}", index + 1, fmt_complex(z)).unwrap();
    }
    for i in 0..6 {
        for j in i..6 {
            writeln!(
                out,
                "sigma_inf_{}{}: {}",
                STATE_LABELS[i],
                STATE_LABELS[j],
                fmt_float(stationary[(i, j)])
            )
            .unwrap();
        }
    }
    writeln!(out, "lyapunov_residual_max: {}", fmt_float(residual.amax())).unwrap();
    writeln!(
        out,
        "stationary_method_discrepancy_max: {}",
        fmt_float((stationary - integral).amax())
    )
    .unwrap();
    writeln!(
        out,
        "cross_moment_equality_residual: {}",
        fmt_float((stationary[(0, 4)] - stationary[(1, 3)]).abs())
    )
    .unwrap();

    // Uncoupled closed forms evaluated on the diagonal coefficient entries;
    // they equal the 6x6 blocks above only for diagonal coefficients.
    for k in 0..3 {
        let axis = k + 1;
        let lambda = config.coefficients.lambda[(k, k)];
        if lambda > 0.0 {
            let values = stationary_single_axis(
                config.system.mass[k],
                config.system.omega[k],
                lambda,
                config.coefficients.dqq[(k, k)],
                config.coefficients.dpp[(k, k)],
                config.coefficients.dqp[(k, k)],
            )?;
            writeln!(out, "axis{axis}_sigma_qq: {}", fmt_float(values.sqq)).unwrap();
            writeln!(out, "axis{axis}_sigma_pp: {}", fmt_float(values.spp)).unwrap();
            writeln!(out, "axis{axis}_sigma_pq: {}", fmt_float(values.spq)).unwrap();
        } else {
            for name in ["qq", "pp", "pq"] {
                writeln!(out, "axis{axis}_sigma_{name}: n/a (friction not positive)").unwrap();
            }
        }
    }

    let l2_inf = l2_expectation(
        &GaussianState {
            mean: Vec6::zeros(),
            cov: stationary,
        },
        config.system.hbar,
    );
    writeln!(out, "l2_inf: {}", fmt_float(l2_inf)).unwrap();
    if l2_inf < 0.0 {
        writeln!(
            out,
            "warning: l2_inf is negative; the stationary moments lie outside the formula's physical domain"
        )
        .unwrap();
    }
    Ok(out)
}
