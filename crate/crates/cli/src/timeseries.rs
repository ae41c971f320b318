//! Time-series generation with deterministic CSV emission.

use std::io::{self, Write};

use lindosc::{
    assemble_diffusion, build_drift_matrix, evolve_covariance, evolve_mean, l2_expectation,
    l3_expectation, rk4_covariance, rk4_mean, GaussianState,
};

use crate::config::{OutputFlags, RunConfig};
use crate::error::CliError;

pub const STATE_LABELS: [&str; 6] = ["q1", "q2", "q3", "p1", "p2", "p3"];

/// Shortest round-trip decimal, with negative zero folded into zero.
pub fn fmt_float(value: f64) -> String {
    let value = if value == 0.0 { 0.0 } else { value };
    format!("{value}")
}

/// One table: a header and one row per grid time.
#[derive(Debug, Clone)]
pub struct TimeSeries {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

fn value_columns(outputs: &OutputFlags, prefix: &str) -> Vec<String> {
    let mut cols = Vec::new();
    if outputs.means {
        for label in STATE_LABELS {
            cols.push(format!("{prefix}m{label}"));
        }
    }
    if outputs.covariances {
        for (i, row_label) in STATE_LABELS.iter().enumerate() {
            for col_label in &STATE_LABELS[i..] {
                cols.push(format!("{prefix}C_{row_label}{col_label}"));
            }
        }
    }
    if outputs.l3 {
        cols.push(format!("{prefix}L3"));
    }
    if outputs.l2 {
        cols.push(format!("{prefix}L2"));
    }
    cols
}

fn push_state_values(row: &mut Vec<f64>, state: &GaussianState, outputs: &OutputFlags, hbar: f64) {
    if outputs.means {
        row.extend(state.mean.iter());
    }
    if outputs.covariances {
        for i in 0..6 {
            for j in i..6 {
                row.push(state.cov[(i, j)]);
            }
        }
    }
    if outputs.l3 {
        row.push(l3_expectation(state));
    }
    if outputs.l2 {
        row.push(l2_expectation(state, hbar));
    }
}

/// Propagates the configured initial state across the time grid.
///
/// The closed-form columns come from the exponential/sandwich path evaluated
/// from `t = 0` at every grid point; the optional `rk4_` columns carry a
/// fixed-step integration marched grid point to grid point.
pub fn run_timeseries(config: &RunConfig) -> Result<TimeSeries, CliError> {
    let drift = build_drift_matrix(&config.system, &config.coefficients)?;
    let diffusion = assemble_diffusion(&config.coefficients);
    // Pure mean propagation never needs the stationary covariance, so a
    // means-only run works for unstable drift too.
    let needs_cov = config.outputs.covariances || config.outputs.l3 || config.outputs.l2;

    let mut header = vec!["t".to_string()];
    header.extend(value_columns(&config.outputs, ""));
    if config.oracle {
        header.extend(value_columns(&config.outputs, "rk4_"));
    }

    let grid_step = config.t_end / (config.n_steps - 1) as f64;
    let mut oracle_state = config.initial.clone();
    let mut rows = Vec::with_capacity(config.n_steps);
    for index in 0..config.n_steps {
        let t = index as f64 * config.t_end / (config.n_steps - 1) as f64;
        let state = GaussianState {
            mean: evolve_mean(&config.initial, &drift, t)?,
            cov: if needs_cov {
                evolve_covariance(&config.initial, &drift, &diffusion, t)?
            } else {
                config.initial.cov
            },
        };
        let mut row = vec![t];
        push_state_values(&mut row, &state, &config.outputs, config.system.hbar);
        if config.oracle {
            if index > 0 {
                oracle_state = GaussianState {
                    mean: rk4_mean(&oracle_state, &drift, grid_step, config.oracle_dt)?,
                    cov: if needs_cov {
                        rk4_covariance(
                            &oracle_state,
                            &drift,
                            &diffusion,
                            grid_step,
                            config.oracle_dt,
                        )?
                    } else {
                        oracle_state.cov
                    },
                };
            }
            push_state_values(&mut row, &oracle_state, &config.outputs, config.system.hbar);
        }
        rows.push(row);
    }
    Ok(TimeSeries { header, rows })
}

/// Writes the series as CSV with shortest round-trip float formatting, so
/// identical configurations produce identical bytes.
pub fn write_csv<W: Write + ?Sized>(series: &TimeSeries, writer: &mut W) -> io::Result<()> {
    writeln!(writer, "{}", series.header.join(","))?;
    let mut line = String::new();
    for row in &series.rows {
        line.clear();
        for (index, value) in row.iter().enumerate() {
            if index > 0 {
                line.push(',');
            }
            line.push_str(&fmt_float(*value));
        }
        writeln!(writer, "{line}")?;
    }
    Ok(())
}
