use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use lindosc::build_drift_matrix;

use lindosc_cli::config::{parse_config, CoefficientSource, RunConfig};
use lindosc_cli::error::CliError;
use lindosc_cli::report::{fmt_complex, run_stationary_report};
use lindosc_cli::timeseries::{run_timeseries, write_csv};

/// Damped Gaussian dynamics of three harmonic oscillators.
#[derive(Parser)]
#[command(name = "lindosc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate the moments over the configured time grid and emit CSV.
    Simulate {
        /// Path to the TOML run configuration.
        config: PathBuf,
        /// Write to this file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Add `rk4_` columns from the fixed-step Runge-Kutta oracle.
        #[arg(long)]
        oracle: bool,
        /// Oracle step size (implies --oracle).
        #[arg(long = "oracle-dt")]
        oracle_dt: Option<f64>,
    },
    /// Solve the stationary problem by both routes and emit a report.
    Stationary {
        /// Path to the TOML run configuration.
        config: PathBuf,
        /// Write to this file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Parse a configuration and report the drift spectrum.
    Validate {
        /// Path to the TOML run configuration.
        config: PathBuf,
    },
}

fn main() {
    if let Err(err) = run(Cli::parse()) {
        eprintln!("{err}");
        std::process::exit(err.exit_code());
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate {
            config,
            output,
            oracle,
            oracle_dt,
        } => {
            let mut run_config = load(&config)?;
            if oracle {
                run_config.oracle = true;
            }
            if let Some(dt) = oracle_dt {
                run_config.oracle = true;
                run_config.oracle_dt = dt;
            }
            print_warnings(&run_config);
            let series = run_timeseries(&run_config)?;
            emit(output.as_deref(), |writer| write_csv(&series, writer))
        }
        Command::Stationary { config, output } => {
            let run_config = load(&config)?;
            print_warnings(&run_config);
            let report = run_stationary_report(&run_config)?;
            emit(output.as_deref(), |writer| writer.write_all(report.as_bytes()))
        }
        Command::Validate { config } => {
            let run_config = load(&config)?;
            print_warnings(&run_config);
            let drift = build_drift_matrix(&run_config.system, &run_config.coefficients)?;
            println!("config: ok");
            println!(
                "coefficient_source: {}",
                match run_config.source {
                    CoefficientSource::LindbladVectors(_) => "lindblad-vectors",
                    CoefficientSource::Direct => "direct",
                }
            );
            println!("grid: {} steps to t = {}", run_config.n_steps, run_config.t_end);
            println!("stable: {}", drift.stable);
            for (index, z) in drift.eigenvalues.iter().enumerate() {
                println!("eigenvalue_{}: {}", index + 1, fmt_complex(z));
            }
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|err| CliError::Io(format!("{}: {err}", path.display())))?;
    parse_config(&text)
}

fn print_warnings(config: &RunConfig) {
    for warning in &config.warnings {
        eprintln!("warning: {warning}");
    }
}

fn emit<F>(path: Option<&Path>, write: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> std::io::Result<()>,
{
    match path {
        Some(path) => {
            let mut file = fs::File::create(path)
                .map_err(|err| CliError::Io(format!("{}: {err}", path.display())))?;
            write(&mut file)?;
            Ok(())
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
            Ok(())
        }
    }
}
