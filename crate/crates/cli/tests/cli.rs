//! End-to-end tests: configuration parsing, scenario execution, CSV and
//! report output, exit codes, byte determinism.

use std::io::Write as _;
use std::process::{Command, Output};

use lindosc_cli::config::{parse_config, CoefficientSource};
use lindosc_cli::error::CliError;
use lindosc_cli::report::run_stationary_report;
use lindosc_cli::timeseries::{run_timeseries, write_csv};

const SYMMETRIC: &str = r#"
[system]
mass = [1.0, 1.0, 1.0]
omega = [1.0, 1.0, 1.0]

[coefficients.direct]
dqq = [[0.5, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 0.5]]
dpp = [[0.5, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 0.5]]
dqp = [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]
alpha = [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]
beta = [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]
lambda = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]

[initial]
mean = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
cov_lower = [
    1.0,
    0.0, 1.0,
    0.0, 0.0, 1.0,
    0.0, 0.1, 0.0, 1.0,
    0.3, 0.0, 0.0, 0.0, 1.0,
    0.0, 0.0, 0.0, 0.0, 0.0, 1.0,
]

[grid]
t_end = 5.0
n_steps = 26
"#;

fn free_rotation_config() -> String {
    SYMMETRIC
        .replace("dqq = [[0.5", "dqq = [[0.0")
        .replace("[0.0, 0.5, 0.0], [0.0, 0.0, 0.5]]", "[0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]")
        .replace("dpp = [[0.5", "dpp = [[0.0")
        .replace("lambda = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]",
                 "lambda = [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]")
}

fn column(series: &lindosc_cli::TimeSeries, name: &str) -> Vec<f64> {
    let at = series
        .header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("missing column {name}"));
    series.rows.iter().map(|row| row[at]).collect()
}

#[test]
fn minimal_document_gets_defaults() {
    let config = parse_config(SYMMETRIC).unwrap();
    assert_eq!(config.system.hbar, 1.0);
    assert!(!config.oracle);
    assert_eq!(config.oracle_dt, 1e-3);
    assert!(config.outputs.means && config.outputs.covariances);
    assert!(config.outputs.l3 && config.outputs.l2);
    assert!(config.warnings.is_empty());
    assert_eq!(config.source, CoefficientSource::Direct);
}

#[test]
fn negative_mass_is_rejected_with_the_key() {
    let text = SYMMETRIC.replace("mass = [1.0, 1.0, 1.0]", "mass = [-1.0, 1.0, 1.0]");
    let err = parse_config(&text).unwrap_err();
    let message = err.to_string();
    assert!(matches!(err, CliError::Config(_)), "{message}");
    assert!(message.contains("system") && message.contains("mass"), "{message}");
}

#[test]
fn lindblad_vectors_resolve_through_the_coefficient_pipeline() {
    let text = r#"
[system]
mass = [1.0, 1.0, 1.0]
omega = [1.0, 1.0, 1.0]

[coefficients.lindblad]
a1 = [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]
a2 = [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]
a3 = [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]
b1 = [[0.0, -1.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]
b2 = [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]
b3 = [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]

[initial]
mean = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
cov_lower = [
    1.0,
    0.0, 1.0,
    0.0, 0.0, 1.0,
    0.0, 0.0, 0.0, 1.0,
    0.0, 0.0, 0.0, 0.0, 1.0,
    0.0, 0.0, 0.0, 0.0, 0.0, 1.0,
]

[grid]
t_end = 1.0
n_steps = 2
"#;
    let config = parse_config(text).unwrap();
    let CoefficientSource::LindbladVectors(vectors) = &config.source else {
        panic!("expected the lindblad source");
    };
    let expected = lindosc::build_coefficients(vectors, 1.0).unwrap();
    assert_eq!(config.coefficients, expected);
    assert_eq!(config.coefficients.dqq[(0, 0)], 0.5);
    assert_eq!(config.coefficients.lambda[(0, 0)], 1.0);
}

#[test]
fn emitted_config_round_trips() {
    let config = parse_config(SYMMETRIC).unwrap();
    let reparsed = parse_config(&config.to_toml()).unwrap();
    assert_eq!(config, reparsed);

    let text = SYMMETRIC.replace(
        "[coefficients.direct]",
        "[oracle]\nenabled = true\ndt = 0.002\n\n[coefficients.direct]",
    );
    let config = parse_config(&text).unwrap();
    let reparsed = parse_config(&config.to_toml()).unwrap();
    assert_eq!(config, reparsed);
}

#[test]
fn structural_mistakes_are_named() {
    let both = SYMMETRIC.replace(
        "[coefficients.direct]",
        "[coefficients.lindblad]\na1 = []\na2 = []\na3 = []\nb1 = []\nb2 = []\nb3 = []\n\n[coefficients.direct]",
    );
    assert!(parse_config(&both)
        .unwrap_err()
        .to_string()
        .contains("exactly one"));

    let bad_grid = SYMMETRIC.replace("n_steps = 26", "n_steps = 1");
    assert!(parse_config(&bad_grid)
        .unwrap_err()
        .to_string()
        .contains("grid.n_steps"));

    let bad_t = SYMMETRIC.replace("t_end = 5.0", "t_end = -1.0");
    assert!(parse_config(&bad_t)
        .unwrap_err()
        .to_string()
        .contains("grid.t_end"));

    let short_cov = SYMMETRIC.replace("    0.3, 0.0, 0.0, 0.0, 1.0,\n", "");
    assert!(parse_config(&short_cov)
        .unwrap_err()
        .to_string()
        .contains("cov_lower"));

    let unknown = SYMMETRIC.replace("t_end = 5.0", "t_end = 5.0\nt_start = 1.0");
    assert!(parse_config(&unknown)
        .unwrap_err()
        .to_string()
        .contains("t_start"));
}

#[test]
fn direct_coefficients_violating_admissibility_warn_but_parse() {
    // Friction with no diffusion: fine for the moment equations, but not
    // realizable from opening operators.
    let text = SYMMETRIC
        .replace("dqq = [[0.5", "dqq = [[0.0")
        .replace("dpp = [[0.5", "dpp = [[0.0");
    let config = parse_config(&text).unwrap();
    assert!(!config.warnings.is_empty());
    assert!(config.warnings[0].contains("positive semidefinite") || config.warnings[0].contains("uncertainty"));
}

#[test]
fn symmetric_l3_column_follows_the_decay_law() {
    let config = parse_config(SYMMETRIC).unwrap();
    let series = run_timeseries(&config).unwrap();
    let times = column(&series, "t");
    let l3 = column(&series, "L3");
    let initial = l3[0];
    assert_eq!(initial, 0.3 - 0.1);
    for (t, value) in times.iter().zip(&l3) {
        let expected = initial * (-2.0 * t).exp();
        assert!((value - expected).abs() < 1e-9, "t = {t}");
    }
}

#[test]
fn free_oscillators_conserve_l3() {
    let config = parse_config(&free_rotation_config()).unwrap();
    let series = run_timeseries(&config).unwrap();
    let l3 = column(&series, "L3");
    for value in &l3 {
        assert!((value - l3[0]).abs() < 1e-9);
    }
}

#[test]
fn oracle_columns_agree_with_the_closed_form() {
    let mut config = parse_config(SYMMETRIC).unwrap();
    config.oracle = true;
    let series = run_timeseries(&config).unwrap();
    let value_names: Vec<String> = series
        .header
        .iter()
        .filter(|name| *name != "t" && !name.starts_with("rk4_"))
        .cloned()
        .collect();
    assert!(series.header.iter().any(|name| name == "rk4_L3"));
    let mut worst: f64 = 0.0;
    for name in &value_names {
        let exact = column(&series, name);
        let oracle = column(&series, &format!("rk4_{name}"));
        for (a, b) in exact.iter().zip(&oracle) {
            worst = worst.max((a - b).abs());
        }
    }
    assert!(worst < 1e-6, "worst oracle discrepancy {worst:e}");
}

#[test]
fn means_only_timeseries_works_for_unstable_drift() {
    let mut text = SYMMETRIC.replace(
        "lambda = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]",
        "lambda = [[-0.1, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]",
    );
    text.push_str("\n[output]\nmeans = true\ncovariances = false\nl3 = false\nl2 = false\n");
    let config = parse_config(&text).unwrap();
    let series = run_timeseries(&config).unwrap();
    assert_eq!(series.header.len(), 7);

    // The same config with covariance columns requires the stationary
    // solution and must refuse.
    let full = parse_config(&text.replace("covariances = false", "covariances = true")).unwrap();
    let err = run_timeseries(&full).unwrap_err();
    assert!(matches!(err, CliError::UnstableDrift(_)));
}

#[test]
fn symmetric_stationary_report_values() {
    let config = parse_config(SYMMETRIC).unwrap();
    let report = run_stationary_report(&config).unwrap();
    assert!(report.contains("stable: true"));
    assert!(report.contains("sigma_inf_q1q1: 0.5"));
    assert!(report.contains("sigma_inf_p3p3: 0.5"));
    assert!(report.contains("sigma_inf_q1p1: 0\n"));
    assert!(report.contains("axis1_sigma_qq: 0.5"));
    assert!(report.contains("l2_inf: 0\n"));
    assert!(!report.contains("warning:"));
}

#[test]
fn zero_diffusion_report_flags_the_domain() {
    let text = SYMMETRIC
        .replace("dqq = [[0.5", "dqq = [[0.0")
        .replace("dpp = [[0.5", "dpp = [[0.0")
        .replace(
            "[0.0, 0.5, 0.0], [0.0, 0.0, 0.5]]",
            "[0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]",
        );
    let config = parse_config(&text).unwrap();
    let report = run_stationary_report(&config).unwrap();
    assert!(report.contains("sigma_inf_q1q1: 0\n"));
    assert!(report.contains("l2_inf: -1.5"));
    assert!(report.contains("warning: l2_inf is negative"));
}

#[test]
fn coupled_instance_report_methods_agree() {
    let text = SYMMETRIC.replace(
        "alpha = [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]",
        "alpha = [[0.0, 0.08, -0.05], [-0.08, 0.0, 0.04], [0.05, -0.04, 0.0]]",
    );
    let config = parse_config(&text).unwrap();
    let report = run_stationary_report(&config).unwrap();
    let discrepancy: f64 = report
        .lines()
        .find_map(|line| line.strip_prefix("stationary_method_discrepancy_max: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(discrepancy < 1e-8, "discrepancy {discrepancy:e}");
}

// ---------------------------------------------------------------------------
// Binary-level checks.

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lindosc"))
}

fn write_config(text: &str) -> tempfile::NamedTempFile {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(text.as_bytes()).unwrap();
    file
}

fn run_ok(output: &Output) -> &Output {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    output
}

#[test]
fn simulate_is_byte_deterministic() {
    let file = write_config(SYMMETRIC);
    let first = binary().args(["simulate"]).arg(file.path()).output().unwrap();
    let second = binary().args(["simulate"]).arg(file.path()).output().unwrap();
    run_ok(&first);
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());

    let header = String::from_utf8_lossy(&first.stdout);
    let header = header.lines().next().unwrap();
    assert!(header.starts_with("t,mq1,mq2,mq3,mp1,mp2,mp3,C_q1q1,"));
    assert!(header.ends_with("L3,L2"));
}

#[test]
fn stationary_is_byte_deterministic() {
    let file = write_config(SYMMETRIC);
    let first = binary().args(["stationary"]).arg(file.path()).output().unwrap();
    let second = binary().args(["stationary"]).arg(file.path()).output().unwrap();
    run_ok(&first);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn output_flag_writes_the_file() {
    let file = write_config(SYMMETRIC);
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("series.csv");
    let output = binary()
        .args(["simulate"])
        .arg(file.path())
        .arg("--output")
        .arg(&out_path)
        .output()
        .unwrap();
    run_ok(&output);
    assert!(output.stdout.is_empty());

    let config = parse_config(SYMMETRIC).unwrap();
    let series = run_timeseries(&config).unwrap();
    let mut expected = Vec::new();
    write_csv(&series, &mut expected).unwrap();
    assert_eq!(std::fs::read(&out_path).unwrap(), expected);
}

#[test]
fn oracle_flag_adds_rk4_columns() {
    let file = write_config(SYMMETRIC);
    let output = binary()
        .args(["simulate", "--oracle", "--oracle-dt", "0.002"])
        .arg(file.path())
        .output()
        .unwrap();
    run_ok(&output);
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.lines().next().unwrap().contains("rk4_L3"));
}

#[test]
fn validate_reports_the_spectrum() {
    let file = write_config(SYMMETRIC);
    let output = binary().args(["validate"]).arg(file.path()).output().unwrap();
    run_ok(&output);
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("config: ok"));
    assert!(text.contains("coefficient_source: direct"));
    assert!(text.contains("stable: true"));
    assert!(text.contains("eigenvalue_6:"));
}

#[test]
fn exit_codes_follow_the_contract() {
    // Config error: 2.
    let bad = write_config(&SYMMETRIC.replace("mass = [1.0, 1.0, 1.0]", "mass = [0.0, 1.0, 1.0]"));
    let output = binary().args(["validate"]).arg(bad.path()).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("mass"));

    // Unstable drift during a stationary run: 3, with eigenvalues printed.
    let unstable = write_config(&SYMMETRIC.replace(
        "lambda = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]",
        "lambda = [[-0.2, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]",
    ));
    let output = binary().args(["stationary"]).arg(unstable.path()).output().unwrap();
    assert_eq!(output.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&output.stderr).contains("eigenvalues"));

    // Missing file: 1.
    let output = binary().args(["simulate", "/nonexistent/config.toml"]).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
}
