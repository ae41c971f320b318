//! Run configuration: a flat TOML schema with dotted section names.
//!
//! Complex numbers are written as `[re, im]` pairs. The covariance is given
//! either as its lower triangle (21 values, row-major: `(0,0), (1,0), (1,1),
//! (2,0), ...`) or as the full symmetric 6x6 matrix.

use lindosc::{
    build_coefficients, GaussianState, LindbladVectors, Mat3, Mat6, OpeningCoefficients,
    OscillatorSystem, Vec6,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

fn default_hbar() -> f64 {
    1.0
}

fn default_true() -> bool {
    true
}

fn default_oracle_dt() -> f64 {
    1e-3
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub system: SystemSection,
    pub coefficients: CoefficientsSection,
    pub initial: InitialSection,
    pub grid: GridSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub oracle: OracleSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub mass: [f64; 3],
    pub omega: [f64; 3],
    #[serde(default = "default_hbar")]
    pub hbar: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientsSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lindblad: Option<LindbladSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direct: Option<DirectSection>,
}

/// Six complex length-6 vectors as `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LindbladSection {
    pub a1: Vec<[f64; 2]>,
    pub a2: Vec<[f64; 2]>,
    pub a3: Vec<[f64; 2]>,
    pub b1: Vec<[f64; 2]>,
    pub b2: Vec<[f64; 2]>,
    pub b3: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirectSection {
    pub dqq: [[f64; 3]; 3],
    pub dpp: [[f64; 3]; 3],
    pub dqp: [[f64; 3]; 3],
    pub alpha: [[f64; 3]; 3],
    pub beta: [[f64; 3]; 3],
    pub lambda: [[f64; 3]; 3],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    pub mean: [f64; 6],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cov_lower: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cov: Option<[[f64; 6]; 6]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub t_end: f64,
    pub n_steps: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_true")]
    pub means: bool,
    #[serde(default = "default_true")]
    pub covariances: bool,
    #[serde(default = "default_true")]
    pub l3: bool,
    #[serde(default = "default_true")]
    pub l2: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            means: true,
            covariances: true,
            l3: true,
            l2: true,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    #[serde(default)]
    pub enabled: bool,
    #[serde(default = "default_oracle_dt")]
    pub dt: f64,
}

impl Default for OracleSection {
    fn default() -> Self {
        Self {
            enabled: false,
            dt: default_oracle_dt(),
        }
    }
}

/// How the opening coefficients were specified.
#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientSource {
    LindbladVectors(Box<LindbladVectors>),
    Direct,
}

/// Output column selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutputFlags {
    pub means: bool,
    pub covariances: bool,
    pub l3: bool,
    pub l2: bool,
}

/// A fully validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: OscillatorSystem,
    pub source: CoefficientSource,
    pub coefficients: OpeningCoefficients,
    /// Admissibility warnings for user-asserted direct coefficients.
    pub warnings: Vec<String>,
    pub initial: GaussianState,
    pub t_end: f64,
    pub n_steps: usize,
    pub outputs: OutputFlags,
    pub oracle: bool,
    pub oracle_dt: f64,
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let doc: ConfigDocument =
        toml::from_str(text).map_err(|err| CliError::Config(err.to_string()))?;
    resolve_config(&doc)
}

pub fn resolve_config(doc: &ConfigDocument) -> Result<RunConfig, CliError> {
    let system = OscillatorSystem::new(doc.system.mass, doc.system.omega, doc.system.hbar)
        .map_err(|err| CliError::Config(format!("system: {err}")))?;

    let (source, coefficients) = match (&doc.coefficients.lindblad, &doc.coefficients.direct) {
        (Some(_), Some(_)) | (None, None) => {
            return Err(CliError::Config(
                "coefficients: exactly one of `lindblad` or `direct` must be given".into(),
            ));
        }
        (Some(lindblad), None) => {
            let vectors = lindblad_vectors(lindblad)?;
            let coefficients = build_coefficients(&vectors, system.hbar)
                .map_err(|err| CliError::Config(format!("coefficients.lindblad: {err}")))?;
            (CoefficientSource::LindbladVectors(Box::new(vectors)), coefficients)
        }
        (None, Some(direct)) => {
            let to_mat3 = |m: &[[f64; 3]; 3]| Mat3::from_fn(|i, j| m[i][j]);
            let coefficients = OpeningCoefficients::from_matrices(
                to_mat3(&direct.dqq),
                to_mat3(&direct.dpp),
                to_mat3(&direct.dqp),
                to_mat3(&direct.alpha),
                to_mat3(&direct.beta),
                to_mat3(&direct.lambda),
            )
            .map_err(|err| CliError::Config(format!("coefficients.direct: {err}")))?;
            (CoefficientSource::Direct, coefficients)
        }
    };
    // The direct path is user-asserted: admissibility is a warning, not an
    // error, since the moment equations accept free phenomenological values.
    let warnings = match source {
        CoefficientSource::Direct => coefficients.admissibility_warnings(system.hbar),
        CoefficientSource::LindbladVectors(_) => Vec::new(),
    };

    let cov = match (&doc.initial.cov_lower, &doc.initial.cov) {
        (Some(_), Some(_)) | (None, None) => {
            return Err(CliError::Config(
                "initial: exactly one of `cov_lower` or `cov` must be given".into(),
            ));
        }
        (Some(lower), None) => {
            if lower.len() != 21 {
                return Err(CliError::Config(format!(
                    "initial.cov_lower: expected 21 entries (row-major lower triangle), got {}",
                    lower.len()
                )));
            }
            let mut cov = Mat6::zeros();
            let mut at = 0;
            for i in 0..6 {
                for j in 0..=i {
                    cov[(i, j)] = lower[at];
                    cov[(j, i)] = lower[at];
                    at += 1;
                }
            }
            cov
        }
        (None, Some(full)) => Mat6::from_fn(|i, j| full[i][j]),
    };
    let initial = GaussianState::new(Vec6::from_row_slice(&doc.initial.mean), cov)
        .map_err(|err| CliError::Config(format!("initial: {err}")))?;

    if !(doc.grid.t_end.is_finite() && doc.grid.t_end > 0.0) {
        return Err(CliError::Config(format!(
            "grid.t_end: must be positive, got {}",
            doc.grid.t_end
        )));
    }
    if doc.grid.n_steps < 2 {
        return Err(CliError::Config(format!(
            "grid.n_steps: must be at least 2, got {}",
            doc.grid.n_steps
        )));
    }
    if !(doc.oracle.dt.is_finite() && doc.oracle.dt > 0.0) {
        return Err(CliError::Config(format!(
            "oracle.dt: must be positive, got {}",
            doc.oracle.dt
        )));
    }

    Ok(RunConfig {
        system,
        source,
        coefficients,
        warnings,
        initial,
        t_end: doc.grid.t_end,
        n_steps: doc.grid.n_steps,
        outputs: OutputFlags {
            means: doc.output.means,
            covariances: doc.output.covariances,
            l3: doc.output.l3,
            l2: doc.output.l2,
        },
        oracle: doc.oracle.enabled,
        oracle_dt: doc.oracle.dt,
    })
}

fn lindblad_vectors(section: &LindbladSection) -> Result<LindbladVectors, CliError> {
    let unpack = |name: &str, pairs: &[[f64; 2]]| -> Result<Vec<Complex64>, CliError> {
        if pairs.len() != 6 {
            return Err(CliError::Config(format!(
                "coefficients.lindblad.{name}: expected 6 [re, im] pairs, got {}",
                pairs.len()
            )));
        }
        Ok(pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect())
    };
    let a = vec![
        unpack("a1", &section.a1)?,
        unpack("a2", &section.a2)?,
        unpack("a3", &section.a3)?,
    ];
    let b = vec![
        unpack("b1", &section.b1)?,
        unpack("b2", &section.b2)?,
        unpack("b3", &section.b3)?,
    ];
    LindbladVectors::from_slices(&a, &b)
        .map_err(|err| CliError::Config(format!("coefficients.lindblad: {err}")))
}

impl RunConfig {
    /// Reconstructs a document with the same semantics; parsing it again
    /// yields an equal `RunConfig`.
    pub fn to_document(&self) -> ConfigDocument {
        let coefficients = match &self.source {
            CoefficientSource::LindbladVectors(vectors) => {
                let pack = |v: &[Complex64; 6]| v.iter().map(|z| [z.re, z.im]).collect();
                CoefficientsSection {
                    lindblad: Some(LindbladSection {
                        a1: pack(&vectors.a[0]),
                        a2: pack(&vectors.a[1]),
                        a3: pack(&vectors.a[2]),
                        b1: pack(&vectors.b[0]),
                        b2: pack(&vectors.b[1]),
                        b3: pack(&vectors.b[2]),
                    }),
                    direct: None,
                }
            }
            CoefficientSource::Direct => {
                let from_mat3 = |m: &Mat3| {
                    let mut out = [[0.0; 3]; 3];
                    for i in 0..3 {
                        for j in 0..3 {
                            out[i][j] = m[(i, j)];
                        }
                    }
                    out
                };
                CoefficientsSection {
                    lindblad: None,
                    direct: Some(DirectSection {
                        dqq: from_mat3(&self.coefficients.dqq),
                        dpp: from_mat3(&self.coefficients.dpp),
                        dqp: from_mat3(&self.coefficients.dqp),
                        alpha: from_mat3(&self.coefficients.alpha),
                        beta: from_mat3(&self.coefficients.beta),
                        lambda: from_mat3(&self.coefficients.lambda),
                    }),
                }
            }
        };
        let mut cov_lower = Vec::with_capacity(21);
        for i in 0..6 {
            for j in 0..=i {
                cov_lower.push(self.initial.cov[(i, j)]);
            }
        }
        let mut mean = [0.0; 6];
        mean.copy_from_slice(self.initial.mean.as_slice());
        ConfigDocument {
            system: SystemSection {
                mass: self.system.mass,
                omega: self.system.omega,
                hbar: self.system.hbar,
            },
            coefficients,
            initial: InitialSection {
                mean,
                cov_lower: Some(cov_lower),
                cov: None,
            },
            grid: GridSection {
                t_end: self.t_end,
                n_steps: self.n_steps,
            },
            output: OutputSection {
                means: self.outputs.means,
                covariances: self.outputs.covariances,
                l3: self.outputs.l3,
                l2: self.outputs.l2,
            },
            oracle: OracleSection {
                enabled: self.oracle,
                dt: self.oracle_dt,
            },
        }
    }

    /// Serializes the reconstructed document as TOML.
    pub fn to_toml(&self) -> String {
        toml::to_string(&self.to_document()).expect("config serialization cannot fail")
    }
}
