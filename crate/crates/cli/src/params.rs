//! Run parameters merged from an optional JSON config file and flags.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

/// Flat parameter set shared by every subcommand. Each field mirrors a
/// flag (dashes become underscores); flags win over the file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub json: Option<bool>,

    pub suite: Option<String>,
    pub samples: Option<usize>,
    pub beta_grid: Option<usize>,
    pub etas: Option<Vec<f64>>,

    pub eta: Option<f64>,
    pub beta: Option<f64>,
    pub beta_cos: Option<f64>,
    pub beta_sin: Option<f64>,
    pub phi: Option<f64>,
    pub theta1: Option<f64>,
    pub theta3: Option<f64>,
    pub rate: Option<f64>,

    pub band: Option<String>,
    pub steps: Option<usize>,
    pub grid: Option<usize>,

    pub n: Option<usize>,
    pub theta: Option<f64>,
    pub theta_min: Option<f64>,
    pub theta_max: Option<f64>,
    pub theta_steps: Option<usize>,
    pub m1: Option<usize>,
    pub m2: Option<usize>,
    pub l1: Option<usize>,
    pub l2: Option<usize>,
    pub t_max: Option<f64>,
    pub dt: Option<f64>,
}

macro_rules! overlay_fields {
    ($top:ident, $base:ident; $($field:ident),* $(,)?) => {
        Params { $($field: $top.$field.or($base.$field)),* }
    };
}

impl Params {
    /// Fields set in `self` win; the rest come from `base`.
    pub fn over(self, base: Params) -> Params {
        let top = self;
        overlay_fields!(top, base;
            out, tol, seed, json, suite, samples, beta_grid, etas,
            eta, beta, beta_cos, beta_sin, phi, theta1, theta3, rate,
            band, steps, grid, n, theta, theta_min, theta_max, theta_steps,
            m1, m2, l1, l2, t_max, dt,
        )
    }

    pub fn from_file(path: &Path) -> Result<Params, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Input(format!("invalid config {}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let angles = [
            ("eta", self.eta),
            ("beta", self.beta),
            ("beta_cos", self.beta_cos),
            ("beta_sin", self.beta_sin),
            ("phi", self.phi),
            ("theta1", self.theta1),
            ("theta3", self.theta3),
            ("rate", self.rate),
            ("theta", self.theta),
            ("theta_min", self.theta_min),
            ("theta_max", self.theta_max),
            ("t_max", self.t_max),
            ("dt", self.dt),
            ("tol", self.tol),
        ];
        for (name, value) in angles {
            if let Some(v) = value {
                if !v.is_finite() {
                    return Err(CliError::Input(format!("{name} must be finite, got {v}")));
                }
            }
        }
        if self.etas.iter().flatten().any(|v| !v.is_finite()) {
            return Err(CliError::Input("eta values must be finite".into()));
        }
        Ok(())
    }

    pub fn require<T: Copy>(value: Option<T>, name: &str) -> Result<T, CliError> {
        value.ok_or_else(|| CliError::Input(format!("missing required parameter --{}", name.replace('_', "-"))))
    }

    /// `beta` from the angle itself or from its cosine and/or sine.
    pub fn beta(&self) -> Result<Option<f64>, CliError> {
        resolve_beta(self.beta, self.beta_cos, self.beta_sin)
    }

    pub fn required_beta(&self) -> Result<f64, CliError> {
        self.beta()?
            .ok_or_else(|| CliError::Input("missing --beta (or --beta-cos / --beta-sin)".into()))
    }
}

const CONSISTENCY_TOL: f64 = 1e-9;

pub fn resolve_beta(beta: Option<f64>, cos: Option<f64>, sin: Option<f64>) -> Result<Option<f64>, CliError> {
    for (name, v) in [("--beta-cos", cos), ("--beta-sin", sin)] {
        if let Some(v) = v {
            if !(-1.0..=1.0).contains(&v) {
                return Err(CliError::Input(format!("{name} must lie in [-1, 1], got {v}")));
            }
        }
    }
    let from_trig = match (cos, sin) {
        (Some(c), Some(s)) => {
            let norm = c * c + s * s;
            if (norm - 1.0).abs() > CONSISTENCY_TOL {
                return Err(CliError::Input(format!(
                    "--beta-cos and --beta-sin are inconsistent: cos^2 + sin^2 = {norm}"
                )));
            }
            Some(s.atan2(c))
        }
        (Some(c), None) => Some(c.acos()),
        (None, Some(s)) => Some(s.asin()),
        (None, None) => None,
    };
    match (beta, from_trig) {
        (Some(b), Some(_)) => {
            let bad = cos.is_some_and(|c| (b.cos() - c).abs() > CONSISTENCY_TOL)
                || sin.is_some_and(|s| (b.sin() - s).abs() > CONSISTENCY_TOL);
            if bad {
                return Err(CliError::Input(format!(
                    "--beta {b} disagrees with the given cosine/sine"
                )));
            }
            Ok(Some(b))
        }
        (b, t) => Ok(b.or(t)),
    }
}
