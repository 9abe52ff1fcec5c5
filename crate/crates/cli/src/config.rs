//! Settings file for the command-line tool.
//!
//! The file is JSON in the same style as the reports. Every key is optional;
//! command-line flags override it and built-in defaults fill the rest.

use serde::Deserialize;

use exclusivity::{Error, Result, ThetaConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThetaOverrides {
    pub tolerance: Option<f64>,
    pub max_iterations: Option<usize>,
    pub step_parameter: Option<f64>,
    pub residual_balance_factor: Option<f64>,
    pub eig_tolerance: Option<f64>,
}

impl ThetaOverrides {
    pub fn apply(&self, cfg: &mut ThetaConfig) {
        if let Some(v) = self.tolerance {
            cfg.tolerance = v;
        }
        if let Some(v) = self.max_iterations {
            cfg.max_iterations = v;
        }
        if let Some(v) = self.step_parameter {
            cfg.step_parameter = v;
        }
        if let Some(v) = self.residual_balance_factor {
            cfg.residual_balance_factor = v;
        }
        if let Some(v) = self.eig_tolerance {
            cfg.eig_tolerance = v;
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FileConfig {
    pub format: Option<Format>,
    pub theta: ThetaOverrides,
    /// Seconds allowed for the independence search.
    pub alpha_budget: Option<f64>,
    /// Seconds per row allowed for the independence search in `table`.
    pub table_alpha_budget: Option<f64>,
    /// Tolerance used by `validate-repr`.
    pub validation_tolerance: Option<f64>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub epsilon: Option<f64>,
    pub rounds: Option<u64>,
    pub stake: Option<f64>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<FileConfig> {
        let cfg: FileConfig = serde_json::from_str(text)?;
        let mut theta = ThetaConfig::default();
        cfg.theta.apply(&mut theta);
        theta.validate()?;
        for (name, v) in [("alpha_budget", cfg.alpha_budget), ("table_alpha_budget", cfg.table_alpha_budget)] {
            if let Some(v) = v {
                seconds(name, v)?;
            }
        }
        Ok(cfg)
    }
}

pub fn seconds(name: &str, v: f64) -> Result<std::time::Duration> {
    std::time::Duration::try_from_secs_f64(v)
        .map_err(|_| Error::Input(format!("{name} must be a non-negative number of seconds, got {v}")))
}
