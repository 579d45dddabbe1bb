//! Scenario configuration files.

use std::path::{Path, PathBuf};

use macqc_core::decoherence::DecoherenceParams;
use macqc_core::physical::PhysicalParams;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Parameters a sweep may scan.
pub const SWEEP_PARAMETERS: [&str; 5] = ["pi_ratio", "gamma_atomic", "gamma_cavity", "delta", "t"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub parameter: String,
    #[serde(default)]
    pub min: f64,
    #[serde(default)]
    pub max: f64,
    #[serde(default = "one")]
    pub steps: usize,
    /// Explicit grid; overrides min/max/steps when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

fn one() -> usize {
    1
}

impl Sweep {
    pub fn explicit(parameter: &str, values: Vec<f64>) -> Self {
        Sweep { parameter: parameter.to_string(), min: 0.0, max: 0.0, steps: values.len(), values: Some(values) }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !SWEEP_PARAMETERS.contains(&self.parameter.as_str()) {
            return Err(CliError::Usage(format!(
                "unknown sweep parameter `{}`; expected one of {}",
                self.parameter,
                SWEEP_PARAMETERS.join(", ")
            )));
        }
        match &self.values {
            Some(v) if v.is_empty() => Err(CliError::Usage(format!("sweep `{}` has an empty value list", self.parameter))),
            Some(v) if v.iter().any(|x| !x.is_finite()) => {
                Err(CliError::Usage(format!("sweep `{}` has a non-finite value", self.parameter)))
            }
            Some(_) => Ok(()),
            None if self.steps == 0 => Err(CliError::Usage(format!("sweep `{}` needs steps >= 1", self.parameter))),
            None if !self.min.is_finite() || !self.max.is_finite() || self.min > self.max => {
                Err(CliError::Usage(format!("sweep `{}` needs finite min <= max", self.parameter)))
            }
            None => Ok(()),
        }
    }

    /// Grid points; `steps` evenly spaced values from min to max inclusive.
    pub fn grid(&self) -> Vec<f64> {
        if let Some(v) = &self.values {
            return v.clone();
        }
        if self.steps == 1 {
            return vec![self.min];
        }
        let span = self.max - self.min;
        (0..self.steps).map(|k| self.min + span * k as f64 / (self.steps - 1) as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub physical: PhysicalParams,
    pub decoherence: DecoherenceParams,
    #[serde(default)]
    pub sweeps: Vec<Sweep>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let physical = PhysicalParams::reference_scale();
        let decoherence = DecoherenceParams { gamma_atomic: 0.0, gamma_cavity: 0.0, delta: physical.delta_sigma_1.abs() };
        ScenarioConfig { name: "reference-scale".into(), physical, decoherence, sweeps: Vec::new(), seed: 0, output: None }
    }
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: ScenarioConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.physical.validate()?;
        self.decoherence.validate()?;
        self.sweeps.iter().try_for_each(Sweep::validate)
    }

    pub fn sweep(&self, parameter: &str) -> Option<&Sweep> {
        self.sweeps.iter().find(|s| s.parameter == parameter)
    }

    /// SHA-256 of the canonical JSON serialisation, hex encoded.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serialises");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}
