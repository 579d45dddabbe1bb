pub mod blockade;
pub mod compile;
pub mod fidelity;
pub mod simulate;
pub mod truth_table;

use macqc_core::dynamics::{extract_controlled_iswap, ExtractionOptions};
use macqc_core::physical::derive_couplings;
use macqc_core::compiler::GateModel;

use crate::config::ScenarioConfig;
use crate::error::CliError;

/// Ideal model, or one calibrated against the scenario's extracted gate.
pub fn gate_model(config: &ScenarioConfig, calibrated: bool) -> Result<GateModel, CliError> {
    if !calibrated {
        return Ok(GateModel::ideal());
    }
    let couplings = derive_couplings(&config.physical)?;
    let gate = extract_controlled_iswap(&couplings, &ExtractionOptions::default())?;
    Ok(GateModel::from_extracted(&gate))
}
