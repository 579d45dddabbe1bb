//! Lowering of logical circuits to native node-pair operations.
//!
//! Single-qubit gates go through the ZXZ Euler form and cost at most three
//! native ops; CNOT is one CISWAP. [`search`] approximates single-qubit
//! gates with words over the three fixed-angle gates.

pub mod circuit;
pub mod euler;
pub mod program;
pub mod search;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::ControlledIswap;
use crate::error::{Error, Result};
use crate::unitary::Unitary;

pub use circuit::{logical_unitary, simulate_logical, simulate_reference, Circuit, GateApplication};
pub use euler::{euler_decompose, EulerAngles};
pub use program::{NativeOp, NativeProgram};
pub use search::{approximate_fixed_set, FixedGate, FixedSetMatch, SearchOutcome};

/// Angles with magnitude at or below this are dropped from lowered programs.
const ANGLE_EPS: f64 = 1e-14;

/// Sign convention of the ISWAP(θ) instruction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IswapConvention {
    /// Off-diagonal +i·sin(θ/2); code-space action R_x(−θ).
    #[default]
    Ideal,
    /// Off-diagonal −i·sin(θ/2), as produced by the two-node dynamics; code-space
    /// action R_x(θ).
    Extracted,
}

/// What the native instructions physically do. Shared by the compiler and the
/// simulator so that a program is always executed under the model it was
/// compiled for.
///
/// CISWAP swaps the target pair when the control pair's first qubit is set.
/// On code words the swapped branch is multiplied by `ciswap_swap_phase` and
/// the idle branch by `ciswap_idle_phase`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateModel {
    pub iswap_convention: IswapConvention,
    pub ciswap_swap_phase: Complex64,
    pub ciswap_idle_phase: Complex64,
}

impl Default for GateModel {
    fn default() -> Self {
        GateModel::ideal()
    }
}

impl GateModel {
    pub fn ideal() -> Self {
        let one = Complex64::new(1.0, 0.0);
        GateModel { iswap_convention: IswapConvention::Ideal, ciswap_swap_phase: one, ciswap_idle_phase: one }
    }

    /// Calibrates against a gate extracted from the two-node dynamics: the
    /// swap amplitude and the blocked-branch phase become the CISWAP phases.
    pub fn from_extracted(gate: &ControlledIswap) -> Self {
        let unit = |z: Complex64| if z.norm() > 0.0 { z / z.norm() } else { Complex64::new(1.0, 0.0) };
        GateModel {
            iswap_convention: IswapConvention::Extracted,
            ciswap_swap_phase: unit(gate.unitary.get(0, 1)),
            ciswap_idle_phase: unit(gate.unitary.get(2, 2)),
        }
    }

    pub fn has_ideal_ciswap(&self) -> bool {
        let one = Complex64::new(1.0, 0.0);
        (self.ciswap_swap_phase - one).norm() < 1e-15 && (self.ciswap_idle_phase - one).norm() < 1e-15
    }

    /// ISWAP angle whose code-space action is R_x(`x_angle`).
    pub fn iswap_angle_for(&self, x_angle: f64) -> f64 {
        match self.iswap_convention {
            IswapConvention::Ideal => -x_angle,
            IswapConvention::Extracted => x_angle,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, z) in [("ciswap_swap_phase", self.ciswap_swap_phase), ("ciswap_idle_phase", self.ciswap_idle_phase)] {
            if !z.re.is_finite() || !z.im.is_finite() || (z.norm() - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidParameter { name, reason: format!("must be a unit-modulus phase, got {z}") });
            }
        }
        Ok(())
    }
}

/// Lowers a 2×2 unitary acting on logical qubit `target`.
///
/// Emits, in time order, PHASE(γ), ISWAP realising R_x(β), PHASE(α), with
/// zero angles omitted, and global phase δ.
pub fn lower_single_qubit(u: &Unitary, target: usize, model: &GateModel) -> Result<NativeProgram> {
    let e = euler_decompose(u)?;
    let mut p = NativeProgram::new(target + 1);
    if e.gamma.abs() > ANGLE_EPS {
        p.push(NativeOp::Phase { pair: target, theta: e.gamma, phi: 0.0 });
    }
    if e.beta.abs() > ANGLE_EPS {
        p.push(NativeOp::Iswap { pair: target, theta: model.iswap_angle_for(e.beta) });
    }
    if e.alpha.abs() > ANGLE_EPS {
        p.push(NativeOp::Phase { pair: target, theta: e.alpha, phi: 0.0 });
    }
    p.add_phase(e.delta);
    Ok(p)
}

/// Lowers an encoded CNOT to one CISWAP, plus a PHASE on the control pair
/// when the model's CISWAP carries branch phases.
pub fn lower_cnot(control: usize, target: usize, qubit_count: usize, model: &GateModel) -> NativeProgram {
    let mut p = NativeProgram::new(qubit_count);
    p.push(NativeOp::Ciswap { control, target });
    if !model.has_ideal_ciswap() {
        // action = p·|0><0| ⊗ I + s·|1><1| ⊗ X; R_z(θ) on the control with
        // e^{iθ} = p/s leaves e^{−iθ/2}·p·CNOT.
        let theta = (model.ciswap_idle_phase / model.ciswap_swap_phase).arg();
        p.push(NativeOp::Phase { pair: control, theta, phi: 0.0 });
        p.add_phase(theta / 2.0 - model.ciswap_idle_phase.arg());
    }
    p
}

pub fn lower_circuit(circuit: &Circuit, model: &GateModel) -> Result<NativeProgram> {
    circuit.validate()?;
    model.validate()?;
    let mut program = NativeProgram::new(circuit.qubit_count);
    for g in &circuit.gates {
        let piece = match g.gate.arity() {
            1 => lower_single_qubit(&g.gate.matrix(), g.targets[0], model)?,
            _ => lower_cnot(g.targets[0], g.targets[1], circuit.qubit_count, model),
        };
        program.extend(piece);
    }
    program.qubit_count = circuit.qubit_count;
    Ok(program)
}
