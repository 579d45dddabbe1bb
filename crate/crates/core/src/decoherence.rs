//! Closed-form iSWAP fidelity under atomic dephasing and cavity loss.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bound on 2Γt + πγ/(2Δ) for fault-tolerant operation.
pub const FAULT_TOLERANCE_THRESHOLD: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoherenceParams {
    /// Γ, atomic phase relaxation rate.
    pub gamma_atomic: f64,
    /// γ, cavity loss rate.
    pub gamma_cavity: f64,
    /// Δ, common-cavity detuning.
    pub delta: f64,
}

impl DecoherenceParams {
    pub fn new(gamma_atomic: f64, gamma_cavity: f64, delta: f64) -> Result<Self> {
        let d = DecoherenceParams { gamma_atomic, gamma_cavity, delta };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name, reason: &str| Err(Error::InvalidParameter { name, reason: reason.into() });
        if !(self.gamma_atomic >= 0.0) || !self.gamma_atomic.is_finite() {
            return bad("gamma_atomic", "must be finite and non-negative");
        }
        if !(self.gamma_cavity >= 0.0) || !self.gamma_cavity.is_finite() {
            return bad("gamma_cavity", "must be finite and non-negative");
        }
        if !(self.delta > 0.0) || !self.delta.is_finite() {
            return bad("delta", "must be finite and positive");
        }
        Ok(())
    }

    /// 2Γt + πγ/(2Δ).
    pub fn error_exponent(&self, t: f64) -> f64 {
        2.0 * self.gamma_atomic * t + PI * self.gamma_cavity / (2.0 * self.delta)
    }
}

/// F = exp(−2Γt − πγ/(2Δ))·cosh²(πγ/(4Δ)).
pub fn iswap_fidelity(d: &DecoherenceParams, t: f64) -> f64 {
    let x = PI * d.gamma_cavity / (4.0 * d.delta);
    (-d.error_exponent(t)).exp() * x.cosh().powi(2)
}

/// 10⁻⁴ − (2Γt + πγ/(2Δ)); non-negative iff the criterion holds.
pub fn fault_tolerance_margin(d: &DecoherenceParams, t: f64) -> f64 {
    FAULT_TOLERANCE_THRESHOLD - d.error_exponent(t)
}

/// t = π/(2NΩ_σ).
pub fn gate_time(n_atoms: f64, omega_sigma: f64) -> Result<f64> {
    if !(n_atoms >= 1.0) || !n_atoms.is_finite() {
        return Err(Error::InvalidParameter { name: "n_atoms", reason: format!("must be at least 1, got {n_atoms}") });
    }
    if !(omega_sigma.abs() > 0.0) || !omega_sigma.is_finite() {
        return Err(Error::InvalidParameter { name: "omega_sigma", reason: format!("must be non-zero, got {omega_sigma}") });
    }
    Ok(PI / (2.0 * n_atoms * omega_sigma.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FidelityRow {
    pub gamma_atomic: f64,
    pub gamma_cavity: f64,
    pub delta: f64,
    pub t: f64,
    pub fidelity: f64,
    pub margin: f64,
}

impl FidelityRow {
    pub fn evaluate(d: &DecoherenceParams, t: f64) -> Self {
        FidelityRow {
            gamma_atomic: d.gamma_atomic,
            gamma_cavity: d.gamma_cavity,
            delta: d.delta,
            t,
            fidelity: iswap_fidelity(d, t),
            margin: fault_tolerance_margin(d, t),
        }
    }

    pub fn within_threshold(&self) -> bool {
        self.margin >= 0.0
    }
}

pub const SWEEP_CSV_HEADER: &str = "gamma_atomic,gamma_cavity,delta,t,fidelity,margin";

/// CSV with [`SWEEP_CSV_HEADER`], numbers to 12 significant digits.
pub fn sweep_csv(rows: &[FidelityRow]) -> String {
    let mut s = String::from(SWEEP_CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e}",
            r.gamma_atomic, r.gamma_cavity, r.delta, r.t, r.fidelity, r.margin
        );
    }
    s
}
