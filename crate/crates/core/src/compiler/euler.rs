//! ZXZ Euler decomposition U = e^{iδ}·R_z(α)·R_x(β)·R_z(γ).

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{rx, rz};
use crate::unitary::Unitary;

/// Off-diagonal (or diagonal) magnitude below which a matrix is treated as
/// exactly diagonal (or anti-diagonal).
const DEGENERATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EulerAngles {
    pub fn reconstruct(&self) -> Unitary {
        (&(&rz(self.alpha) * &rx(self.beta)) * &rz(self.gamma)).scaled(Complex64::from_polar(1.0, self.delta))
    }
}

/// Decomposes a 2×2 unitary.
///
/// Canonical form: δ ∈ (−π/2, π/2], β ∈ [0, π]; γ = 0 whenever the z
/// angles are degenerate (β = 0 or β = π).
pub fn euler_decompose(u: &Unitary) -> Result<EulerAngles> {
    if u.dim() != 2 {
        return Err(Error::Dimension { expected: 2, actual: u.dim() });
    }
    let dev = u.unitarity_deviation();
    if dev > 1e-9 {
        return Err(Error::NotUnitary { deviation: dev });
    }
    let det = u.get(0, 0) * u.get(1, 1) - u.get(0, 1) * u.get(1, 0);
    let mut delta = 0.5 * det.arg();
    if delta <= -FRAC_PI_2 + 1e-12 {
        delta += PI;
    }
    // V = e^{−iδ}U ∈ SU(2):
    //   V00 = e^{−i(α+γ)/2} cos(β/2),  V10 = −i e^{i(α−γ)/2} sin(β/2)
    let unphase = Complex64::from_polar(1.0, -delta);
    let v00 = u.get(0, 0) * unphase;
    let v10 = u.get(1, 0) * unphase;
    let v11 = u.get(1, 1) * unphase;
    let i = Complex64::new(0.0, 1.0);

    let (alpha, beta, gamma) = if v10.norm() <= DEGENERATE_TOL {
        (2.0 * v11.arg(), 0.0, 0.0)
    } else if v00.norm() <= DEGENERATE_TOL {
        (2.0 * (i * v10).arg(), PI, 0.0)
    } else {
        let sum_half = -v00.arg();
        let diff_half = (i * v10).arg();
        (sum_half + diff_half, 2.0 * v10.norm().atan2(v00.norm()), sum_half - diff_half)
    };
    Ok(EulerAngles { delta, alpha, beta, gamma })
}
