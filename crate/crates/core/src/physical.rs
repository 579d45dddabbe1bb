//! Raw parameters of the two-node system and the effective couplings derived
//! from them in the dispersive (virtual-photon) regime.
//!
//! All frequencies are angular, rad/s, with ħ = 1. Spatial phase factors
//! `exp(i k·r)` are taken as unity (ensembles much smaller than the cavity
//! wavelength), and each ensemble is reduced to one collective two-level
//! amplitude.

use ndarray::{array, Array2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on |g/Δ| above which the second-order elimination of the
/// cavity modes is reported as questionable.
pub const DEFAULT_DISPERSIVE_THRESHOLD: f64 = 0.1;

/// Photon number in the first node's microcavity. The effective model
/// conserves it, so it labels an invariant sector of the dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhotonNumber {
    Zero,
    One,
}

impl PhotonNumber {
    pub const ALL: [PhotonNumber; 2] = [PhotonNumber::Zero, PhotonNumber::One];

    pub fn count(self) -> u8 {
        match self {
            PhotonNumber::Zero => 0,
            PhotonNumber::One => 1,
        }
    }

    fn as_f64(self) -> f64 {
        f64::from(self.count())
    }
}

impl TryFrom<u8> for PhotonNumber {
    type Error = Error;

    fn try_from(n: u8) -> Result<Self> {
        match n {
            0 => Ok(PhotonNumber::Zero),
            1 => Ok(PhotonNumber::One),
            _ => Err(Error::InvalidParameter {
                name: "n",
                reason: format!("photon number must be 0 or 1, got {n}"),
            }),
        }
    }
}

/// Physical constants of the two processing nodes, their shared cavity mode
/// σ and the per-node microcavity modes π₁, π₂.
///
/// Serializes as a flat JSON object with these field names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub n_atoms_1: u64,
    pub n_atoms_2: u64,
    pub g_sigma_1: f64,
    pub g_sigma_2: f64,
    /// Relative phase arg(g_σ⁽¹⁾ g_σ⁽²⁾*) of the two common-mode couplings.
    #[serde(default)]
    pub sigma_phase: f64,
    pub g_pi_1: f64,
    pub g_pi_2: f64,
    pub omega_0: f64,
    pub omega_1: f64,
    pub omega_2: f64,
    pub omega_sigma: f64,
    pub omega_pi_1: f64,
    pub omega_pi_2: f64,
    pub delta_sigma_1: f64,
    pub delta_sigma_2: f64,
    pub delta_pi_1: f64,
    pub delta_pi_2: f64,
}

impl PhysicalParams {
    /// Identical nodes of `n_atoms` atoms each, with the mode detunings
    /// chosen to satisfy the interference condition Δ_m^(π) = −Δ_m^(σ) and
    /// node 2's frequency tuned onto the resonance condition.
    ///
    /// Mode frequencies follow Δ = ω₀ − ω_k.
    pub fn symmetric(
        n_atoms: u64,
        g_sigma: f64,
        g_pi: f64,
        delta_sigma: f64,
        omega_atomic: f64,
    ) -> Self {
        PhysicalParams {
            n_atoms_1: n_atoms,
            n_atoms_2: n_atoms,
            g_sigma_1: g_sigma,
            g_sigma_2: g_sigma,
            sigma_phase: 0.0,
            g_pi_1: g_pi,
            g_pi_2: g_pi,
            omega_0: omega_atomic,
            omega_1: omega_atomic,
            omega_2: omega_atomic,
            omega_sigma: omega_atomic - delta_sigma,
            omega_pi_1: omega_atomic + delta_sigma,
            omega_pi_2: omega_atomic + delta_sigma,
            delta_sigma_1: delta_sigma,
            delta_sigma_2: delta_sigma,
            delta_pi_1: -delta_sigma,
            delta_pi_2: -delta_sigma,
        }
        .with_resonance_tuned()
    }

    /// Reference-scale preset: N = 10⁴ atoms per node, g_σ = 10⁶ rad/s, Δ_σ set
    /// so that the full-swap time π/(2NΩ_σ) is 10⁻⁸ s, and g_π₁ tuned to the
    /// perfect-blockade point |Ω₁^(π)| = √3|S|. Node 2 has no microcavity
    /// coupling; it never holds a control photon.
    pub fn reference_scale() -> Self {
        let n = 1.0e4_f64;
        let g = 1.0e6_f64;
        let t_gate = 1.0e-8_f64;
        // t = π/(2 N g²/Δ)  =>  Δ = 2 N g² t / π
        let delta = 2.0 * n * g * g * t_gate / std::f64::consts::PI;
        let mut p = PhysicalParams::symmetric(1e4 as u64, g, 0.0, delta, 2.0 * std::f64::consts::PI * 1.0e9);
        p.g_pi_2 = 0.0;
        p.with_pi_ratio(3f64.sqrt())
    }

    /// Returns a copy with ω₂ chosen so that the two single-excitation
    /// states are degenerate in the photon-free sector.
    pub fn with_resonance_tuned(mut self) -> Self {
        let c = self.raw_couplings();
        let n1 = self.n_atoms_1 as f64;
        let n2 = self.n_atoms_2 as f64;
        self.omega_2 = self.omega_1 + n1 * (c.omega_1_sigma + c.omega_1_pi)
            - n2 * (c.omega_2_sigma + c.omega_2_pi);
        self
    }

    /// Returns a copy with |g_π₁| set so that |Ω₁^(π)| = `ratio`·|S|, with
    /// the resonance condition re-tuned afterwards.
    pub fn with_pi_ratio(mut self, ratio: f64) -> Self {
        let s = self.raw_couplings().s_coupling.norm();
        self.g_pi_1 = (ratio * s * self.delta_pi_1.abs()).sqrt();
        self.with_resonance_tuned()
    }

    /// Multiplies every atom-field coupling by `lambda`.
    pub fn scale_couplings(mut self, lambda: f64) -> Self {
        self.g_sigma_1 *= lambda;
        self.g_sigma_2 *= lambda;
        self.g_pi_1 *= lambda;
        self.g_pi_2 *= lambda;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_atoms_1 == 0 {
            return Err(invalid("n_atoms_1", "atom count must be at least 1"));
        }
        if self.n_atoms_2 == 0 {
            return Err(invalid("n_atoms_2", "atom count must be at least 1"));
        }
        let detunings = [
            ("delta_sigma_1", self.delta_sigma_1),
            ("delta_sigma_2", self.delta_sigma_2),
            ("delta_pi_1", self.delta_pi_1),
            ("delta_pi_2", self.delta_pi_2),
        ];
        for (name, d) in detunings {
            if d == 0.0 || !d.is_finite() {
                return Err(invalid(name, format!("detuning must be finite and nonzero, got {d}")));
            }
        }
        let rest = [
            ("g_sigma_1", self.g_sigma_1),
            ("g_sigma_2", self.g_sigma_2),
            ("sigma_phase", self.sigma_phase),
            ("g_pi_1", self.g_pi_1),
            ("g_pi_2", self.g_pi_2),
            ("omega_0", self.omega_0),
            ("omega_1", self.omega_1),
            ("omega_2", self.omega_2),
            ("omega_sigma", self.omega_sigma),
            ("omega_pi_1", self.omega_pi_1),
            ("omega_pi_2", self.omega_pi_2),
        ];
        for (name, v) in rest {
            if !v.is_finite() {
                return Err(invalid(name, format!("must be finite, got {v}")));
            }
        }
        Ok(())
    }

    /// Largest |g/Δ| over the four atom-mode couplings.
    pub fn dispersive_ratio(&self) -> f64 {
        [
            self.g_sigma_1 / self.delta_sigma_1,
            self.g_sigma_2 / self.delta_sigma_2,
            self.g_pi_1 / self.delta_pi_1,
            self.g_pi_2 / self.delta_pi_2,
        ]
        .iter()
        .fold(0.0_f64, |m, r| m.max(r.abs()))
    }

    fn raw_couplings(&self) -> RawCouplings {
        let n1 = self.n_atoms_1 as f64;
        let n2 = self.n_atoms_2 as f64;
        let g12 = Complex64::from_polar(self.g_sigma_1 * self.g_sigma_2, self.sigma_phase);
        let omega_cap_sigma = g12 * 0.5 * (1.0 / self.delta_sigma_1 + 1.0 / self.delta_sigma_2);
        RawCouplings {
            omega_cap_sigma,
            omega_1_sigma: self.g_sigma_1 * self.g_sigma_1 / self.delta_sigma_1,
            omega_1_pi: self.g_pi_1 * self.g_pi_1 / self.delta_pi_1,
            omega_2_sigma: self.g_sigma_2 * self.g_sigma_2 / self.delta_sigma_2,
            omega_2_pi: self.g_pi_2 * self.g_pi_2 / self.delta_pi_2,
            s_coupling: omega_cap_sigma * (n1 * n2).sqrt(),
        }
    }
}

fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}

struct RawCouplings {
    omega_cap_sigma: Complex64,
    omega_1_sigma: f64,
    omega_1_pi: f64,
    omega_2_sigma: f64,
    omega_2_pi: f64,
    s_coupling: Complex64,
}

/// Effective frequencies and couplings of the reduced two-node model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedCouplings {
    /// Ω_σ, the virtual-photon exchange rate per atom pair.
    pub omega_cap_sigma: Complex64,
    /// Ω₁^(σ) = |g_σ⁽¹⁾|²/Δ₁^(σ).
    pub omega_1_sigma: f64,
    /// Ω₁^(π₁) = |g_π₁⁽¹⁾|²/Δ₁^(π₁).
    pub omega_1_pi: f64,
    pub omega_2_sigma: f64,
    pub omega_2_pi: f64,
    /// S = √(N₁N₂)·Ω_σ, the collective exchange coupling.
    pub s_coupling: Complex64,
    n_atoms_1: f64,
    n_atoms_2: f64,
    omega_1: f64,
    omega_2: f64,
    /// ϖ₁(0) − ϖ₂(0), evaluated without forming the large node energies.
    imbalance_0: f64,
    /// Non-fatal findings, e.g. a coupling outside the dispersive regime.
    pub warnings: Vec<String>,
}

/// Computes the effective couplings with the default dispersive threshold.
pub fn derive_couplings(params: &PhysicalParams) -> Result<DerivedCouplings> {
    derive_couplings_with(params, DEFAULT_DISPERSIVE_THRESHOLD)
}

pub fn derive_couplings_with(params: &PhysicalParams, dispersive_threshold: f64) -> Result<DerivedCouplings> {
    params.validate()?;
    let raw = params.raw_couplings();
    let n1 = params.n_atoms_1 as f64;
    let n2 = params.n_atoms_2 as f64;

    let mut warnings = Vec::new();
    let ratio = params.dispersive_ratio();
    if ratio >= dispersive_threshold {
        let msg = format!("max |g/Δ| = {ratio:.3e} is not below {dispersive_threshold}; dispersive elimination may be inaccurate");
        log::warn!("{msg}");
        warnings.push(msg);
    }

    let imbalance_0 = (params.omega_2 - params.omega_1) - n1 * (raw.omega_1_sigma + raw.omega_1_pi)
        + n2 * (raw.omega_2_sigma + raw.omega_2_pi);

    Ok(DerivedCouplings {
        omega_cap_sigma: raw.omega_cap_sigma,
        omega_1_sigma: raw.omega_1_sigma,
        omega_1_pi: raw.omega_1_pi,
        omega_2_sigma: raw.omega_2_sigma,
        omega_2_pi: raw.omega_2_pi,
        s_coupling: raw.s_coupling,
        n_atoms_1: n1,
        n_atoms_2: n2,
        omega_1: params.omega_1,
        omega_2: params.omega_2,
        imbalance_0,
        warnings,
    })
}

impl DerivedCouplings {
    /// ϖ₁(n): energy of the state with node 1 excited.
    pub fn varpi_1(&self, n: PhotonNumber) -> f64 {
        let shifted = self.omega_1 + 2.0 * n.as_f64() * self.omega_1_pi;
        (self.n_atoms_1 / 2.0 - 1.0) * shifted + self.n_atoms_2 / 2.0 * self.omega_2
            - self.n_atoms_1 * (self.omega_1_sigma + self.omega_1_pi)
    }

    /// ϖ₂(n): energy of the state with node 2 excited.
    pub fn varpi_2(&self, n: PhotonNumber) -> f64 {
        let shifted = self.omega_1 + 2.0 * n.as_f64() * self.omega_1_pi;
        self.n_atoms_1 / 2.0 * shifted + (self.n_atoms_2 / 2.0 - 1.0) * self.omega_2
            - self.n_atoms_2 * (self.omega_2_sigma + self.omega_2_pi)
    }

    /// ϖ(n) = (ϖ₁(n) + ϖ₂(n))/2.
    pub fn varpi_mean(&self, n: PhotonNumber) -> f64 {
        0.5 * (self.varpi_1(n) + self.varpi_2(n))
    }

    /// ϖ(n) − ϖ(0) = n(N₁ − 1)Ω₁^(π), the photon-induced mean shift.
    pub fn varpi_shift(&self, n: PhotonNumber) -> f64 {
        n.as_f64() * (self.n_atoms_1 - 1.0) * self.omega_1_pi
    }

    /// ϖ₁(n) − ϖ₂(n), computed from small quantities only.
    pub fn node_imbalance(&self, n: PhotonNumber) -> f64 {
        self.imbalance_0 - 2.0 * n.as_f64() * self.omega_1_pi
    }

    /// Δ_(n)/2 = n·Ω₁^(π).
    pub fn detuning_split(&self, n: PhotonNumber) -> f64 {
        n.as_f64() * self.omega_1_pi
    }

    /// κ_(n) = √(n²(Ω₁^(π))² + |S|²).
    pub fn kappa(&self, n: PhotonNumber) -> f64 {
        self.detuning_split(n).hypot(self.s_coupling.norm())
    }
}

/// Residual of the node-degeneracy (resonance) condition in the photon-free
/// sector, ω₂ − ω₁ + N₂(Ω₂^(σ) + Ω₂^(π₂)) − N₁(Ω₁^(σ) + Ω₁^(π₁)).
///
/// Zero makes ϖ₁(0) = ϖ₂(0), which is what the closed-form solution needs.
pub fn check_resonance_condition(params: &PhysicalParams, couplings: &DerivedCouplings) -> f64 {
    let n1 = params.n_atoms_1 as f64;
    let n2 = params.n_atoms_2 as f64;
    (params.omega_2 - params.omega_1) + n2 * (couplings.omega_2_sigma + couplings.omega_2_pi)
        - n1 * (couplings.omega_1_sigma + couplings.omega_1_pi)
}

/// Per-node residuals Δ_m^(σ) + Δ_m^(π_m) of the mode-interference
/// condition. Both zero means the σ–π mode-mixing term cancels and the
/// microcavity photon number is conserved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterferenceResiduals {
    pub node_1: f64,
    pub node_2: f64,
}

impl InterferenceResiduals {
    /// True when both residuals are below `rel_tol` relative to the node's
    /// σ detuning.
    pub fn is_valid(&self, params: &PhysicalParams, rel_tol: f64) -> bool {
        self.node_1.abs() <= rel_tol * params.delta_sigma_1.abs()
            && self.node_2.abs() <= rel_tol * params.delta_sigma_2.abs()
    }
}

pub fn check_interference_condition(params: &PhysicalParams) -> InterferenceResiduals {
    InterferenceResiduals {
        node_1: params.delta_sigma_1 + params.delta_pi_1,
        node_2: params.delta_sigma_2 + params.delta_pi_2,
    }
}

/// Generator M(n) of one photon sector, with dc/dt = i·M(n)·c and
/// M(n) = [[ϖ₁(n), −S], [−S*, ϖ₂(n)]].
///
/// Stored as mean + traceless part so the small node imbalance is never
/// recovered by subtracting two large node energies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorGenerator {
    /// ϖ(n), the trace part.
    pub mean: f64,
    /// (ϖ₁(n) − ϖ₂(n))/2.
    pub half_imbalance: f64,
    /// S.
    pub coupling: Complex64,
}

impl SectorGenerator {
    /// Half the eigenvalue splitting, √(half_imbalance² + |S|²).
    pub fn half_splitting(&self) -> f64 {
        self.half_imbalance.hypot(self.coupling.norm())
    }

    /// Traceless part [[h, −S], [−S*, −h]].
    pub fn traceless(&self) -> Array2<Complex64> {
        let h = Complex64::new(self.half_imbalance, 0.0);
        array![[h, -self.coupling], [-self.coupling.conj(), -h]]
    }

    /// The full Hermitian 2×2 matrix.
    pub fn matrix(&self) -> Array2<Complex64> {
        let mut m = self.traceless();
        m[[0, 0]] += self.mean;
        m[[1, 1]] += self.mean;
        m
    }
}

pub fn effective_hamiltonian(couplings: &DerivedCouplings, n: PhotonNumber) -> SectorGenerator {
    SectorGenerator {
        mean: couplings.varpi_mean(n),
        half_imbalance: 0.5 * couplings.node_imbalance(n),
        coupling: couplings.s_coupling,
    }
}
