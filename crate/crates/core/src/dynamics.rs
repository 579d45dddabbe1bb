//! Single-excitation dynamics of the two-node system.
//!
//! Within each photon sector n the amplitudes obey dc/dt = i·M(n)·c with
//! M(n) = ϖ(n)·I + K(n), K traceless. The exact propagator is
//!
//! ```text
//! exp(i M t) = e^{iϖt} [ cos(κt)·I + i·sin(κt)/κ · K ],   κ² = h² + |S|²
//! ```
//!
//! which for c(0) = (1, 0) gives the swap-and-blockade solution
//! c₁ = e^{iϖt}(cos κt + i h/κ sin κt), c₂ = −i e^{iϖt} S*/κ sin κt.
//! Under the resonance condition h = −n·Ω₁^(π), so κ = κ_(n).

use std::f64::consts::PI;
use std::fmt::Write as _;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::physical::{effective_hamiltonian, DerivedCouplings, PhotonNumber, SectorGenerator};
use crate::unitary::Unitary;

/// Relative resonance tolerance accepted by the closed form by default.
pub const DEFAULT_RESONANCE_TOL: f64 = 1e-9;
/// Relative tolerance on |Ω₁^(π)| = √3|S| for gate extraction.
pub const DEFAULT_SQRT3_TOL: f64 = 1e-9;
/// Default integrator step, in units of 1/rate.
pub const DEFAULT_STEP_FACTOR: f64 = 0.01;
/// Largest accepted step·rate.
pub const MAX_STEP_RATE: f64 = 0.1;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Amplitudes (c₁, c₂) of the states with node 1 or node 2 excited, in one
/// photon sector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorState {
    pub c1: Complex64,
    pub c2: Complex64,
}

impl SectorState {
    pub fn new(c1: Complex64, c2: Complex64) -> Self {
        SectorState { c1, c2 }
    }

    /// Excitation in node 1.
    pub fn node_1() -> Self {
        SectorState::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    /// Excitation in node 2.
    pub fn node_2() -> Self {
        SectorState::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c1.norm_sqr() + self.c2.norm_sqr()
    }

    pub fn scaled(&self, z: Complex64) -> Self {
        SectorState::new(self.c1 * z, self.c2 * z)
    }

    /// max(|c₁ − c₁'|, |c₂ − c₂'|).
    pub fn max_diff(&self, other: &SectorState) -> f64 {
        (self.c1 - other.c1).norm().max((self.c2 - other.c2).norm())
    }

    fn apply(&self, p: &[[Complex64; 2]; 2]) -> Self {
        SectorState::new(p[0][0] * self.c1 + p[0][1] * self.c2, p[1][0] * self.c1 + p[1][1] * self.c2)
    }
}

/// Amplitudes over both photon sectors of the first microcavity (the second
/// microcavity stays empty). Layout follows the truth-table basis order
/// ψ₁|0⟩, ψ₂|0⟩, ψ₁|1⟩, ψ₂|1⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodePairState {
    pub vacuum: SectorState,
    pub photon: SectorState,
}

impl NodePairState {
    pub fn sector(&self, n: PhotonNumber) -> &SectorState {
        match n {
            PhotonNumber::Zero => &self.vacuum,
            PhotonNumber::One => &self.photon,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.vacuum.norm_sqr() + self.photon.norm_sqr()
    }

    pub fn amplitudes(&self) -> [Complex64; 4] {
        [self.vacuum.c1, self.vacuum.c2, self.photon.c1, self.photon.c2]
    }
}

/// Whether the fast phase e^{iϖ(n)t} is included (`Lab`) or factored out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    Lab,
    Rotating,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub state: SectorState,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub sector: PhotonNumber,
    pub frame: Frame,
    pub samples: Vec<Sample>,
}

impl Trajectory {
    /// CSV with a `# sector=… frame=…` comment line and columns
    /// `t,re_c1,im_c1,re_c2,im_c2,norm`.
    pub fn to_csv(&self) -> String {
        let frame = match self.frame {
            Frame::Lab => "lab",
            Frame::Rotating => "rotating",
        };
        let mut out = format!("# sector={} frame={}\nt,re_c1,im_c1,re_c2,im_c2,norm\n", self.sector.count(), frame);
        for s in &self.samples {
            let _ = writeln!(
                out,
                "{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e}",
                s.t,
                s.state.c1.re,
                s.state.c1.im,
                s.state.c2.re,
                s.state.c2.im,
                s.state.norm_sqr()
            );
        }
        out
    }

    /// Largest |1 − ‖c‖²| over the samples.
    pub fn max_norm_error(&self) -> f64 {
        self.samples.iter().map(|s| (1.0 - s.state.norm_sqr()).abs()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvolutionResult {
    pub sector: PhotonNumber,
    pub t: f64,
    pub state: SectorState,
    pub frame: Frame,
    pub trajectory: Option<Trajectory>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    pub frame: Frame,
    /// Number of trajectory intervals to record; 0 records none.
    pub samples: usize,
    /// Closed form only: accepted |ϖ₁(0) − ϖ₂(0)| relative to max(|S|, |Ω₁^(π)|).
    pub resonance_tolerance: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions { frame: Frame::Lab, samples: 0, resonance_tolerance: DEFAULT_RESONANCE_TOL }
    }
}

impl EvolveOptions {
    pub fn rotating() -> Self {
        EvolveOptions { frame: Frame::Rotating, ..Default::default() }
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }
}

/// cos(κt)·I + i·sin(κt)/κ·[[h, −S], [−S*, −h]].
fn traceless_propagator(h: f64, s: Complex64, kappa: f64, t: f64) -> [[Complex64; 2]; 2] {
    let cs = (kappa * t).cos();
    let sn = if kappa == 0.0 { t } else { (kappa * t).sin() / kappa };
    [
        [Complex64::new(cs, h * sn), -I * s * sn],
        [-I * s.conj() * sn, Complex64::new(cs, -h * sn)],
    ]
}

fn frame_phase(couplings: &DerivedCouplings, n: PhotonNumber, t: f64, frame: Frame) -> Complex64 {
    match frame {
        Frame::Lab => Complex64::from_polar(1.0, couplings.varpi_mean(n) * t),
        Frame::Rotating => Complex64::new(1.0, 0.0),
    }
}

fn check_resonance(couplings: &DerivedCouplings, rel_tol: f64) -> Result<()> {
    let residual = couplings.node_imbalance(PhotonNumber::Zero);
    let tolerance = rel_tol * couplings.s_coupling.norm().max(couplings.omega_1_pi.abs());
    if residual.abs() > tolerance {
        return Err(Error::ResonanceViolated { residual, tolerance });
    }
    Ok(())
}

/// Closed-form sector propagator (rotating frame), valid on resonance.
fn closed_form_propagator(couplings: &DerivedCouplings, n: PhotonNumber, t: f64) -> [[Complex64; 2]; 2] {
    traceless_propagator(-couplings.detuning_split(n), couplings.s_coupling, couplings.kappa(n), t)
}

/// Evolves one sector analytically. Requires the resonance condition; use
/// [`evolve_numerical`] otherwise.
pub fn evolve_closed_form(
    couplings: &DerivedCouplings,
    n: PhotonNumber,
    t: f64,
    initial: SectorState,
    opts: &EvolveOptions,
) -> Result<EvolutionResult> {
    if !t.is_finite() {
        return Err(Error::InvalidParameter { name: "t", reason: format!("time must be finite, got {t}") });
    }
    check_resonance(couplings, opts.resonance_tolerance)?;
    let at = |tau: f64| {
        let p = closed_form_propagator(couplings, n, tau);
        initial.apply(&p).scaled(frame_phase(couplings, n, tau, opts.frame))
    };
    let trajectory = (opts.samples > 0).then(|| Trajectory {
        sector: n,
        frame: opts.frame,
        samples: (0..=opts.samples)
            .map(|k| {
                let tau = t * k as f64 / opts.samples as f64;
                Sample { t: tau, state: at(tau) }
            })
            .collect(),
    });
    Ok(EvolutionResult { sector: n, t, state: at(t), frame: opts.frame, trajectory })
}

/// Default RK4 step for a sector: 0.01 / (half eigen-splitting).
pub fn default_step(couplings: &DerivedCouplings, n: PhotonNumber) -> Option<f64> {
    let rate = effective_hamiltonian(couplings, n).half_splitting();
    (rate > 0.0).then(|| DEFAULT_STEP_FACTOR / rate)
}

/// Integrates dc/dt = i·M(n)·c with classical fourth-order Runge–Kutta.
///
/// Works for arbitrary node imbalance. The traceless part is integrated and
/// the common phase e^{iϖ(n)t} restored exactly, so the step is limited by
/// the exchange rate only. `step` of `None` picks [`default_step`].
pub fn evolve_numerical(
    couplings: &DerivedCouplings,
    n: PhotonNumber,
    t: f64,
    initial: SectorState,
    step: Option<f64>,
    opts: &EvolveOptions,
) -> Result<EvolutionResult> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter { name: "t", reason: format!("time must be finite and non-negative, got {t}") });
    }
    let generator = effective_hamiltonian(couplings, n);
    let rate = generator.half_splitting();
    let step = match step {
        Some(h) if !(h > 0.0) => {
            return Err(Error::InvalidParameter { name: "step", reason: format!("step must be positive, got {h}") })
        }
        Some(h) => {
            if h * rate >= MAX_STEP_RATE {
                return Err(Error::StepTooLarge { step: h, rate, suggested: DEFAULT_STEP_FACTOR / rate });
            }
            h
        }
        None if rate > 0.0 => DEFAULT_STEP_FACTOR / rate,
        None => t.max(f64::MIN_POSITIVE),
    };

    let n_steps = ((t / step).ceil() as usize).max(1);
    let h = t / n_steps as f64;
    let k = generator.traceless();
    let sample_every = if opts.samples == 0 { usize::MAX } else { (n_steps / opts.samples).max(1) };

    let phase = |tau: f64| frame_phase(couplings, n, tau, opts.frame);
    let mut c = initial;
    let mut samples = Vec::new();
    if opts.samples > 0 {
        samples.push(Sample { t: 0.0, state: c.scaled(phase(0.0)) });
    }
    for i in 1..=n_steps {
        c = rk4_step(&k, c, h);
        if opts.samples > 0 && (i % sample_every == 0 || i == n_steps) {
            let tau = h * i as f64;
            samples.push(Sample { t: tau, state: c.scaled(phase(tau)) });
        }
    }
    let trajectory = (opts.samples > 0).then(|| Trajectory { sector: n, frame: opts.frame, samples });
    Ok(EvolutionResult { sector: n, t, state: c.scaled(phase(t)), frame: opts.frame, trajectory })
}

fn rk4_step(k: &Array2<Complex64>, c: SectorState, h: f64) -> SectorState {
    let f = |s: SectorState| -> SectorState {
        SectorState::new(
            I * (k[[0, 0]] * s.c1 + k[[0, 1]] * s.c2),
            I * (k[[1, 0]] * s.c1 + k[[1, 1]] * s.c2),
        )
    };
    let add = |a: SectorState, b: SectorState, w: f64| SectorState::new(a.c1 + b.c1 * w, a.c2 + b.c2 * w);
    let k1 = f(c);
    let k2 = f(add(c, k1, h / 2.0));
    let k3 = f(add(c, k2, h / 2.0));
    let k4 = f(add(c, k3, h));
    SectorState::new(
        c.c1 + (k1.c1 + 2.0 * k2.c1 + 2.0 * k3.c1 + k4.c1) * (h / 6.0),
        c.c2 + (k1.c2 + 2.0 * k2.c2 + 2.0 * k3.c2 + k4.c2) * (h / 6.0),
    )
}

/// Evolves both photon sectors of a composite state. Sectors evolve under
/// their own generators and never exchange amplitude.
pub fn evolve_pair_closed_form(
    couplings: &DerivedCouplings,
    t: f64,
    initial: &NodePairState,
    opts: &EvolveOptions,
) -> Result<NodePairState> {
    let opts = EvolveOptions { samples: 0, ..*opts };
    let vacuum = evolve_closed_form(couplings, PhotonNumber::Zero, t, initial.vacuum, &opts)?.state;
    let photon = evolve_closed_form(couplings, PhotonNumber::One, t, initial.photon, &opts)?.state;
    Ok(NodePairState { vacuum, photon })
}

/// Peak amplitude max_t |c₂(n=1)(t)| = |S|/κ_(1) reached from node 1 with a
/// control photon present. 1 means no blockade.
pub fn blockade_error(couplings: &DerivedCouplings) -> f64 {
    let kappa = couplings.kappa(PhotonNumber::One);
    if kappa == 0.0 {
        0.0
    } else {
        couplings.s_coupling.norm() / kappa
    }
}

/// Peak transfer probability max_t |c₂|² = |S|²/(|S|² + h²) in sector `n`,
/// valid off resonance as well.
pub fn transfer_contrast(couplings: &DerivedCouplings, n: PhotonNumber) -> f64 {
    let g: SectorGenerator = effective_hamiltonian(couplings, n);
    let rate = g.half_splitting();
    if rate == 0.0 {
        0.0
    } else {
        (g.coupling.norm() / rate).powi(2)
    }
}

/// |c₂(n=1)(t)| starting from node 1, using the exact propagator of the
/// actual generator (no resonance assumption).
pub fn photon_sector_leakage(couplings: &DerivedCouplings, t: f64) -> f64 {
    let g = effective_hamiltonian(couplings, PhotonNumber::One);
    let p = traceless_propagator(g.half_imbalance, g.coupling, g.half_splitting(), t);
    p[1][0].norm()
}

/// Time for the exchange angle θ = |S|·t.
///
/// θ = π/2 is a full swap; on the code space this angle corresponds to the
/// gate-matrix parameter 2θ of [`crate::gates::iswap`].
pub fn iswap_schedule(couplings: &DerivedCouplings, theta: f64) -> Result<f64> {
    let s = couplings.s_coupling.norm();
    if s == 0.0 {
        return Err(Error::InvalidParameter { name: "s_coupling", reason: "exchange coupling S is zero".into() });
    }
    Ok(theta / s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractionOptions {
    /// Gate time; `None` uses t̃ = π/(2|S|).
    pub t: Option<f64>,
    pub sqrt3_tolerance: f64,
    pub resonance_tolerance: f64,
}

impl Default for ExtractionOptions {
    fn default() -> Self {
        ExtractionOptions { t: None, sqrt3_tolerance: DEFAULT_SQRT3_TOL, resonance_tolerance: DEFAULT_RESONANCE_TOL }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ControlledIswap {
    /// 4×4 over ψ₁|0⟩, ψ₂|0⟩, ψ₁|1⟩, ψ₂|1⟩ with e^{iϖ(0)t} factored out.
    pub unitary: Unitary,
    pub t: f64,
    /// Diagonal entry of the photon block, −e^{i(ϖ(1)−ϖ(0))t̃} at t̃.
    pub photon_phase: Complex64,
    /// |c₂(n=1)(t)| from node 1.
    pub leakage: f64,
}

/// Assembles the photon-controlled iSWAP from the two sector propagators.
///
/// Requires |Ω₁^(π)| = √3|S| (within `sqrt3_tolerance`, relative), which
/// makes κ_(1)t̃ = π so the photon sector returns to itself.
pub fn extract_controlled_iswap(couplings: &DerivedCouplings, opts: &ExtractionOptions) -> Result<ControlledIswap> {
    let s = couplings.s_coupling.norm();
    if s == 0.0 {
        return Err(Error::InvalidParameter { name: "s_coupling", reason: "exchange coupling S is zero".into() });
    }
    let t = opts.t.unwrap_or(PI / (2.0 * s));
    let target = 3f64.sqrt() * s;
    let relative_error = (couplings.omega_1_pi.abs() - target).abs() / target;
    if relative_error > opts.sqrt3_tolerance {
        return Err(Error::BlockadeConditionViolated { relative_error, leakage: photon_sector_leakage(couplings, t) });
    }
    check_resonance(couplings, opts.resonance_tolerance)?;
    Ok(assemble_controlled_iswap(couplings, t))
}

/// Same assembly without the condition checks, for inspecting detuned
/// parameter sets. Uses the exact propagator of the actual generators.
pub fn assemble_controlled_iswap(couplings: &DerivedCouplings, t: f64) -> ControlledIswap {
    let mut m = Array2::<Complex64>::zeros((4, 4));
    for n in PhotonNumber::ALL {
        let g = effective_hamiltonian(couplings, n);
        let p = traceless_propagator(g.half_imbalance, g.coupling, g.half_splitting(), t);
        let shift = Complex64::from_polar(1.0, couplings.varpi_shift(n) * t);
        let off = 2 * n.count() as usize;
        for r in 0..2 {
            for c in 0..2 {
                m[[off + r, off + c]] = p[r][c] * shift;
            }
        }
    }
    let photon_phase = m[[2, 2]];
    ControlledIswap {
        unitary: Unitary::from_exact(m),
        t,
        photon_phase,
        leakage: photon_sector_leakage(couplings, t),
    }
}

/// One mismatch against the truth-table structure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableMismatch {
    pub row: usize,
    pub col: usize,
    pub expected: String,
    pub actual: [f64; 2],
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruthTableCheck {
    pub max_deviation: f64,
    pub mismatches: Vec<TableMismatch>,
}

impl TruthTableCheck {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares a 4×4 against the Controlled-iSWAP truth table: vacuum block
/// [[0, −i], [−i, 0]], photon block a unit-modulus multiple of the identity,
/// no coupling between blocks. Entries deviating by more than `tol` are
/// reported.
pub fn compare_with_truth_table(u: &Unitary, tol: f64) -> TruthTableCheck {
    let mut mismatches = Vec::new();
    let mut max_deviation = 0.0_f64;
    let photon_diag = u.get(2, 2);
    for r in 0..4 {
        for c in 0..4 {
            let z = u.get(r, c);
            let (expected, deviation) = match (r, c) {
                (0, 1) | (1, 0) => ("-i".to_string(), (z + I).norm()),
                (2, 2) => ("unit modulus".to_string(), (z.norm() - 1.0).abs()),
                (3, 3) => (
                    "unit modulus, equal to (2,2)".to_string(),
                    (z.norm() - 1.0).abs().max((z - photon_diag).norm()),
                ),
                _ => ("0".to_string(), z.norm()),
            };
            max_deviation = max_deviation.max(deviation);
            if deviation > tol {
                mismatches.push(TableMismatch { row: r, col: c, expected, actual: [z.re, z.im], deviation });
            }
        }
    }
    TruthTableCheck { max_deviation, mismatches }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physical::{derive_couplings, PhysicalParams};

    fn sqrt3() -> DerivedCouplings {
        derive_couplings(&PhysicalParams::symmetric(40, 1.5e3, 0.0, 3.0e5, 2.0e6).with_pi_ratio(3f64.sqrt())).unwrap()
    }

    #[test]
    fn full_swap_in_vacuum_sector() {
        let c = sqrt3();
        let s = c.s_coupling.norm();
        let t = PI / (2.0 * s);
        let r = evolve_closed_form(&c, PhotonNumber::Zero, t, SectorState::node_1(), &EvolveOptions::rotating()).unwrap();
        assert!(r.state.c1.norm() < 1e-12);
        assert!((r.state.c2 + I).norm() < 1e-12);
        // Lab frame differs by the global phase only.
        let lab = evolve_closed_form(&c, PhotonNumber::Zero, t, SectorState::node_1(), &EvolveOptions::default()).unwrap();
        let phase = Complex64::from_polar(1.0, c.varpi_mean(PhotonNumber::Zero) * t);
        assert!(lab.state.max_diff(&r.state.scaled(phase)) < 1e-12);
    }

    #[test]
    fn zero_time_is_identity() {
        let c = sqrt3();
        let init = SectorState::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8));
        for n in PhotonNumber::ALL {
            let r = evolve_closed_form(&c, n, 0.0, init, &EvolveOptions::default()).unwrap();
            assert_eq!(r.state, init);
        }
    }

    #[test]
    fn perfect_blockade_at_gate_time() {
        let c = sqrt3();
        let t = PI / (2.0 * c.s_coupling.norm());
        let r = evolve_closed_form(&c, PhotonNumber::One, t, SectorState::node_1(), &EvolveOptions::rotating()).unwrap();
        assert!(r.state.c2.norm() < 1e-12);
        assert!((r.state.c1.norm() - 1.0).abs() < 1e-12);
        // cos(κt̃) = cos π = −1 and sin(κt̃) = 0 leave c₁ = −1 in the rotating frame.
        assert!((r.state.c1 + 1.0).norm() < 1e-12);
    }

    #[test]
    fn off_resonance_refused_by_closed_form() {
        let mut p = PhysicalParams::symmetric(40, 1.5e3, 0.0, 3.0e5, 2.0e6);
        p.omega_2 += 10.0;
        let c = derive_couplings(&p).unwrap();
        let err = evolve_closed_form(&c, PhotonNumber::Zero, 1e-3, SectorState::node_1(), &EvolveOptions::default());
        assert!(matches!(err, Err(Error::ResonanceViolated { .. })));
        assert!(evolve_numerical(&c, PhotonNumber::Zero, 1e-3, SectorState::node_1(), None, &EvolveOptions::default()).is_ok());
    }

    #[test]
    fn numeric_step_validation() {
        let c = sqrt3();
        let rate = effective_hamiltonian(&c, PhotonNumber::Zero).half_splitting();
        let init = SectorState::node_1();
        let o = EvolveOptions::default();
        assert!(matches!(
            evolve_numerical(&c, PhotonNumber::Zero, 1.0, init, Some(0.0), &o),
            Err(Error::InvalidParameter { name: "step", .. })
        ));
        match evolve_numerical(&c, PhotonNumber::Zero, 1.0, init, Some(0.5 / rate), &o) {
            Err(Error::StepTooLarge { suggested, .. }) => assert!((suggested * rate - 0.01).abs() < 1e-15),
            other => panic!("expected StepTooLarge, got {other:?}"),
        }
    }

    #[test]
    fn decoupled_nodes_only_pick_up_phases() {
        let mut p = PhysicalParams::symmetric(40, 1.5e3, 0.0, 3.0e5, 2.0e6);
        p.g_sigma_2 = 0.0;
        p.omega_2 += 250.0;
        let c = derive_couplings(&p).unwrap();
        let init = SectorState::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8));
        let r = evolve_numerical(&c, PhotonNumber::Zero, 0.05, init, Some(1e-5), &EvolveOptions::rotating()).unwrap();
        assert!((r.state.c1.norm() - 0.6).abs() < 1e-12);
        assert!((r.state.c2.norm() - 0.8).abs() < 1e-12);
        // c₁ gains e^{iht}, c₂ gains e^{−iht} with h = (ϖ₁ − ϖ₂)/2.
        let h = 0.5 * c.node_imbalance(PhotonNumber::Zero);
        assert!(h.abs() > 1.0);
        let expect = SectorState::new(init.c1 * Complex64::from_polar(1.0, h * 0.05), init.c2 * Complex64::from_polar(1.0, -h * 0.05));
        assert!(r.state.max_diff(&expect) < 1e-10);
    }

    #[test]
    fn detuned_transfer_follows_generalised_rabi() {
        let base = PhysicalParams::symmetric(40, 1.5e3, 0.0, 3.0e5, 2.0e6);
        let s = derive_couplings(&base).unwrap().s_coupling.norm();
        let mut p = base.clone();
        let delta = 10.0 * s;
        p.omega_2 += delta;
        let c = derive_couplings(&p).unwrap();
        let expected = s * s / (s * s + delta * delta / 4.0);
        assert!((transfer_contrast(&c, PhotonNumber::Zero) - expected).abs() < 1e-12);
        // Peak of the integrated |c₂|² over one generalised Rabi period.
        let kappa = (s * s + delta * delta / 4.0).sqrt();
        let r = evolve_numerical(&c, PhotonNumber::Zero, PI / kappa, SectorState::node_1(), None, &EvolveOptions::rotating().with_samples(2000)).unwrap();
        let peak = r.trajectory.unwrap().samples.iter().map(|x| x.state.c2.norm_sqr()).fold(0.0, f64::max);
        assert!((peak - expected).abs() < 1e-5, "peak {peak} vs {expected}");
        // Resonant contrast is complete.
        let c0 = derive_couplings(&base).unwrap();
        assert!((transfer_contrast(&c0, PhotonNumber::Zero) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn blockade_error_examples() {
        let base = PhysicalParams::symmetric(40, 1.5e3, 0.0, 3.0e5, 2.0e6);
        let c = derive_couplings(&base.clone().with_pi_ratio(100.0)).unwrap();
        assert!((blockade_error(&c) - 1.0 / 10001f64.sqrt()).abs() < 1e-12);
        let c = derive_couplings(&base.clone().with_pi_ratio(0.0)).unwrap();
        assert_eq!(blockade_error(&c), 1.0);
        let c = derive_couplings(&base.with_pi_ratio(3f64.sqrt())).unwrap();
        assert!((blockade_error(&c) - 0.5).abs() < 1e-12);
        let t = PI / (2.0 * c.s_coupling.norm());
        assert!(photon_sector_leakage(&c, t) < 1e-12);
    }

    #[test]
    fn schedule() {
        let c = sqrt3();
        let s = c.s_coupling.norm();
        assert_eq!(iswap_schedule(&c, PI / 2.0).unwrap(), PI / 2.0 / s);
        assert_eq!(iswap_schedule(&c, 0.0).unwrap(), 0.0);
        let mut p = PhysicalParams::symmetric(40, 1.5e3, 0.0, 3.0e5, 2.0e6);
        p.g_sigma_1 = 0.0;
        assert!(iswap_schedule(&derive_couplings(&p).unwrap(), 1.0).is_err());
    }

    #[test]
    fn half_period_returns_with_sign_flip() {
        // θ = St = π: population back on node 1 with amplitude −1.
        let c = sqrt3();
        let t = iswap_schedule(&c, PI).unwrap();
        let r = evolve_closed_form(&c, PhotonNumber::Zero, t, SectorState::node_1(), &EvolveOptions::rotating()).unwrap();
        assert!((r.state.c1 + 1.0).norm() < 1e-12);
        assert!(r.state.c2.norm() < 1e-12);
    }

    #[test]
    fn extraction_matches_truth_table() {
        let c = sqrt3();
        let g = extract_controlled_iswap(&c, &ExtractionOptions::default()).unwrap();
        let check = compare_with_truth_table(&g.unitary, 1e-10);
        assert!(check.passed(), "{check:?}");
        assert!(g.unitary.unitarity_deviation() < 1e-12);
        let expected = -Complex64::from_polar(1.0, c.varpi_shift(PhotonNumber::One) * g.t);
        assert!((g.photon_phase - expected).norm() < 1e-9);
    }

    #[test]
    fn extraction_refuses_detuned_blockade() {
        let c = derive_couplings(&PhysicalParams::symmetric(40, 1.5e3, 0.0, 3.0e5, 2.0e6).with_pi_ratio(2.0)).unwrap();
        match extract_controlled_iswap(&c, &ExtractionOptions::default()) {
            Err(Error::BlockadeConditionViolated { leakage, .. }) => assert!(leakage > 1e-3),
            other => panic!("{other:?}"),
        }
        let g = assemble_controlled_iswap(&c, PI / (2.0 * c.s_coupling.norm()));
        assert!(!compare_with_truth_table(&g.unitary, 1e-10).passed());
    }

    #[test]
    fn half_gate_time_still_unitary() {
        let c = sqrt3();
        let opts = ExtractionOptions { t: Some(PI / (4.0 * c.s_coupling.norm())), ..Default::default() };
        let g = extract_controlled_iswap(&c, &opts).unwrap();
        assert!(g.unitary.unitarity_deviation() < 1e-12);
    }

    #[test]
    fn trajectory_csv_layout() {
        let c = sqrt3();
        let r = evolve_closed_form(&c, PhotonNumber::One, 1e-4, SectorState::node_1(), &EvolveOptions::default().with_samples(4)).unwrap();
        let csv = r.trajectory.unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# sector=1 frame=lab");
        assert_eq!(lines[1], "t,re_c1,im_c1,re_c2,im_c2,norm");
        assert_eq!(lines.len(), 2 + 5);
    }

    #[test]
    fn composite_state_keeps_sectors_apart() {
        let c = sqrt3();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let init = NodePairState { vacuum: SectorState::node_1().scaled(h.into()), photon: SectorState::node_2().scaled(h.into()) };
        let out = evolve_pair_closed_form(&c, 3.7e-4, &init, &EvolveOptions::default()).unwrap();
        assert!((out.vacuum.norm_sqr() - 0.5).abs() < 1e-12);
        assert!((out.photon.norm_sqr() - 0.5).abs() < 1e-12);
    }
}
