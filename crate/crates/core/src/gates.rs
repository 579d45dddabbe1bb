//! Gate matrices: the native pair gates, the textbook single- and two-qubit
//! gates, and the logical encoding |0_L⟩ = |01⟩, |1_L⟩ = |10⟩.
//!
//! Two-qubit matrices act on |ab⟩ with index 2a + b, where `a` is the first
//! physical qubit of the pair. Rotations use the standard convention
//! R_x(θ) = exp(−iθX/2), R_z(θ) = exp(−iθZ/2).

use std::fmt;
use std::str::FromStr;

use ndarray::{array, Array2};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::unitary::Unitary;

/// Off-block tolerance for [`restrict_to_logical`].
pub const LEAKAGE_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn cis(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, x)
}

pub fn rx(theta: f64) -> Unitary {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let s = Complex64::new(0.0, -(theta / 2.0).sin());
    Unitary::from_exact(array![[c, s], [s, c]])
}

pub fn rz(theta: f64) -> Unitary {
    Unitary::from_exact(array![[cis(-theta / 2.0), ZERO], [ZERO, cis(theta / 2.0)]])
}

/// Partial iSWAP: identity on |00⟩ and |11⟩, and
/// [[cos θ/2, i sin θ/2], [i sin θ/2, cos θ/2]] on {|01⟩, |10⟩}.
///
/// On the code space this is R_x(−θ).
pub fn iswap(theta: f64) -> Unitary {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let s = Complex64::new(0.0, (theta / 2.0).sin());
    Unitary::from_exact(array![
        [ONE, ZERO, ZERO, ZERO],
        [ZERO, c, s, ZERO],
        [ZERO, s, c, ZERO],
        [ZERO, ZERO, ZERO, ONE],
    ])
}

/// e^{iφ/2}·diag(e^{−iφ/2}, e^{−iθ/2}, e^{iθ/2}, e^{iφ/2}).
///
/// On the code space this is e^{iφ/2}·R_z(θ). With φ = θ it reduces to
/// diag(1, 1, e^{iθ}, e^{iθ}), a frequency shift of the first qubit alone.
pub fn phase_gate(theta: f64, phi: f64) -> Unitary {
    let g = cis(phi / 2.0);
    let m = Array2::from_diag(&ndarray::arr1(&[
        g * cis(-phi / 2.0),
        g * cis(-theta / 2.0),
        g * cis(theta / 2.0),
        g * cis(phi / 2.0),
    ]));
    Unitary::from_exact(m)
}

/// Photon-controlled iSWAP over control ⊗ pair (index 4·control + pair).
///
/// Control |0⟩ (no photon) swaps the pair's single excitation with amplitude
/// −i; control |1⟩ blocks the swap. The blocked branch's physical phase is
/// normalised to 1.
pub fn controlled_iswap_ideal() -> Unitary {
    let mut m = Array2::<Complex64>::eye(8);
    m[[1, 1]] = ZERO;
    m[[2, 2]] = ZERO;
    m[[1, 2]] = -I;
    m[[2, 1]] = -I;
    Unitary::from_exact(m)
}

/// Controlled-SWAP (Fredkin) over control ⊗ pair: control |1⟩ exchanges the
/// pair's two qubits.
pub fn controlled_swap() -> Unitary {
    let mut m = Array2::<Complex64>::eye(8);
    m[[5, 5]] = ZERO;
    m[[6, 6]] = ZERO;
    m[[5, 6]] = ONE;
    m[[6, 5]] = ONE;
    Unitary::from_exact(m)
}

/// Dual-rail style encoding of one logical qubit on a physical pair.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LogicalEncoding;

impl LogicalEncoding {
    /// Pair basis index of |0_L⟩ = |01⟩.
    pub const ZERO_L: usize = 0b01;
    /// Pair basis index of |1_L⟩ = |10⟩.
    pub const ONE_L: usize = 0b10;
    /// Leakage states |00⟩ and |11⟩.
    pub const LEAKAGE: [usize; 2] = [0b00, 0b11];

    pub fn code_word(bit: bool) -> usize {
        if bit {
            Self::ONE_L
        } else {
            Self::ZERO_L
        }
    }

    pub fn code_projector() -> Array2<Complex64> {
        Array2::from_diag(&ndarray::arr1(&[ZERO, ONE, ONE, ZERO]))
    }

    pub fn leakage_projector() -> Array2<Complex64> {
        Array2::from_diag(&ndarray::arr1(&[ONE, ZERO, ZERO, ONE]))
    }
}

/// The 2×2 action of a pair gate on {|0_L⟩, |1_L⟩}. Fails if the gate
/// couples code words to leakage states by more than [`LEAKAGE_TOL`].
pub fn restrict_to_logical(u: &Unitary) -> Result<Unitary> {
    if u.dim() != 4 {
        return Err(Error::Dimension { expected: 4, actual: u.dim() });
    }
    let code = [LogicalEncoding::ZERO_L, LogicalEncoding::ONE_L];
    let leak = LogicalEncoding::LEAKAGE;
    let mut worst = 0.0_f64;
    for &a in &code {
        for &b in &leak {
            worst = worst.max(u.get(a, b).norm()).max(u.get(b, a).norm());
        }
    }
    if worst > LEAKAGE_TOL {
        return Err(Error::Leakage { leakage: worst });
    }
    let m = Array2::from_shape_fn((2, 2), |(r, c)| u.get(code[r], code[c]));
    Unitary::new(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StandardGate {
    X,
    H,
    S,
    T,
    #[serde(rename = "CNOT")]
    Cnot,
}

impl StandardGate {
    pub fn arity(self) -> usize {
        match self {
            StandardGate::Cnot => 2,
            _ => 1,
        }
    }

    /// Textbook matrix. CNOT is over control ⊗ target (index 2c + t).
    pub fn matrix(self) -> Unitary {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let m = match self {
            StandardGate::X => array![[ZERO, ONE], [ONE, ZERO]],
            StandardGate::H => array![[ONE * h, ONE * h], [ONE * h, -ONE * h]],
            StandardGate::S => array![[ONE, ZERO], [ZERO, I]],
            StandardGate::T => array![[ONE, ZERO], [ZERO, cis(std::f64::consts::FRAC_PI_4)]],
            StandardGate::Cnot => array![
                [ONE, ZERO, ZERO, ZERO],
                [ZERO, ONE, ZERO, ZERO],
                [ZERO, ZERO, ZERO, ONE],
                [ZERO, ZERO, ONE, ZERO],
            ],
        };
        Unitary::from_exact(m)
    }
}

impl FromStr for StandardGate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "X" => Ok(StandardGate::X),
            "H" => Ok(StandardGate::H),
            "S" => Ok(StandardGate::S),
            "T" => Ok(StandardGate::T),
            "CNOT" | "CX" => Ok(StandardGate::Cnot),
            _ => Err(Error::UnknownGate(s.to_string())),
        }
    }
}

impl fmt::Display for StandardGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StandardGate::X => "X",
            StandardGate::H => "H",
            StandardGate::S => "S",
            StandardGate::T => "T",
            StandardGate::Cnot => "CNOT",
        };
        f.write_str(s)
    }
}

pub fn standard_gate(name: &str) -> Result<Unitary> {
    Ok(name.parse::<StandardGate>()?.matrix())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EncodedCnotReport {
    /// Largest amplitude error over the four encoded basis inputs.
    pub basis_deviation: f64,
    /// Largest amplitude error over the random superpositions.
    pub random_deviation: f64,
    /// Largest |1 − ‖ψ_out‖²|.
    pub norm_deviation: f64,
    pub trials: usize,
}

impl EncodedCnotReport {
    pub fn max_deviation(&self) -> f64 {
        self.basis_deviation.max(self.random_deviation)
    }
}

/// Checks that a Fredkin gate, controlled by the first qubit of the control
/// pair and swapping the target pair, acts as CNOT on encoded states:
/// α₁|0_L0_L⟩ + α₂|0_L1_L⟩ + α₃|1_L0_L⟩ + α₄|1_L1_L⟩ ↦ (α₁, α₂, α₄, α₃).
pub fn verify_encoded_cnot<R: Rng>(rng: &mut R, trials: usize) -> EncodedCnotReport {
    // Four physical qubits |c_a c_b t_a t_b⟩, index 8c_a + 4c_b + 2t_a + t_b.
    // The Fredkin acts on (c_a, t_a, t_b) and is the identity on c_b.
    let fredkin = controlled_swap();
    let mut u = Array2::<Complex64>::zeros((16, 16));
    for col in 0..16 {
        let (ca, cb, tp) = (col >> 3 & 1, col >> 2 & 1, col & 3);
        let local_col = ca << 2 | tp;
        for local_row in 0..8 {
            let z = fredkin.get(local_row, local_col);
            if z != ZERO {
                let row = (local_row >> 2) << 3 | cb << 2 | (local_row & 3);
                u[[row, col]] += z;
            }
        }
    }

    let encode = |alpha: &[Complex64; 4]| -> ndarray::Array1<Complex64> {
        let mut v = ndarray::Array1::zeros(16);
        for (k, a) in alpha.iter().enumerate() {
            let (c, t) = (k >> 1 & 1 == 1, k & 1 == 1);
            v[LogicalEncoding::code_word(c) << 2 | LogicalEncoding::code_word(t)] += *a;
        }
        v
    };

    let mut report = EncodedCnotReport { basis_deviation: 0.0, random_deviation: 0.0, norm_deviation: 0.0, trials };
    let check = |alpha: [Complex64; 4]| -> (f64, f64) {
        let out = u.dot(&encode(&alpha));
        let expected = encode(&[alpha[0], alpha[1], alpha[3], alpha[2]]);
        let dev = out.iter().zip(expected.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        let norm_in: f64 = alpha.iter().map(|a| a.norm_sqr()).sum();
        let norm_out: f64 = out.iter().map(|a| a.norm_sqr()).sum();
        (dev, (norm_in - norm_out).abs())
    };
    for k in 0..4 {
        let mut alpha = [ZERO; 4];
        alpha[k] = ONE;
        let (dev, nd) = check(alpha);
        report.basis_deviation = report.basis_deviation.max(dev);
        report.norm_deviation = report.norm_deviation.max(nd);
    }
    for _ in 0..trials {
        let mut alpha = [ZERO; 4];
        for a in alpha.iter_mut() {
            *a = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        let norm = alpha.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        alpha.iter_mut().for_each(|a| *a /= norm);
        let (dev, nd) = check(alpha);
        report.random_deviation = report.random_deviation.max(dev);
        report.norm_deviation = report.norm_deviation.max(nd);
    }
    report
}

/// Classical controlled swap: with `control` set, the two targets exchange.
pub fn fredkin_classical(control: bool, a: bool, b: bool) -> (bool, bool, bool) {
    if control {
        (control, b, a)
    } else {
        (control, a, b)
    }
}

/// NOT from Fredkin(x, 0, 1): third output is ¬x.
pub fn fredkin_not(x: bool) -> bool {
    fredkin_classical(x, false, true).2
}

/// AND from Fredkin(x, y, 0): third output is x∧y.
pub fn fredkin_and(x: bool, y: bool) -> bool {
    fredkin_classical(x, y, false).2
}

/// FANOUT from Fredkin(x, 1, 0): first and third outputs both equal x.
pub fn fredkin_fanout(x: bool) -> (bool, bool) {
    let (c, _, b) = fredkin_classical(x, true, false);
    (c, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn vec_of(u: &Unitary, col: usize) -> Vec<Complex64> {
        (0..u.dim()).map(|r| u.get(r, col)).collect()
    }

    #[test]
    fn iswap_examples() {
        assert!(iswap(0.0).max_diff(&Unitary::identity(4)) < 1e-15);
        let full = iswap(PI);
        assert!((full.get(1, 2) - I).norm() < 1e-15);
        assert!((full.get(2, 1) - I).norm() < 1e-15);
        assert!(full.get(1, 1).norm() < 1e-15);
        // θ = π/2 on |01⟩ gives (|01⟩ + i|10⟩)/√2.
        let out = vec_of(&iswap(FRAC_PI_2), 1);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((out[1] - h).norm() < 1e-15);
        assert!((out[2] - I * h).norm() < 1e-15);
    }

    #[test]
    fn phase_examples() {
        assert!(phase_gate(0.0, 0.0).max_diff(&Unitary::identity(4)) < 1e-15);
        let r = restrict_to_logical(&phase_gate(FRAC_PI_2, 0.0)).unwrap();
        assert!(r.max_diff(&rz(FRAC_PI_2)) < 1e-15);
        assert!((r.get(0, 0) - cis(-FRAC_PI_4)).norm() < 1e-15);
        let r = restrict_to_logical(&phase_gate(FRAC_PI_4, 0.0)).unwrap();
        let t = StandardGate::T.matrix();
        assert!(t.max_diff(&r.scaled(cis(PI / 8.0))) < 1e-15);
        // φ = θ: single-qubit frequency shift.
        let p = phase_gate(0.7, 0.7);
        for (k, want) in [ONE, ONE, cis(0.7), cis(0.7)].iter().enumerate() {
            assert!((p.get(k, k) - want).norm() < 1e-15);
        }
    }

    #[test]
    fn controlled_iswap_examples() {
        let u = controlled_iswap_ideal();
        // |0⟩⊗|01⟩ → −i|0⟩⊗|10⟩
        assert!((u.get(2, 1) + I).norm() < 1e-15);
        // |1⟩⊗|01⟩ → |1⟩⊗|01⟩
        assert!((u.get(5, 5) - ONE).norm() < 1e-15);
        assert!(u.unitarity_deviation() < 1e-12);
        assert!(controlled_swap().unitarity_deviation() < 1e-12);
    }

    #[test]
    fn restriction_examples() {
        let theta = 0.83;
        let r = restrict_to_logical(&iswap(theta)).unwrap();
        assert!(r.max_diff(&rx(-theta)) < 1e-15);
        let r = restrict_to_logical(&phase_gate(theta, 1.9)).unwrap();
        assert!(r.phase_distance(&rz(theta)) < 1e-14);

        // Rotation mixing |00⟩ and |01⟩ with sin = 0.1.
        let s = 0.1;
        let c = (1.0 - s * s as f64).sqrt();
        let mut m = Array2::<Complex64>::eye(4);
        m[[0, 0]] = c.into();
        m[[1, 1]] = c.into();
        m[[0, 1]] = (-s).into();
        m[[1, 0]] = s.into();
        match restrict_to_logical(&Unitary::new(m).unwrap()) {
            Err(Error::Leakage { leakage }) => assert!((leakage - 0.1).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn standard_set() {
        let h = standard_gate("H").unwrap();
        assert!((&h * &h).max_diff(&Unitary::identity(2)) < 1e-15);
        assert!(matches!(standard_gate("Q"), Err(Error::UnknownGate(_))));
        // S = e^{iπ/4}R_z(π/2), T = e^{iπ/8}R_z(π/4)
        assert!(StandardGate::S.matrix().max_diff(&rz(FRAC_PI_2).scaled(cis(FRAC_PI_4))) < 1e-15);
        assert!(StandardGate::T.matrix().max_diff(&rz(FRAC_PI_4).scaled(cis(PI / 8.0))) < 1e-15);
        // H = e^{iπ/2}R_z(π/2)R_x(π/2)R_z(π/2)
        let built = (&(&rz(FRAC_PI_2) * &rx(FRAC_PI_2)) * &rz(FRAC_PI_2)).scaled(cis(FRAC_PI_2));
        assert!(h.max_diff(&built) < 1e-15);
    }

    #[test]
    fn encoded_cnot_construction() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let r = verify_encoded_cnot(&mut rng, 100);
        assert!(r.max_deviation() < 1e-12, "{r:?}");
        assert!(r.norm_deviation < 1e-12);
    }

    #[test]
    fn projectors_complete() {
        let sum = LogicalEncoding::code_projector() + LogicalEncoding::leakage_projector();
        assert_eq!(sum, Array2::<Complex64>::eye(4));
        assert_ne!(LogicalEncoding::code_word(false), LogicalEncoding::code_word(true));
    }

    #[test]
    fn fredkin_truth_tables() {
        assert_eq!(fredkin_classical(true, false, true), (true, true, false));
        for a in [false, true] {
            for b in [false, true] {
                assert_eq!(fredkin_classical(false, a, b), (false, a, b));
                assert_eq!(fredkin_and(a, b), a && b);
            }
            assert_eq!(fredkin_not(a), !a);
            assert_eq!(fredkin_fanout(a), (a, a));
        }
    }
}
