//! State-vector execution of native programs.
//!
//! Layout: physical qubit `k` is bit `k` of the amplitude index. Logical qubit
//! `j` lives on physical qubits (2j, 2j+1) with |0_L⟩ = |q_{2j}=0, q_{2j+1}=1⟩
//! and |1_L⟩ = |q_{2j}=1, q_{2j+1}=0⟩. In a logical bitstring, character `j`
//! is logical qubit `j`; in a decoded logical vector, index bit `j` is
//! logical qubit `j`.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::compiler::{GateModel, IswapConvention, NativeOp, NativeProgram};
use crate::error::{Error, Result};
use crate::gates::{iswap, phase_gate, LogicalEncoding};
use crate::unitary::Unitary;

/// Largest register the simulator accepts (4^10 amplitudes).
pub const MAX_LOGICAL_QUBITS: usize = 10;

/// Default leakage above which measurement and decoding refuse to proceed.
pub const DEFAULT_LEAKAGE_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalState {
    qubit_count: usize,
    amplitudes: Vec<Complex64>,
}

impl PhysicalState {
    /// Wraps raw amplitudes; the length must be 4^qubit_count.
    pub fn from_amplitudes(qubit_count: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_size(qubit_count)?;
        let dim = 1usize << (2 * qubit_count);
        if amplitudes.len() != dim {
            return Err(Error::Dimension { expected: dim, actual: amplitudes.len() });
        }
        Ok(PhysicalState { qubit_count, amplitudes })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `[re, im]` pairs in index order.
    pub fn to_json(&self) -> Result<String> {
        let pairs: Vec<[f64; 2]> = self.amplitudes.iter().map(|z| [z.re, z.im]).collect();
        Ok(serde_json::to_string(&pairs)?)
    }

    pub fn from_json(qubit_count: usize, s: &str) -> Result<Self> {
        let pairs: Vec<[f64; 2]> = serde_json::from_str(s)?;
        Self::from_amplitudes(qubit_count, pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }

    fn pair_local(&self, idx: usize, pair: usize) -> usize {
        2 * (idx >> (2 * pair) & 1) + (idx >> (2 * pair + 1) & 1)
    }

    fn in_code_space(&self, idx: usize) -> bool {
        (0..self.qubit_count).all(|j| {
            let l = self.pair_local(idx, j);
            l == LogicalEncoding::ZERO_L || l == LogicalEncoding::ONE_L
        })
    }

    fn check_pair(&self, pair: usize) -> Result<()> {
        if pair >= self.qubit_count {
            return Err(Error::InvalidTarget(format!("pair {pair} outside a {}-pair register", self.qubit_count)));
        }
        Ok(())
    }

    fn apply_pair_gate(&mut self, pair: usize, u: &Unitary) {
        let (b0, b1) = (1usize << (2 * pair), 1usize << (2 * pair + 1));
        // local index l = 2·q_{2j} + q_{2j+1}
        let offsets = [0, b1, b0, b0 | b1];
        for base in 0..self.amplitudes.len() {
            if base & (b0 | b1) != 0 {
                continue;
            }
            let v: [Complex64; 4] = std::array::from_fn(|l| self.amplitudes[base | offsets[l]]);
            for (r, &off) in offsets.iter().enumerate() {
                self.amplitudes[base | off] = (0..4).map(|c| u.get(r, c) * v[c]).sum();
            }
        }
    }

    fn apply_ciswap(&mut self, control: usize, target: usize, model: &GateModel) {
        let ctrl = 1usize << (2 * control);
        let (t0, t1) = (1usize << (2 * target), 1usize << (2 * target + 1));
        let (swap_phase, idle_phase) = (model.ciswap_swap_phase, model.ciswap_idle_phase);
        for idx in 0..self.amplitudes.len() {
            let code = (idx & t0 == 0) != (idx & t1 == 0);
            if idx & ctrl != 0 {
                // visit each swapped pair once, from its |q_{2t}=0, q_{2t+1}=1⟩ member
                if code && idx & t0 == 0 {
                    let partner = idx ^ t0 ^ t1;
                    let (a, b) = (self.amplitudes[idx], self.amplitudes[partner]);
                    self.amplitudes[idx] = swap_phase * b;
                    self.amplitudes[partner] = swap_phase * a;
                }
            } else if code {
                self.amplitudes[idx] *= idle_phase;
            }
        }
    }
}

fn check_size(qubit_count: usize) -> Result<()> {
    if qubit_count == 0 || qubit_count > MAX_LOGICAL_QUBITS {
        return Err(Error::InvalidParameter {
            name: "qubit_count",
            reason: format!("must be in 1..={MAX_LOGICAL_QUBITS}, got {qubit_count}"),
        });
    }
    Ok(())
}

/// Product of code words for a logical bitstring such as `"10"`.
pub fn encode_basis(bits: &str) -> Result<PhysicalState> {
    let qubit_count = bits.chars().count();
    check_size(qubit_count)?;
    let mut idx = 0usize;
    for (j, ch) in bits.chars().enumerate() {
        let bit = match ch {
            '0' => false,
            '1' => true,
            other => {
                return Err(Error::InvalidParameter { name: "bits", reason: format!("`{other}` is not a binary digit") })
            }
        };
        let local = LogicalEncoding::code_word(bit);
        // local = 2·q_{2j} + q_{2j+1}
        idx |= (local >> 1) << (2 * j) | (local & 1) << (2 * j + 1);
    }
    let mut amplitudes = vec![ZERO; 1usize << (2 * qubit_count)];
    amplitudes[idx] = Complex64::new(1.0, 0.0);
    Ok(PhysicalState { qubit_count, amplitudes })
}

/// Encodes a logical state vector (index bit `j` = logical qubit `j`).
pub fn encode_logical(logical: &[Complex64]) -> Result<PhysicalState> {
    let qubit_count = logical.len().trailing_zeros() as usize;
    if !logical.len().is_power_of_two() {
        return Err(Error::Dimension { expected: logical.len().next_power_of_two(), actual: logical.len() });
    }
    check_size(qubit_count)?;
    let mut amplitudes = vec![ZERO; 1usize << (2 * qubit_count)];
    for (l, &z) in logical.iter().enumerate() {
        amplitudes[physical_index(l, qubit_count)] = z;
    }
    Ok(PhysicalState { qubit_count, amplitudes })
}

fn physical_index(logical: usize, qubit_count: usize) -> usize {
    (0..qubit_count).fold(0, |idx, j| {
        let local = LogicalEncoding::code_word(logical >> j & 1 == 1);
        idx | (local >> 1) << (2 * j) | (local & 1) << (2 * j + 1)
    })
}

/// Probability mass outside the code space.
pub fn leakage(state: &PhysicalState) -> f64 {
    let inside: f64 = state
        .amplitudes
        .iter()
        .enumerate()
        .filter(|(idx, _)| state.in_code_space(*idx))
        .map(|(_, z)| z.norm_sqr())
        .sum();
    (state.norm_sqr() - inside).clamp(0.0, 1.0)
}

/// Code-space amplitudes as a 2^k logical vector.
pub fn decode_logical(state: &PhysicalState, leakage_tol: f64) -> Result<Vec<Complex64>> {
    let leaked = leakage(state);
    if leaked > leakage_tol {
        return Err(Error::Leakage { leakage: leaked });
    }
    Ok((0..1usize << state.qubit_count).map(|l| state.amplitudes[physical_index(l, state.qubit_count)]).collect())
}

pub fn apply_op(state: &mut PhysicalState, op: &NativeOp, model: &GateModel) -> Result<()> {
    op.validate(state.qubit_count)?;
    match *op {
        NativeOp::Iswap { pair, theta } => {
            let angle = match model.iswap_convention {
                IswapConvention::Ideal => theta,
                IswapConvention::Extracted => -theta,
            };
            state.apply_pair_gate(pair, &iswap(angle));
        }
        NativeOp::Phase { pair, theta, phi } => state.apply_pair_gate(pair, &phase_gate(theta, phi)),
        NativeOp::Ciswap { control, target } => {
            state.check_pair(control)?;
            state.check_pair(target)?;
            state.apply_ciswap(control, target, model);
        }
    }
    Ok(())
}

/// Measures logical qubit `qubit` in the code basis and collapses the state.
pub fn measure_logical<R: Rng + ?Sized>(
    state: &PhysicalState,
    qubit: usize,
    rng: &mut R,
    leakage_tol: f64,
) -> Result<(bool, PhysicalState)> {
    state.check_pair(qubit)?;
    let leaked = leakage(state);
    if leaked > leakage_tol {
        return Err(Error::Leakage { leakage: leaked });
    }
    let population = |word: usize| -> f64 {
        state
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(idx, _)| state.pair_local(*idx, qubit) == word)
            .map(|(_, z)| z.norm_sqr())
            .sum()
    };
    let (p0, p1) = (population(LogicalEncoding::ZERO_L), population(LogicalEncoding::ONE_L));
    let outcome = rng.gen::<f64>() * (p0 + p1) < p1;
    let word = LogicalEncoding::code_word(outcome);
    let norm = if outcome { p1 } else { p0 }.sqrt();
    let amplitudes = state
        .amplitudes
        .iter()
        .enumerate()
        .map(|(idx, &z)| if state.pair_local(idx, qubit) == word { z / norm } else { ZERO })
        .collect();
    Ok((outcome, PhysicalState { qubit_count: state.qubit_count, amplitudes }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    /// Largest leakage seen, including the initial state.
    pub max_leakage: f64,
    pub op_count: usize,
    /// The program's global phase; logical result = e^{i·global_phase}·decoded state.
    pub global_phase: f64,
}

pub fn run_program(program: &NativeProgram, initial: &str, model: &GateModel) -> Result<(PhysicalState, RunStats)> {
    run_program_traced(program, initial, model, |_, _, _| {})
}

/// As [`run_program`], calling `trace(step, op, leakage)` after each op.
pub fn run_program_traced<F>(
    program: &NativeProgram,
    initial: &str,
    model: &GateModel,
    trace: F,
) -> Result<(PhysicalState, RunStats)>
where
    F: FnMut(usize, &NativeOp, f64),
{
    if initial.chars().count() != program.qubit_count {
        return Err(Error::InvalidParameter {
            name: "initial",
            reason: format!("bitstring has {} qubits, program has {}", initial.chars().count(), program.qubit_count),
        });
    }
    let state = encode_basis(initial)?;
    run_on_state(program, state, model, trace)
}

/// Runs `program` on an arbitrary starting state of matching size.
pub fn run_on_state<F>(
    program: &NativeProgram,
    mut state: PhysicalState,
    model: &GateModel,
    mut trace: F,
) -> Result<(PhysicalState, RunStats)>
where
    F: FnMut(usize, &NativeOp, f64),
{
    program.validate()?;
    if state.qubit_count != program.qubit_count {
        return Err(Error::Dimension { expected: program.qubit_count, actual: state.qubit_count });
    }
    let mut max_leakage = leakage(&state);
    for (step, op) in program.ops.iter().enumerate() {
        apply_op(&mut state, op, model)?;
        let l = leakage(&state);
        max_leakage = max_leakage.max(l);
        trace(step, op, l);
    }
    Ok((state, RunStats { max_leakage, op_count: program.ops.len(), global_phase: program.global_phase }))
}

/// Logical unitary implemented by `program` on the code space, global phase
/// included.
pub fn program_logical_unitary(program: &NativeProgram, model: &GateModel) -> Result<Unitary> {
    let k = program.qubit_count;
    check_size(k)?;
    let dim = 1usize << k;
    let phase = Complex64::from_polar(1.0, program.global_phase);
    let mut m = ndarray::Array2::<Complex64>::zeros((dim, dim));
    for col in 0..dim {
        let mut e = vec![ZERO; dim];
        e[col] = Complex64::new(1.0, 0.0);
        let (out, _) = run_on_state(program, encode_logical(&e)?, model, |_, _, _| {})?;
        for (row, z) in decode_logical(&out, DEFAULT_LEAKAGE_TOL)?.into_iter().enumerate() {
            m[[row, col]] = z * phase;
        }
    }
    Unitary::new(m)
}
