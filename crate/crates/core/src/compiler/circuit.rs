//! Logical circuits over the textbook gate set and their direct
//! 2^k-dimensional simulation.
//!
//! Text format: one gate per line, `NAME target [target2]`, `#` starts a
//! comment. CNOT takes `control target`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::StandardGate;
use crate::unitary::Unitary;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateApplication {
    pub gate: StandardGate,
    /// `[target]`, or `[control, target]` for CNOT.
    pub targets: Vec<usize>,
    /// 1-based source line, 0 when built in code.
    #[serde(default)]
    pub line: usize,
}

impl GateApplication {
    pub fn new(gate: StandardGate, targets: &[usize]) -> Self {
        GateApplication { gate, targets: targets.to_vec(), line: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Circuit {
    pub qubit_count: usize,
    pub gates: Vec<GateApplication>,
}

impl Circuit {
    pub fn new(qubit_count: usize) -> Self {
        Circuit { qubit_count, gates: Vec::new() }
    }

    /// Builds a circuit, sizing the register from the largest target.
    pub fn from_gates(gates: Vec<GateApplication>) -> Result<Self> {
        let qubit_count = gates.iter().flat_map(|g| g.targets.iter()).map(|t| t + 1).max().unwrap_or(1);
        let c = Circuit { qubit_count, gates };
        c.validate()?;
        Ok(c)
    }

    pub fn push(&mut self, gate: StandardGate, targets: &[usize]) -> &mut Self {
        self.gates.push(GateApplication::new(gate, targets));
        self
    }

    pub fn validate(&self) -> Result<()> {
        for g in &self.gates {
            if g.targets.len() != g.gate.arity() {
                return Err(Error::InvalidTarget(format!("{} takes {} target(s), got {}", g.gate, g.gate.arity(), g.targets.len())));
            }
            if let Some(t) = g.targets.iter().find(|&&t| t >= self.qubit_count) {
                return Err(Error::InvalidTarget(format!("{} targets qubit {t} outside a {}-qubit register", g.gate, self.qubit_count)));
            }
            if g.targets.len() == 2 && g.targets[0] == g.targets[1] {
                return Err(Error::InvalidTarget(format!("{} control and target coincide", g.gate)));
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut gates = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let mut fields = body.split_whitespace();
            let name = fields.next().unwrap_or_default();
            let gate: StandardGate = name
                .parse()
                .map_err(|_| Error::Parse { line, message: format!("unknown gate `{name}`") })?;
            let targets = fields
                .map(|f| f.parse::<usize>().map_err(|_| Error::Parse { line, message: format!("`{f}` is not a qubit index") }))
                .collect::<Result<Vec<_>>>()?;
            if targets.len() != gate.arity() {
                return Err(Error::Parse {
                    line,
                    message: format!("{gate} takes {} target(s), got {}", gate.arity(), targets.len()),
                });
            }
            if targets.len() == 2 && targets[0] == targets[1] {
                return Err(Error::Parse { line, message: format!("{gate} control and target coincide") });
            }
            gates.push(GateApplication { gate, targets, line });
        }
        Circuit::from_gates(gates)
    }
}

/// Applies the circuit to a 2^k state vector, qubit `j` on index bit `j`.
pub fn simulate_logical(circuit: &Circuit, state: &mut [Complex64]) {
    assert_eq!(state.len(), 1 << circuit.qubit_count, "state length must be 2^qubit_count");
    for g in &circuit.gates {
        match g.gate {
            StandardGate::Cnot => {
                let (c, t) = (g.targets[0], g.targets[1]);
                for idx in 0..state.len() {
                    if idx >> c & 1 == 1 && idx >> t & 1 == 0 {
                        state.swap(idx, idx | 1 << t);
                    }
                }
            }
            single => {
                let m = single.matrix();
                let q = g.targets[0];
                for idx in 0..state.len() {
                    if idx >> q & 1 == 0 {
                        let (a, b) = (state[idx], state[idx | 1 << q]);
                        state[idx] = m.get(0, 0) * a + m.get(0, 1) * b;
                        state[idx | 1 << q] = m.get(1, 0) * a + m.get(1, 1) * b;
                    }
                }
            }
        }
    }
}

/// Output state for a basis input given as a bitstring (character `j` is
/// qubit `j`).
///
/// # Panics
///
/// If `bits` is not a `qubit_count`-long string of `0`/`1`.
pub fn simulate_reference(circuit: &Circuit, bits: &str) -> Vec<Complex64> {
    assert_eq!(bits.len(), circuit.qubit_count, "bitstring length must equal qubit_count");
    let idx = bits.chars().enumerate().fold(0usize, |acc, (j, ch)| match ch {
        '0' => acc,
        '1' => acc | 1 << j,
        other => panic!("`{other}` is not a binary digit"),
    });
    let mut v = vec![Complex64::new(0.0, 0.0); 1 << circuit.qubit_count];
    v[idx] = Complex64::new(1.0, 0.0);
    simulate_logical(circuit, &mut v);
    v
}

/// Full 2^k × 2^k logical unitary of the circuit.
pub fn logical_unitary(circuit: &Circuit) -> Unitary {
    let dim = 1usize << circuit.qubit_count;
    let mut m = ndarray::Array2::<Complex64>::zeros((dim, dim));
    for col in 0..dim {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[col] = Complex64::new(1.0, 0.0);
        simulate_logical(circuit, &mut v);
        for (row, z) in v.into_iter().enumerate() {
            m[[row, col]] = z;
        }
    }
    Unitary::from_exact(m)
}
