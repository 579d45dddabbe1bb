use std::fmt::{self, Write as _};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::unitary::wrap_angle;

/// One native instruction. Pair indices name logical qubits; pair `j` is
/// physical qubits (2j, 2j+1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NativeOp {
    /// Partial swap iSWAP(θ) on a pair.
    Iswap { pair: usize, theta: f64 },
    /// PHASE(θ, φ) on a pair.
    Phase { pair: usize, theta: f64, phi: f64 },
    /// Swap of the target pair conditioned on the control pair holding |1_L⟩.
    Ciswap { control: usize, target: usize },
}

impl NativeOp {
    pub fn kind(&self) -> &'static str {
        match self {
            NativeOp::Iswap { .. } => "ISWAP",
            NativeOp::Phase { .. } => "PHASE",
            NativeOp::Ciswap { .. } => "CISWAP",
        }
    }

    pub fn targets(&self) -> Vec<usize> {
        match *self {
            NativeOp::Iswap { pair, .. } | NativeOp::Phase { pair, .. } => vec![pair],
            NativeOp::Ciswap { control, target } => vec![control, target],
        }
    }

    pub fn angles(&self) -> Vec<f64> {
        match *self {
            NativeOp::Iswap { theta, .. } => vec![theta],
            NativeOp::Phase { theta, phi, .. } => vec![theta, phi],
            NativeOp::Ciswap { .. } => vec![],
        }
    }

    pub fn validate(&self, qubit_count: usize) -> Result<()> {
        for t in self.targets() {
            if t >= qubit_count {
                return Err(Error::InvalidTarget(format!("{} references pair {t} but the program has {qubit_count}", self.kind())));
            }
        }
        if let NativeOp::Ciswap { control, target } = *self {
            if control == target {
                return Err(Error::InvalidTarget(format!("CISWAP control and target are both pair {control}")));
            }
        }
        if self.angles().iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter { name: "angle", reason: format!("{} has a non-finite angle", self.kind()) });
        }
        Ok(())
    }
}

impl fmt::Display for NativeOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NativeOp::Iswap { pair, theta } => write!(f, "ISWAP {pair} {theta:.12}"),
            NativeOp::Phase { pair, theta, phi } => write!(f, "PHASE {pair} {theta:.12} {phi:.12}"),
            NativeOp::Ciswap { control, target } => write!(f, "CISWAP {control} {target}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct OpRecord {
    kind: String,
    targets: Vec<usize>,
    angles: Vec<f64>,
}

impl Serialize for NativeOp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OpRecord { kind: self.kind().to_string(), targets: self.targets(), angles: self.angles() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for NativeOp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = OpRecord::deserialize(d)?;
        let bad = || D::Error::custom(format!("malformed {} op: targets {:?}, angles {:?}", r.kind, r.targets, r.angles));
        match (r.kind.as_str(), r.targets.as_slice(), r.angles.as_slice()) {
            ("ISWAP", &[pair], &[theta]) => Ok(NativeOp::Iswap { pair, theta }),
            ("PHASE", &[pair], &[theta, phi]) => Ok(NativeOp::Phase { pair, theta, phi }),
            ("PHASE", &[pair], &[theta]) => Ok(NativeOp::Phase { pair, theta, phi: theta }),
            ("CISWAP", &[control, target], &[]) => Ok(NativeOp::Ciswap { control, target }),
            ("ISWAP" | "PHASE" | "CISWAP", _, _) => Err(bad()),
            (other, _, _) => Err(D::Error::custom(format!("unknown op kind `{other}`"))),
        }
    }
}

/// Ordered native instructions over `qubit_count` logical qubits.
///
/// The program's code-space action A and the intended logical unitary U are
/// related by U = e^{i·global_phase}·A.
#[derive(Debug, Clone, PartialEq)]
pub struct NativeProgram {
    pub qubit_count: usize,
    pub global_phase: f64,
    pub ops: Vec<NativeOp>,
}

impl NativeProgram {
    pub fn new(qubit_count: usize) -> Self {
        NativeProgram { qubit_count, global_phase: 0.0, ops: Vec::new() }
    }

    pub fn push(&mut self, op: NativeOp) {
        self.ops.push(op);
    }

    pub fn add_phase(&mut self, phase: f64) {
        self.global_phase = wrap_angle(self.global_phase + phase);
    }

    /// Appends `other`, widening the register if needed.
    pub fn extend(&mut self, other: NativeProgram) {
        self.qubit_count = self.qubit_count.max(other.qubit_count);
        self.add_phase(other.global_phase);
        self.ops.extend(other.ops);
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if !self.global_phase.is_finite() {
            return Err(Error::InvalidParameter { name: "global_phase", reason: "must be finite".into() });
        }
        self.ops.iter().try_for_each(|op| op.validate(self.qubit_count))
    }

    /// Plain-text listing, one op per line, for diffing.
    pub fn disassemble(&self) -> String {
        let mut s = format!("# qubits={} global_phase={:.12}\n", self.qubit_count, self.global_phase);
        for op in &self.ops {
            let _ = writeln!(s, "{op}");
        }
        s
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let p: NativeProgram = serde_json::from_str(s)?;
        p.validate()?;
        Ok(p)
    }
}

#[derive(Serialize, Deserialize)]
struct ProgramRecord {
    qubit_count: usize,
    global_phase: [f64; 2],
    ops: Vec<NativeOp>,
}

impl Serialize for NativeProgram {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ProgramRecord {
            qubit_count: self.qubit_count,
            global_phase: [self.global_phase.cos(), self.global_phase.sin()],
            ops: self.ops.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NativeProgram {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ProgramRecord::deserialize(d)?;
        let [re, im] = r.global_phase;
        Ok(NativeProgram { qubit_count: r.qubit_count, global_phase: im.atan2(re), ops: r.ops })
    }
}
