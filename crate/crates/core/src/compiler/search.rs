//! Breadth-first approximation of single-qubit gates by words over the
//! fixed-angle gates iSWAP(π/2), PHASE(π/2), PHASE(π/4).

use std::collections::HashSet;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::program::{NativeOp, NativeProgram};
use super::GateModel;
use crate::error::{Error, Result};
use crate::gates::{rx, rz};
use crate::unitary::{phase_invariant_distance, Unitary};

pub const MAX_SEARCH_DEPTH: usize = 20;

/// Visited-set size at which the search stops expanding.
pub const NODE_LIMIT: usize = 5_000_000;

/// Grid spacing for deduplicating phase-normalised unitaries.
const GRID: f64 = 1e-6;

/// Generators in the order used for lexicographic tie-breaking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FixedGate {
    /// iSWAP(π/2); code-space action R_x(−π/2).
    IswapHalfPi,
    /// PHASE(π/2); code-space action R_z(π/2).
    PhaseHalfPi,
    /// PHASE(π/4); code-space action R_z(π/4).
    PhaseQuarterPi,
}

impl FixedGate {
    pub const ALL: [FixedGate; 3] = [FixedGate::IswapHalfPi, FixedGate::PhaseHalfPi, FixedGate::PhaseQuarterPi];

    pub fn logical(self) -> Unitary {
        match self {
            FixedGate::IswapHalfPi => rx(-FRAC_PI_2),
            FixedGate::PhaseHalfPi => rz(FRAC_PI_2),
            FixedGate::PhaseQuarterPi => rz(FRAC_PI_4),
        }
    }

    pub fn native_op(self, pair: usize, model: &GateModel) -> NativeOp {
        match self {
            FixedGate::IswapHalfPi => NativeOp::Iswap { pair, theta: model.iswap_angle_for(-FRAC_PI_2) },
            FixedGate::PhaseHalfPi => NativeOp::Phase { pair, theta: FRAC_PI_2, phi: 0.0 },
            FixedGate::PhaseQuarterPi => NativeOp::Phase { pair, theta: FRAC_PI_4, phi: 0.0 },
        }
    }
}

impl fmt::Display for FixedGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FixedGate::IswapHalfPi => "Rx(-pi/2)",
            FixedGate::PhaseHalfPi => "Rz(pi/2)",
            FixedGate::PhaseQuarterPi => "Rz(pi/4)",
        })
    }
}

/// Product of a word, first letter applied first.
pub fn word_unitary(word: &[FixedGate]) -> Unitary {
    word.iter().fold(Unitary::identity(2), |acc, g| &g.logical() * &acc)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedSetMatch {
    /// Time-ordered word.
    pub word: Vec<FixedGate>,
    /// Re-verified phase-invariant distance to the target.
    pub distance: f64,
    /// φ with target ≈ e^{iφ}·word_unitary(word).
    pub phase: f64,
    pub program: NativeProgram,
    pub nodes_explored: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SearchOutcome {
    Found(FixedSetMatch),
    NotFound {
        epsilon: f64,
        max_depth: usize,
        /// Smallest distance seen among explored words.
        best_distance: f64,
        nodes_explored: usize,
        /// True when the node limit stopped the search before `max_depth`.
        truncated: bool,
    },
}

impl SearchOutcome {
    pub fn found(&self) -> Option<&FixedSetMatch> {
        match self {
            SearchOutcome::Found(m) => Some(m),
            SearchOutcome::NotFound { .. } => None,
        }
    }
}

type Key = [i64; 8];

fn dedup_key(m: &[Complex64; 4]) -> Key {
    let pivot = if m[0].norm() > 0.5 { m[0] } else { m[1] };
    let unphase = pivot.conj() / pivot.norm();
    let mut k = [0i64; 8];
    for (i, z) in m.iter().enumerate() {
        let w = z * unphase;
        k[2 * i] = (w.re / GRID).round() as i64;
        k[2 * i + 1] = (w.im / GRID).round() as i64;
    }
    k
}

fn mul2(a: &[Complex64; 4], b: &[Complex64; 4]) -> [Complex64; 4] {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

fn to_flat(u: &Unitary) -> [Complex64; 4] {
    [u.get(0, 0), u.get(0, 1), u.get(1, 0), u.get(1, 1)]
}

fn distance_flat(target: &Unitary, m: &[Complex64; 4]) -> f64 {
    let b = ndarray::arr2(&[[m[0], m[1]], [m[2], m[3]]]);
    phase_invariant_distance(target.matrix(), &b).0
}

struct Node {
    parent: usize,
    gate: Option<FixedGate>,
    m: [Complex64; 4],
}

fn word_of(nodes: &[Node], mut idx: usize) -> Vec<FixedGate> {
    let mut word = Vec::new();
    while let Some(g) = nodes[idx].gate {
        word.push(g);
        idx = nodes[idx].parent;
    }
    word.reverse();
    word
}

/// Shortest word within `epsilon` of `u` up to global phase, ties broken by
/// lexicographic order of the time-ordered word in [`FixedGate::ALL`] order.
///
/// The result is re-multiplied from scratch before it is returned.
pub fn approximate_fixed_set(
    u: &Unitary,
    epsilon: f64,
    max_depth: usize,
    target: usize,
    model: &GateModel,
) -> Result<SearchOutcome> {
    if u.dim() != 2 {
        return Err(Error::Dimension { expected: 2, actual: u.dim() });
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidParameter { name: "epsilon", reason: format!("must be positive, got {epsilon}") });
    }
    if max_depth > MAX_SEARCH_DEPTH {
        return Err(Error::InvalidParameter {
            name: "max_depth",
            reason: format!("at most {MAX_SEARCH_DEPTH}, got {max_depth}"),
        });
    }
    let gens: Vec<(FixedGate, [Complex64; 4])> = FixedGate::ALL.iter().map(|&g| (g, to_flat(&g.logical()))).collect();

    let identity = to_flat(&Unitary::identity(2));
    let mut nodes = vec![Node { parent: 0, gate: None, m: identity }];
    let mut seen: HashSet<Key> = HashSet::from([dedup_key(&identity)]);
    let mut best = distance_flat(u, &identity);
    let mut hit = (best <= epsilon).then_some(0);
    let mut frontier = vec![0usize];
    let mut truncated = false;

    let mut depth = 0;
    while hit.is_none() && depth < max_depth && !frontier.is_empty() {
        depth += 1;
        let mut next = Vec::new();
        'level: for &parent in &frontier {
            for (g, gm) in &gens {
                let m = mul2(gm, &nodes[parent].m);
                let d = distance_flat(u, &m);
                best = best.min(d);
                if d <= epsilon {
                    nodes.push(Node { parent, gate: Some(*g), m });
                    hit = Some(nodes.len() - 1);
                    break 'level;
                }
                if seen.insert(dedup_key(&m)) {
                    nodes.push(Node { parent, gate: Some(*g), m });
                    next.push(nodes.len() - 1);
                    if nodes.len() >= NODE_LIMIT {
                        truncated = true;
                        break 'level;
                    }
                }
            }
        }
        if truncated {
            break;
        }
        frontier = next;
    }

    let nodes_explored = nodes.len();
    let Some(idx) = hit else {
        return Ok(SearchOutcome::NotFound { epsilon, max_depth, best_distance: best, nodes_explored, truncated });
    };
    let word = word_of(&nodes, idx);
    let (distance, phase) = phase_invariant_distance(u.matrix(), word_unitary(&word).matrix());
    if distance > epsilon {
        return Ok(SearchOutcome::NotFound { epsilon, max_depth, best_distance: distance, nodes_explored, truncated });
    }
    let mut program = NativeProgram::new(target + 1);
    for g in &word {
        program.push(g.native_op(target, model));
    }
    program.add_phase(phase);
    Ok(SearchOutcome::Found(FixedSetMatch { word, distance, phase, program, nodes_explored }))
}
