//! Simulation and compilation toolkit for a cavity-QED quantum processor built
//! from multi-atomic coherent ensembles.
//!
//! Two ensembles ("nodes") share a common cavity mode and exchange a single
//! excitation through virtual photons. A photon parked in the first node's
//! microcavity detunes the exchange and blocks it, which yields a
//! photon-controlled iSWAP. Logical qubits are carried by node pairs
//! (`|0_L> = |01>`, `|1_L> = |10>`), on which the native set
//! {Controlled-iSWAP, iSWAP(θ), PHASE(θ)} is universal.
//!
//! Module map:
//!
//! * [`physical`] raw parameters and derived effective couplings.
//! * [`dynamics`] two-node amplitude evolution, blockade and gate extraction.
//! * [`unitary`] dense unitary matrices and phase-invariant distance.
//! * [`gates`] native and textbook gate matrices, code-space restriction.
//! * [`compiler`] Euler lowering and fixed-angle approximation search.
//! * [`sim`] state-vector execution of native programs over node pairs.
//! * [`decoherence`] closed-form iSWAP fidelity and gate-time estimates.
//!
//! Units are angular frequency (rad/s) with ħ = 1 and time in seconds.

pub mod compiler;
pub mod decoherence;
pub mod dynamics;
pub mod error;
pub mod gates;
pub mod physical;
pub mod sim;
pub mod unitary;

pub use error::{Error, Result};
pub use num_complex::Complex64;
