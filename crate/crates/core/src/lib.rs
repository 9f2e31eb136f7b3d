//! QuAND circuit synthesis and mixed qubit/qutrit simulation.
//!
//! The crate builds multiply-controlled gates, reversible arithmetic and
//! Grover circuits from the QuAND gate (an `X` followed by a `|11> <-> |20>`
//! exchange), and verifies them on a dense statevector simulator whose wires
//! are qubits or qutrits.

pub mod analysis;
pub mod arith;
pub mod error;
pub mod grover;
pub mod ir;
pub mod scalar;
pub mod sim;
pub mod synth;

pub use error::{Error, Result};
pub use ir::{
    BranchingTree, Circuit, CircuitLabel, ConnectivityGraph, DepthMode, GateCounts, GateKind, Op,
    Wire,
};
pub use scalar::Real;

pub type StateVector64 = sim::StateVector<f64>;
pub type StateVector32 = sim::StateVector<f32>;
pub type TruthTable64 = sim::TruthTable<f64>;
pub type TruthTable32 = sim::TruthTable<f32>;
