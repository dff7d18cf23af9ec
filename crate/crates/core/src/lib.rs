//! Dense state-vector simulation of small qubit registers, a circuit IR with
//! a peephole rewriter, and the Bernstein-Vazirani oracle problem solved both
//! classically and with a single quantum query.
//!
//! Qubit `j` is bit `2^j` of a basis index; kets print qubit `n-1` first.

pub mod bv;
pub mod circuit;
pub mod error;
pub mod gates;
pub mod matrix;
pub mod measurement;
pub mod rng;
pub mod state;

pub use error::{Error, Result};
pub use gates::Gate;
pub use matrix::GateMatrix;
pub use rng::RandomSource;
pub use state::{Amplitude, BasisIndex, StateVector};
