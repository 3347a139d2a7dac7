#![no_std]
#![warn(missing_docs)]

//! Numerical models for adiabatic and superadiabatic (counter-diabatic)
//! quantum computation.
//!
//! The crate covers two families of time-dependent Hamiltonians:
//!
//! - the controlled-evolution gate model ([`ce_gates`]), where an ancilla
//!   qubit is rotated conditionally on a target register and a measurement
//!   heralds success;
//! - analog Grover search ([`grover`]) under linear, local-adiabatic,
//!   superenergetic and non-oracular schedules, plus its counter-diabatic
//!   completion.
//!
//! On top of those sit the energetic-cost functionals ([`cost`]), the
//! probabilistic-gate angle optimization ([`optimizer`]) and a unitary
//! propagator used to check transitionless driving ([`dynamics`]).
//!
//! Everything is `no_std` with `alloc`. Units: `hbar = 1` throughout; the gate
//! model carries its energy scale `omega` explicitly and search Hamiltonians
//! are dimensionless.

// `!(x > 0.0)` is written on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cd;
pub mod ce_gates;
pub mod cost;
pub mod dynamics;
mod error;
pub mod grover;
pub mod optimizer;
pub mod qcore;
pub mod quadrature;
pub mod regression;
pub mod rng;
pub mod roots;

pub use error::{Error, Result};

/// Which of a pair of levels: the lower (`Minus`) or the upper (`Plus`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Lower level.
    Minus,
    /// Upper level.
    Plus,
}
pub use qcore::{EigenDecomposition, Hermitian, Matrix, State, Unitary, C64};
