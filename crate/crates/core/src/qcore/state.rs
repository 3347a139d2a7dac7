use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::{C64, NORM_TOL};
use crate::{Error, Result};

/// Normalized complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    amps: Vec<C64>,
}

impl State {
    /// Wraps amplitudes that are already normalized to within [`NORM_TOL`].
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidParameter { name: "amplitudes", reason: "dimension must be positive" });
        }
        let norm = l2(&amps);
        if !norm.is_finite() {
            return Err(Error::NonFinite("state amplitudes"));
        }
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidParameter { name: "amplitudes", reason: "not normalized" });
        }
        Ok(State { amps })
    }

    /// Normalizes arbitrary non-zero amplitudes.
    pub fn normalized(mut amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidParameter { name: "amplitudes", reason: "dimension must be positive" });
        }
        let norm = l2(&amps);
        if !norm.is_finite() {
            return Err(Error::NonFinite("state amplitudes"));
        }
        if norm < 1e-300 {
            return Err(Error::DegenerateInput("zero vector cannot be normalized"));
        }
        for a in &mut amps {
            *a /= norm;
        }
        Ok(State { amps })
    }

    /// No checks; used where unitarity already guarantees the norm.
    pub(crate) fn from_raw(amps: Vec<C64>) -> Self {
        State { amps }
    }

    /// Computational basis vector `|index>`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index out of range");
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        State { amps }
    }

    /// Uniform superposition `|+> = N^{-1/2} sum_i |i>`.
    pub fn uniform(dim: usize) -> Self {
        let a = 1.0 / (dim as f64).sqrt();
        State { amps: vec![C64::new(a, 0.0); dim] }
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    /// Amplitudes.
    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    /// Consumes the state, returning the amplitudes.
    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    /// Euclidean norm (1 up to rounding).
    pub fn norm(&self) -> f64 {
        l2(&self.amps)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &State) -> C64 {
        inner(&self.amps, &other.amps)
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &State) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Kronecker product `self (x) other`.
    pub fn tensor(&self, other: &State) -> State {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        State { amps }
    }

    /// Multiplies by a global phase `e^{i phase}`.
    pub fn with_phase(&self, phase: f64) -> State {
        let p = C64::new(0.0, phase).exp();
        State { amps: self.amps.iter().map(|a| a * p).collect() }
    }
}

/// `<a|b>` for raw amplitude slices.
pub(crate) fn inner(a: &[C64], b: &[C64]) -> C64 {
    assert_eq!(a.len(), b.len(), "inner product dimension mismatch");
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn l2(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}
