//! Generic counter-diabatic term built from an instantaneous eigenframe.
//!
//! For eigenstates `|n(s)>` with s-derivatives `|d_s n>` and total time `tau`,
//!
//! `H_CD = (i / tau) sum_n ( |d_s n><n| - <n|d_s n> |n><n| )`.
//!
//! The projection term vanishes for real or parallel-transported frames; its
//! size is reported so callers can check that.

use alloc::vec::Vec;

use crate::qcore::{Hermitian, Matrix, State, C64};
use crate::{Error, Result};

/// An eigenstate together with its derivative with respect to `s`.
#[derive(Debug, Clone)]
pub struct FramePoint {
    /// Instantaneous eigenstate.
    pub state: State,
    /// `d/ds` of the eigenstate (not normalized).
    pub derivative: Vec<C64>,
}

/// Counter-diabatic operator with the size of its Berry-connection part.
#[derive(Debug, Clone)]
pub struct CounterDiabatic {
    /// The operator.
    pub operator: Hermitian,
    /// `max_n |<n|d_s n>|`: zero for real, smoothly gauged frames.
    pub connection: f64,
}

/// Builds the counter-diabatic term for the given frame.
///
/// The result is validated as Hermitian to `1e-10`; an incomplete frame whose
/// tangents leave the tracked subspace fails that check.
pub fn counter_diabatic(frame: &[FramePoint], tau: f64) -> Result<CounterDiabatic> {
    let dim = frame
        .first()
        .map(|p| p.state.dim())
        .ok_or(Error::InvalidParameter { name: "frame", reason: "must contain at least one eigenstate" })?;
    if !(tau > 0.0) {
        return Err(Error::InvalidParameter { name: "tau", reason: "must be positive" });
    }
    let mut acc = Matrix::zeros(dim);
    let mut connection: f64 = 0.0;
    for p in frame {
        if p.state.dim() != dim || p.derivative.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: p.derivative.len() });
        }
        let n = p.state.amplitudes();
        let berry: C64 = n.iter().zip(&p.derivative).map(|(a, b)| a.conj() * b).sum();
        connection = connection.max(berry.norm());
        let tangent: Vec<C64> = p.derivative.iter().zip(n).map(|(d, a)| d - a * berry).collect();
        acc = acc.add(&Matrix::outer(&tangent, n));
    }
    let op = acc.scale(C64::new(0.0, 1.0 / tau));
    let operator = Hermitian::with_tolerance(op, 1e-10)?;
    Ok(CounterDiabatic { operator, connection })
}
