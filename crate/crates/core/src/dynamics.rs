//! Piecewise-constant midpoint propagation of `i d/dt |psi> = H(t/tau) |psi>`.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::qcore::{Hermitian, State};
use crate::{Error, Result};

/// Smallest accepted step count.
pub const MIN_STEPS: usize = 100;

/// Number of evenly spaced fidelity samples recorded along a run (including
/// both endpoints).
pub const TRACE_POINTS: usize = 101;

/// Output of a propagation.
#[derive(Debug, Clone)]
pub struct PropagationResult {
    /// `|psi(tau)>`.
    pub final_state: State,
    /// `(s, overlap^2)` samples.
    pub fidelity_trace: Vec<(f64, f64)>,
    /// Steps taken.
    pub steps: usize,
    /// Total time.
    pub tau: f64,
    /// Largest `| ||psi|| - 1 |` seen along the run.
    pub norm_drift: f64,
}

impl PropagationResult {
    /// Smallest recorded fidelity.
    pub fn min_fidelity(&self) -> f64 {
        self.fidelity_trace.iter().map(|p| p.1).fold(f64::INFINITY, f64::min)
    }
}

/// Default step count `max(2000, ceil(200 tau max_norm))`.
pub fn default_steps(tau: f64, max_norm: f64) -> usize {
    let want = (200.0 * tau * max_norm).ceil();
    if want.is_finite() && want > 2000.0 {
        want as usize
    } else {
        2000
    }
}

/// `max_s ||H(s)||_2` over `samples + 1` evenly spaced points.
pub fn estimate_max_norm(mut h_of_s: impl FnMut(f64) -> Result<Hermitian>, samples: usize) -> Result<f64> {
    let samples = samples.max(1);
    let mut best = 0.0f64;
    for k in 0..=samples {
        best = best.max(h_of_s(k as f64 / samples as f64)?.spectral_norm()?);
    }
    Ok(best)
}

fn trace_indices(steps: usize) -> impl Iterator<Item = usize> {
    (0..TRACE_POINTS).map(move |j| (j * steps + (TRACE_POINTS - 1) / 2) / (TRACE_POINTS - 1))
}

fn run(
    mut h_of_s: impl FnMut(f64) -> Result<Hermitian>,
    psi0: &State,
    tau: f64,
    steps: usize,
    mut score: impl FnMut(f64, &State) -> Result<f64>,
) -> Result<PropagationResult> {
    if steps < MIN_STEPS {
        return Err(Error::InvalidParameter { name: "steps", reason: "at least 100 steps required" });
    }
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParameter { name: "tau", reason: "must be finite and non-negative" });
    }
    let mut marks = trace_indices(steps).peekable();
    let mut trace = Vec::with_capacity(TRACE_POINTS);
    let mut psi = psi0.clone();
    let mut drift = 0.0f64;
    let dt = tau / steps as f64;
    for k in 0..=steps {
        while marks.peek() == Some(&k) {
            let s = k as f64 / steps as f64;
            trace.push((s, score(s, &psi)?));
            marks.next();
        }
        if k == steps {
            break;
        }
        let s_mid = (k as f64 + 0.5) / steps as f64;
        let h = h_of_s(s_mid)?;
        if h.dim() != psi.dim() {
            return Err(Error::DimensionMismatch { expected: psi.dim(), found: h.dim() });
        }
        psi = h.expm_step(dt)?.apply(&psi)?;
        if psi.amplitudes().iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::NonFinite("state amplitude"));
        }
        drift = drift.max((psi.norm() - 1.0).abs());
    }
    Ok(PropagationResult { final_state: psi, fidelity_trace: trace, steps, tau, norm_drift: drift })
}

/// Propagates `psi0` over `[0, tau]`. The trace records `|<psi0|psi(s)>|^2`.
pub fn propagate(
    h_of_s: impl FnMut(f64) -> Result<Hermitian>,
    psi0: &State,
    tau: f64,
    steps: usize,
) -> Result<PropagationResult> {
    let start = psi0.clone();
    run(h_of_s, psi0, tau, steps, |_, psi| Ok(start.fidelity(psi)))
}

/// Propagates `psi0` and records the weight of `psi(s)` in the instantaneous
/// ground space returned by `ground_provider` (an orthonormal set).
pub fn ground_fidelity_trace(
    h_of_s: impl FnMut(f64) -> Result<Hermitian>,
    psi0: &State,
    tau: f64,
    steps: usize,
    mut ground_provider: impl FnMut(f64) -> Result<Vec<State>>,
) -> Result<PropagationResult> {
    run(h_of_s, psi0, tau, steps, |s, psi| Ok(ground_provider(s)?.iter().map(|g| g.fidelity(psi)).sum()))
}
