//! Angle optimization of the probabilistic controlled-evolution gate.
//!
//! With `theta0 < pi` a single sweep succeeds with probability
//! `sin^2(theta0/2)`, so the average cost over repetitions is
//! `2 csc^2(theta0/2) sqrt(1 + theta0^2 / (4 (omega tau)^2))` in units of
//! `hbar omega`. This module finds the minimizing angle for a given
//! `omega tau`. All energies here are in units of `hbar omega`.

use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::roots::{bisect, golden_section_min};
use crate::{Error, Result};

/// Bisection iteration cap.
pub const MAX_BISECTIONS: usize = 200;

/// Critical angle `theta_c`, the root of `tan(theta/2) = theta` in `(0, pi)`.
/// Below it the stationarity condition has no real `omega tau`.
pub const THETA_CRITICAL: f64 = 2.331_122_370_414_422_6;

/// Average cost `<N> * Sigma_sing`. Returns `+inf` when `sin(theta0/2)`
/// vanishes.
pub fn avg_cost(omega_tau: f64, theta0: f64) -> f64 {
    let s = (theta0 / 2.0).sin();
    if !(theta0 > 0.0) || s == 0.0 {
        return f64::INFINITY;
    }
    2.0 / (s * s) * (1.0 + theta0 * theta0 / (4.0 * omega_tau * omega_tau)).sqrt()
}

/// Prefactor `eta` in `d avg_cost / d theta0 = eta (theta0 - (4 w^2 + theta0^2) cot(theta0/2))`.
pub fn eta(theta0: f64, omega_tau: f64) -> f64 {
    let s = (theta0 / 2.0).sin();
    let w2 = omega_tau * omega_tau;
    1.0 / (s * s) / (2.0 * w2 * (1.0 + theta0 * theta0 / (4.0 * w2)).sqrt())
}

/// `d avg_cost / d theta0`.
pub fn avg_cost_derivative(omega_tau: f64, theta0: f64) -> f64 {
    let cot = 1.0 / (theta0 / 2.0).tan();
    eta(theta0, omega_tau) * (theta0 - (4.0 * omega_tau * omega_tau + theta0 * theta0) * cot)
}

/// `omega tau = (sqrt(theta0)/2) sqrt(tan(theta0/2) - theta0)`: the `omega tau`
/// for which `theta0` is stationary.
pub fn omega_tau_of_theta(theta0: f64) -> Result<f64> {
    if !(theta0 > 0.0 && theta0 < PI) {
        return Err(Error::AngleOutOfDomain { theta0 });
    }
    let gap = (theta0 / 2.0).tan() - theta0;
    // Rounding at theta_c itself can leave a gap of a few ulps below zero.
    if gap < -16.0 * f64::EPSILON * theta0 {
        return Err(Error::InfeasibleAngle { theta0 });
    }
    Ok(theta0.sqrt() / 2.0 * gap.max(0.0).sqrt())
}

/// `theta_c` recomputed by bisection on `tan(x) = 2x` over `(1.1, 1.3)`.
pub fn critical_angle() -> Result<f64> {
    let root = bisect(|x| x.tan() - 2.0 * x, 1.1, 1.3, 0.0, MAX_BISECTIONS)?;
    Ok(2.0 * root.x)
}

/// Optimal angle and derived quantities at one `omega tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaOptResult {
    /// Input.
    pub omega_tau: f64,
    /// Minimizing angle.
    pub theta_min: f64,
    /// `avg_cost(omega_tau, theta_min)`.
    pub avg_cost_at_min: f64,
    /// `avg_cost_at_min / avg_cost(omega_tau, pi)`.
    pub sigma_rel: f64,
    /// `eta(theta_min, omega_tau)`.
    pub eta_at_min: f64,
    /// `|omega_tau_of_theta(theta_min) - omega_tau| / omega_tau`.
    pub relative_residual: f64,
    /// Distance to the golden-section minimizer of `avg_cost`.
    pub golden_check: f64,
}

/// Solves `omega_tau_of_theta(theta) = omega_tau` by bisection on
/// `(theta_c, pi)` and cross-checks against a direct minimization.
pub fn theta_min(omega_tau: f64) -> Result<ThetaOptResult> {
    if !(omega_tau > 0.0 && omega_tau.is_finite()) {
        return Err(Error::InvalidParameter { name: "omega_tau", reason: "must be positive and finite" });
    }
    let residual = |t: f64| {
        let gap = ((t / 2.0).tan() - t).max(0.0);
        t.sqrt() / 2.0 * gap.sqrt() - omega_tau
    };
    // Beyond ~1e8 the stationary angle is within rounding of pi.
    let theta = if residual(PI) <= 0.0 { PI } else { bisect(residual, THETA_CRITICAL, PI, 0.0, MAX_BISECTIONS)?.x };
    let (golden, _) = golden_section_min(|t| avg_cost(omega_tau, t), THETA_CRITICAL - 0.5, PI, 1e-12);
    let at_min = avg_cost(omega_tau, theta);
    let relative_residual = match omega_tau_of_theta(theta) {
        Ok(w) => (w - omega_tau).abs() / omega_tau,
        Err(_) => f64::NAN,
    };
    Ok(ThetaOptResult {
        omega_tau,
        theta_min: theta,
        avg_cost_at_min: at_min,
        sigma_rel: at_min / avg_cost(omega_tau, PI),
        eta_at_min: eta(theta, omega_tau),
        relative_residual,
        golden_check: (golden - theta).abs(),
    })
}

/// Fraction of the deterministic (`theta0 = pi`) cost needed at the optimum.
pub fn sigma_rel(omega_tau: f64) -> Result<f64> {
    Ok(theta_min(omega_tau)?.sigma_rel)
}
