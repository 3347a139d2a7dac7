//! Least-squares fit of `log y = slope * log x + intercept`.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Log-log straight-line fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLogFit {
    /// Complexity exponent.
    pub slope: f64,
    /// Intercept in natural-log units.
    pub intercept: f64,
    /// Coefficient of determination, clamped to `[0, 1]`.
    pub r2: f64,
}

/// Fits `ln y` against `ln x`. Needs at least two points, all positive.
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> Result<LogLogFit> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidData("x and y lengths differ"));
    }
    if xs.len() < 2 {
        return Err(Error::InvalidData("need at least two points"));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidData("log-log fit needs positive finite values"));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidData("all x values equal"));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ly.iter().map(|y| (y - my) * (y - my)).sum();
    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    // A flat series is fitted perfectly by a zero slope.
    let r2 = if ss_tot <= 1e-30 { 1.0 } else { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) };
    Ok(LogLogFit { slope, intercept, r2 })
}
