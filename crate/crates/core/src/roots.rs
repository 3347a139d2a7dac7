//! Scalar root finding and one-dimensional minimization.

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Outcome of a bisection.
#[derive(Debug, Clone, Copy)]
pub struct Root {
    /// Abscissa of the root.
    pub x: f64,
    /// `f(x)`.
    pub residual: f64,
    /// Iterations spent.
    pub iterations: usize,
}

/// Bisection on `[lo, hi]` where `f(lo)` and `f(hi)` have opposite signs.
///
/// Stops when `|f(mid)| <= f_tol`, when the bracket cannot shrink further in
/// floating point, or after `max_iter` halvings.
pub fn bisect(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, f_tol: f64, max_iter: usize) -> Result<Root> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if !flo.is_finite() || !fhi.is_finite() {
        return Err(Error::NonFinite("bisection bracket"));
    }
    if flo == 0.0 {
        return Ok(Root { x: lo, residual: 0.0, iterations: 0 });
    }
    if fhi == 0.0 {
        return Ok(Root { x: hi, residual: 0.0, iterations: 0 });
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::RangeExhausted { lo, hi });
    }
    let mut best = Root { x: lo, residual: flo, iterations: 0 };
    for it in 1..=max_iter {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.abs() < best.residual.abs() || it == 1 {
            best = Root { x: mid, residual: fm, iterations: it };
        }
        best.iterations = it;
        if fm.abs() <= f_tol || mid <= lo || mid >= hi {
            return Ok(Root { x: mid, residual: fm, iterations: it });
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(best)
}

/// Golden-section search for a minimum of a unimodal `f` on `[a, b]`.
///
/// Returns `(x_min, f(x_min))` once the bracket is narrower than `x_tol`.
pub fn golden_section_min(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, x_tol: f64) -> (f64, f64) {
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > x_tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        if (d - c).abs() <= f64::EPSILON * c.abs() {
            break;
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}
