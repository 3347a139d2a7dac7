//! Adaptive composite Gauss-Legendre quadrature.
//!
//! Each panel is integrated with a 15-point rule on the whole panel and on
//! its two halves; the difference is the panel's error estimate. The panel
//! with the largest estimate is bisected until the summed estimate meets the
//! tolerance or the evaluation budget runs out.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Points per panel.
pub const PANEL_ORDER: usize = 15;

/// Nodes and weights of an `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the rule by Newton iteration on the Legendre polynomial.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            nodes.push(x);
            weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        GaussLegendre { nodes, weights }
    }

    /// Nodes on `[-1, 1]`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights summing to 2.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn panel(
        &self,
        f: &mut impl FnMut(f64) -> Result<f64>,
        a: f64,
        b: f64,
        trace: &mut Vec<(f64, f64)>,
    ) -> Result<f64> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let s = mid + half * x;
            let v = f(s)?;
            if !v.is_finite() {
                return Err(Error::NonFinite("quadrature integrand"));
            }
            trace.push((s, v));
            acc += w * v;
        }
        Ok(acc * half)
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Tolerances and budget for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Relative tolerance on the integral.
    pub rel_tol: f64,
    /// Absolute floor, used when the integral is near zero.
    pub abs_tol: f64,
    /// Maximum integrand evaluations.
    pub max_evals: usize,
    /// Uniform panels before any refinement.
    pub min_panels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { rel_tol: 1e-9, abs_tol: 1e-13, max_evals: 100_000, min_panels: 8 }
    }
}

impl QuadratureSpec {
    /// Same spec with a different panel floor.
    pub fn with_min_panels(self, min_panels: usize) -> Self {
        QuadratureSpec { min_panels, ..self }
    }
}

/// Integral with its error estimate and every sample taken.
#[derive(Debug, Clone)]
pub struct Integral {
    /// Value of the integral.
    pub value: f64,
    /// Estimated absolute error.
    pub error_estimate: f64,
    /// Integrand evaluations.
    pub evaluations: usize,
    /// `(s, f(s))` samples, sorted by `s`.
    pub trace: Vec<(f64, f64)>,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    halves: [f64; 2],
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrates `f` over `[a, b]`.
pub fn integrate(mut f: impl FnMut(f64) -> Result<f64>, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral> {
    if !(a.is_finite() && b.is_finite()) || b <= a {
        return Err(Error::InvalidParameter { name: "interval", reason: "need finite a < b" });
    }
    let rule = GaussLegendre::new(PANEL_ORDER);
    let mut trace = Vec::new();
    let mut heap = BinaryHeap::new();

    let make_panel = |f: &mut dyn FnMut(f64) -> Result<f64>,
                      lo: f64,
                      hi: f64,
                      coarse: Option<f64>,
                      trace: &mut Vec<(f64, f64)>|
     -> Result<Panel> {
        let mut g = |s: f64| f(s);
        let coarse = match coarse {
            Some(v) => v,
            None => rule.panel(&mut g, lo, hi, trace)?,
        };
        let mid = 0.5 * (lo + hi);
        let left = rule.panel(&mut g, lo, mid, trace)?;
        let right = rule.panel(&mut g, mid, hi, trace)?;
        let value = left + right;
        Ok(Panel { a: lo, b: hi, value, halves: [left, right], error: (value - coarse).abs() })
    };

    let panels = spec.min_panels.max(1);
    let width = (b - a) / panels as f64;
    for k in 0..panels {
        let lo = a + width * k as f64;
        let hi = if k + 1 == panels { b } else { lo + width };
        heap.push(make_panel(&mut f, lo, hi, None, &mut trace)?);
    }

    loop {
        let (value, error) = heap.iter().fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
        if error <= (spec.rel_tol * value.abs()).max(spec.abs_tol) {
            trace.sort_by(|x, y| x.0.total_cmp(&y.0));
            return Ok(Integral { value, error_estimate: error, evaluations: trace.len(), trace });
        }
        if trace.len() + 4 * PANEL_ORDER > spec.max_evals {
            return Err(Error::QuadratureTolerance { estimate: value, error_bound: error, evaluations: trace.len() });
        }
        let worst = heap.pop().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        heap.push(make_panel(&mut f, worst.a, mid, Some(worst.halves[0]), &mut trace)?);
        heap.push(make_panel(&mut f, mid, worst.b, Some(worst.halves[1]), &mut trace)?);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_weights_and_polynomial_exactness() {
        let rule = GaussLegendre::new(PANEL_ORDER);
        let wsum: f64 = rule.weights().iter().sum();
        assert!((wsum - 2.0).abs() < 1e-14);
        // Exact through degree 29.
        let q: f64 = rule.nodes().iter().zip(rule.weights()).map(|(x, w)| w * x.powi(28)).sum();
        assert!((q - 2.0 / 29.0).abs() < 1e-14);
    }

    #[test]
    fn constant_integrand() {
        let r = integrate(|_| Ok(2.0f64.sqrt()), 0.0, 1.0, &QuadratureSpec::default()).unwrap();
        assert!((r.value - 2.0f64.sqrt()).abs() < 1e-14);
        assert!(r.evaluations >= 9);
    }

    #[test]
    fn sharp_peak_is_refined() {
        // Lorentzian of width 1e-3 centred at 0.5: integral = 2 atan(500) / 1.
        let w = 1e-3;
        let exact = 2.0 * (0.5f64 / w).atan();
        let r = integrate(|s| Ok(w / ((s - 0.5) * (s - 0.5) + w * w)), 0.0, 1.0, &QuadratureSpec::default()).unwrap();
        assert!((r.value - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn kink_converges() {
        let r = integrate(|s| Ok((s - 0.3).abs()), 0.0, 1.0, &QuadratureSpec::default()).unwrap();
        assert!((r.value - (0.09 + 0.49) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn budget_exhaustion_reports_estimate() {
        let spec = QuadratureSpec { max_evals: 500, ..QuadratureSpec::default() };
        let err = integrate(|s| Ok(s.sqrt().recip().min(1e8)), 0.0, 1.0, &spec).unwrap_err();
        match err {
            Error::QuadratureTolerance { estimate, evaluations, .. } => {
                assert!(estimate > 1.5 && estimate < 2.5);
                assert!(evaluations <= 500);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn trace_is_sorted() {
        let r = integrate(|s| Ok(s * s), 0.0, 1.0, &QuadratureSpec::default()).unwrap();
        assert!(r.trace.windows(2).all(|w| w[0].0 <= w[1].0));
        assert_eq!(r.trace.len(), r.evaluations);
    }
}
