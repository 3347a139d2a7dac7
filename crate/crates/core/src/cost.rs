//! Energetic cost `Sigma = int_0^1 ||H(s)|| ds`, its closed forms, and the
//! complexity sweeps over the search problem size.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::ce_gates::GateSpec;
use crate::dynamics::{default_steps, estimate_max_norm, propagate};
use crate::grover::{self, GroverProblem, ScheduleKind};
use crate::qcore::Hermitian;
use crate::quadrature::{integrate, QuadratureSpec};
use crate::regression::fit_loglog;
use crate::{Error, Result};

/// Operator norm used inside the cost integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormKind {
    /// `sqrt(Tr[A^dagger A])`.
    Frobenius,
    /// Largest singular value.
    Spectral,
}

/// How a cost was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostMethod {
    /// Adaptive Gauss-Legendre quadrature.
    Quadrature,
    /// Analytic expression.
    ClosedForm,
}

/// A cost value with its provenance.
#[derive(Debug, Clone)]
pub struct CostReport {
    /// The cost.
    pub sigma: f64,
    /// Norm used.
    pub norm_kind: NormKind,
    /// Quadrature or closed form.
    pub method: CostMethod,
    /// Integrand evaluations (zero for closed forms).
    pub samples: usize,
    /// Estimated absolute quadrature error.
    pub error_estimate: f64,
    /// `(s, ||H(s)||)` samples, sorted by `s`.
    pub integrand_trace: Vec<(f64, f64)>,
    /// Evolution time behind the counter-diabatic part, if any.
    pub tau: Option<f64>,
}

fn quadrature_report(
    integrand: impl FnMut(f64) -> Result<f64>,
    norm_kind: NormKind,
    spec: &QuadratureSpec,
    tau: Option<f64>,
) -> Result<CostReport> {
    let q = integrate(integrand, 0.0, 1.0, spec)?;
    Ok(CostReport {
        sigma: q.value,
        norm_kind,
        method: CostMethod::Quadrature,
        samples: q.evaluations,
        error_estimate: q.error_estimate,
        integrand_trace: q.trace,
        tau,
    })
}

/// `||A||` for the chosen norm.
pub fn operator_norm(a: &Hermitian, norm_kind: NormKind) -> Result<f64> {
    match norm_kind {
        NormKind::Frobenius => Ok(a.frobenius_norm()),
        NormKind::Spectral => a.spectral_norm(),
    }
}

/// Integrates `||H(s)||` over `s in [0, 1]` for an operator-valued path.
pub fn energetic_cost(
    mut h_of_s: impl FnMut(f64) -> Result<Hermitian>,
    norm_kind: NormKind,
    spec: &QuadratureSpec,
) -> Result<CostReport> {
    quadrature_report(|s| operator_norm(&h_of_s(s)?, norm_kind), norm_kind, spec, None)
}

/// Frobenius cost of the superadiabatic `n`-controlled gate in units of
/// `hbar omega`: `2^(n/2) * 2 sqrt(1 + theta0^2 / (4 (omega tau)^2))`.
pub fn cost_ce_closed_form(omega_tau: f64, theta0: f64, n: u32) -> f64 {
    let single = 2.0 * (1.0 + theta0 * theta0 / (4.0 * omega_tau * omega_tau)).sqrt();
    2f64.powf(n as f64 / 2.0) * single
}

/// Closed-form superadiabatic cost of a gate, in the units of `spec.omega`.
/// The spectral value is the Frobenius value divided by `sqrt(dim)`.
pub fn ce_closed_form_report(spec: &GateSpec, norm_kind: NormKind) -> CostReport {
    let frob = spec.omega * cost_ce_closed_form(spec.omega_tau(), spec.theta0, spec.n);
    let sigma = match norm_kind {
        NormKind::Frobenius => frob,
        NormKind::Spectral => frob / (spec.dim() as f64).sqrt(),
    };
    CostReport {
        sigma,
        norm_kind,
        method: CostMethod::ClosedForm,
        samples: 0,
        error_estimate: 0.0,
        integrand_trace: Vec::new(),
        tau: Some(spec.tau),
    }
}

/// One energy level of a model, with its velocity term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    /// Energy.
    pub energy: f64,
    /// `<d_s n|d_s n> - |<n|d_s n>|^2`, derivatives in `s`.
    pub mu: f64,
    /// Degeneracy.
    pub multiplicity: usize,
}

/// A model whose instantaneous spectrum and velocity terms are known in
/// closed form.
pub trait SpectralModel {
    /// Hilbert-space dimension.
    fn dimension(&self) -> usize;
    /// All levels at `s`; multiplicities sum to [`Self::dimension`].
    fn levels(&self, s: f64) -> Result<Vec<Level>>;
    /// `||H(s) + H_CD(s)||_2` with the counter-diabatic term scaled by `1/tau`.
    fn sa_spectral_norm(&self, s: f64, tau: f64) -> Result<f64>;
}

impl SpectralModel for GateSpec {
    fn dimension(&self) -> usize {
        self.dim()
    }

    fn levels(&self, _s: f64) -> Result<Vec<Level>> {
        let mu = crate::ce_gates::mu_closed_form(self);
        let half = 2 * self.controls();
        Ok(vec![
            Level { energy: -self.omega, mu, multiplicity: half },
            Level { energy: self.omega, mu, multiplicity: half },
        ])
    }

    fn sa_spectral_norm(&self, _s: f64, tau: f64) -> Result<f64> {
        let k = self.theta0 / (2.0 * tau);
        Ok(self.omega.hypot(k))
    }
}

impl SpectralModel for GroverProblem {
    fn dimension(&self) -> usize {
        self.n_items
    }

    fn levels(&self, s: f64) -> Result<Vec<Level>> {
        let sp = grover::spectrum_closed_form(self, s);
        let v = sp.velocity.ok_or(Error::UnsupportedSchedule)?;
        let mut out = vec![
            Level { energy: sp.e_minus, mu: v.mu_minus, multiplicity: 1 },
            Level { energy: sp.e_plus, mu: v.mu_plus, multiplicity: 1 },
        ];
        if self.n_items > 2 {
            out.push(Level { energy: sp.e_deg, mu: 0.0, multiplicity: self.n_items - 2 });
        }
        Ok(out)
    }

    /// The counter-diabatic term lives in the invariant 2x2 block, where it
    /// adds `alpha'/tau` in quadrature to the half-gap; the degenerate space
    /// is untouched.
    fn sa_spectral_norm(&self, s: f64, tau: f64) -> Result<f64> {
        let sp = grover::spectrum_closed_form(self, s);
        let v = sp.velocity.ok_or(Error::UnsupportedSchedule)?;
        let mean = 0.5 * (sp.e_plus + sp.e_minus);
        let half = (0.5 * (sp.e_plus - sp.e_minus)).hypot(v.d_alpha / tau);
        let mut best = (mean + half).abs().max((mean - half).abs());
        if self.n_items > 2 {
            best = best.max(sp.e_deg.abs());
        }
        Ok(best)
    }
}

/// Cost of `H + H_CD` from the spectrum. Frobenius uses
/// `sqrt(sum_m [E_m^2 + mu_m / tau^2])`; spectral uses
/// [`SpectralModel::sa_spectral_norm`]. `tau = inf` gives the adiabatic cost.
pub fn cost_superadiabatic_spectral<M: SpectralModel + ?Sized>(
    model: &M,
    tau: f64,
    norm_kind: NormKind,
    spec: &QuadratureSpec,
) -> Result<CostReport> {
    if !(tau > 0.0) {
        return Err(Error::InvalidParameter { name: "tau", reason: "must be positive" });
    }
    let inv_tau2 = 1.0 / (tau * tau);
    let integrand = |s: f64| -> Result<f64> {
        match norm_kind {
            NormKind::Frobenius => {
                let total: f64 = model
                    .levels(s)?
                    .iter()
                    .map(|l| l.multiplicity as f64 * (l.energy * l.energy + l.mu * inv_tau2))
                    .sum();
                Ok(total.sqrt())
            }
            NormKind::Spectral => model.sa_spectral_norm(s, tau),
        }
    };
    let tau_field = if tau.is_finite() { Some(tau) } else { None };
    quadrature_report(integrand, norm_kind, spec, tau_field)
}

/// Search variants compared in the complexity table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CostModel {
    /// Oracular, local-adiabatic schedule, no counter-diabatic term.
    LocalAdiabatic,
    /// Oracular, superenergetic schedule, no counter-diabatic term.
    Superenergetic,
    /// Non-oracular schedule, no counter-diabatic term.
    Nlno,
    /// Linear oracular schedule plus the counter-diabatic term.
    Superadiabatic,
}

impl CostModel {
    /// All four, in table order.
    pub const ALL: [CostModel; 4] =
        [CostModel::LocalAdiabatic, CostModel::Superenergetic, CostModel::Nlno, CostModel::Superadiabatic];

    /// Underlying schedule.
    pub fn schedule(&self) -> ScheduleKind {
        match self {
            CostModel::LocalAdiabatic => ScheduleKind::LocalAdiabatic,
            CostModel::Superenergetic => ScheduleKind::Superenergetic,
            CostModel::Nlno => ScheduleKind::Nlno,
            CostModel::Superadiabatic => ScheduleKind::Linear,
        }
    }

    /// Whether the counter-diabatic term is switched on.
    pub fn counter_diabatic(&self) -> bool {
        matches!(self, CostModel::Superadiabatic)
    }

    /// Search instance of size `n` (marked index 0) at total time `tau`.
    pub fn problem(&self, n: usize, tau: f64) -> Result<GroverProblem> {
        GroverProblem::new(n, 0, self.schedule(), tau)
    }

    /// Stable snake-case name.
    pub fn name(&self) -> &'static str {
        match self {
            CostModel::LocalAdiabatic => "local_adiabatic",
            CostModel::Superenergetic => "superenergetic",
            CostModel::Nlno => "nlno",
            CostModel::Superadiabatic => "superadiabatic",
        }
    }
}

/// Quadrature settings used for a search of size `n`.
pub fn sweep_quadrature(n: usize) -> QuadratureSpec {
    let spec = QuadratureSpec::default();
    if n > 256 {
        spec.with_min_panels(64)
    } else {
        spec
    }
}

/// Cost of one model at one size. `tau` matters only for the
/// superadiabatic model; the others are evaluated in the adiabatic limit.
pub fn sweep_cost(model: CostModel, norm_kind: NormKind, n: usize, tau: f64) -> Result<CostReport> {
    let cost_tau = if model.counter_diabatic() { tau } else { f64::INFINITY };
    let problem = model.problem(n, cost_tau)?;
    cost_superadiabatic_spectral(&problem, cost_tau, norm_kind, &sweep_quadrature(n))
}

/// Log-log fit of cost against problem size.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    /// Model swept.
    pub model: CostModel,
    /// Norm used.
    pub norm_kind: NormKind,
    /// Sizes, ascending.
    pub ns: Vec<usize>,
    /// Cost per size.
    pub sigmas: Vec<f64>,
    /// Number of leading (smallest) sizes excluded from the fit.
    pub dropped: usize,
    /// Complexity exponent.
    pub slope: f64,
    /// Intercept of `ln Sigma` against `ln N`.
    pub intercept: f64,
    /// Coefficient of determination.
    pub r2: f64,
}

/// Sizes excluded from the fit, smallest first.
pub const DROPPED_SIZES: usize = 2;

/// Fits precomputed costs; the two smallest sizes are dropped.
pub fn fit_scaling(model: CostModel, norm_kind: NormKind, ns: &[usize], sigmas: &[f64]) -> Result<ScalingFit> {
    if ns.len() != sigmas.len() {
        return Err(Error::DimensionMismatch { expected: ns.len(), found: sigmas.len() });
    }
    if ns.len() < DROPPED_SIZES + 2 {
        return Err(Error::InvalidParameter { name: "ns", reason: "need at least 4 sizes" });
    }
    if !ns.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidParameter { name: "ns", reason: "must be strictly increasing" });
    }
    if sigmas.iter().any(|s| !(*s > 0.0)) {
        return Err(Error::InvalidData("non-positive cost"));
    }
    let xs: Vec<f64> = ns[DROPPED_SIZES..].iter().map(|&n| n as f64).collect();
    let fit = fit_loglog(&xs, &sigmas[DROPPED_SIZES..])?;
    Ok(ScalingFit {
        model,
        norm_kind,
        ns: ns.to_vec(),
        sigmas: sigmas.to_vec(),
        dropped: DROPPED_SIZES,
        slope: fit.slope,
        intercept: fit.intercept,
        r2: fit.r2,
    })
}

/// Evaluates [`sweep_cost`] at every size and fits the exponent.
pub fn scaling_sweep(model: CostModel, norm_kind: NormKind, ns: &[usize], tau: f64) -> Result<ScalingFit> {
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    let sigmas =
        ns.iter().map(|&n| sweep_cost(model, norm_kind, n, tau).map(|r| r.sigma)).collect::<Result<Vec<_>>>()?;
    fit_scaling(model, norm_kind, &ns, &sigmas)
}

/// Largest size accepted by [`time_to_solution`].
pub const MAX_TTS_ITEMS: usize = 256;
/// First probe of the time search.
pub const TTS_START: f64 = 0.01;
/// Upper limit of the time search.
pub const TTS_CAP: f64 = 1e4;
/// Relative resolution of the time search.
pub const TTS_RESOLUTION: f64 = 0.05;

/// `|<m|psi(tau)>|^2` after evolving `|+>` under the model at total time
/// `tau`. Propagation runs in the invariant `{|m>, |phi>}` plane, which is
/// exact because `|+>` lies in it.
pub fn final_success_probability(model: CostModel, n: usize, tau: f64) -> Result<f64> {
    let problem = model.problem(n, tau)?;
    let path = grover::reduced_path(problem, model.counter_diabatic());
    let max_norm = estimate_max_norm(&path, 512)?;
    let steps = default_steps(tau, max_norm);
    let r = propagate(&path, &grover::reduced_initial_state(&problem), tau, steps)?;
    Ok(r.final_state.amplitudes()[0].norm_sqr())
}

/// Smallest time reaching the fidelity target.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeToSolution {
    /// Model.
    pub model: CostModel,
    /// List size.
    pub n: usize,
    /// Target success probability.
    pub target: f64,
    /// Smallest probed time meeting the target.
    pub tau_star: f64,
    /// Success probability at `tau_star`.
    pub fidelity: f64,
    /// Every `(tau, probability)` probe, in evaluation order.
    pub probes: Vec<(f64, f64)>,
}

/// Finds `tau*` by doubling from [`TTS_START`] until the target is met, then
/// geometric bisection to [`TTS_RESOLUTION`] relative width.
pub fn time_to_solution(model: CostModel, n: usize, target: f64) -> Result<TimeToSolution> {
    if n > MAX_TTS_ITEMS {
        return Err(Error::InvalidParameter { name: "n", reason: "at most 256 items" });
    }
    if !(target > 0.0 && target <= 1.0) {
        return Err(Error::InvalidParameter { name: "target", reason: "must lie in (0, 1]" });
    }
    let mut probes = Vec::new();
    let mut probe = |tau: f64| -> Result<f64> {
        let p = final_success_probability(model, n, tau)?;
        probes.push((tau, p));
        Ok(p)
    };
    let mut hi = TTS_START;
    let mut p_hi = probe(hi)?;
    let mut lo = 0.0;
    while p_hi < target {
        lo = hi;
        hi *= 2.0;
        if hi > TTS_CAP {
            return Err(Error::RangeExhausted { lo: TTS_START, hi: TTS_CAP });
        }
        p_hi = probe(hi)?;
    }
    if lo > 0.0 {
        while hi / lo > 1.0 + TTS_RESOLUTION {
            let mid = (lo * hi).sqrt();
            let p = probe(mid)?;
            if p >= target {
                hi = mid;
                p_hi = p;
            } else {
                lo = mid;
            }
        }
    }
    Ok(TimeToSolution { model, n, target, tau_star: hi, fidelity: p_hi, probes })
}
