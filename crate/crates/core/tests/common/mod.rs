//! Property checks shared by `properties.rs` (one `#[test]` each) and the
//! acceptance runner (which executes them all as one criterion).
#![allow(dead_code)]

use std::f64::consts::PI;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRng, TestRunner};

use sta_core::ce_gates::{self, GateSpec};
use sta_core::cost::{self, NormKind};
use sta_core::dynamics::{default_steps, estimate_max_norm, ground_fidelity_trace, propagate};
use sta_core::grover::{self, GroverProblem, ScheduleKind};
use sta_core::optimizer;
use sta_core::qcore::{eig_hermitian, Hermitian, Matrix, State, C64};
use sta_core::quadrature::QuadratureSpec;
use sta_core::Branch;

pub const CASES: u32 = 100;

pub type Check = fn(u32) -> Result<(), String>;

/// Every property, by name.
pub const ALL: &[(&str, Check)] = &[
    ("qcore_frobenius_matches_spectrum", qcore_frobenius_matches_spectrum),
    ("qcore_norm_sandwich", qcore_norm_sandwich),
    ("qcore_eigen_residual", qcore_eigen_residual),
    ("qcore_expm_preserves_norm", qcore_expm_preserves_norm),
    ("ce_hamiltonian_squares_to_identity", ce_hamiltonian_squares_to_identity),
    ("ce_eigensystem_matches_dense", ce_eigensystem_matches_dense),
    ("ce_mu_by_finite_differences", ce_mu_by_finite_differences),
    ("ce_cd_orthogonal_and_norm_scaling", ce_cd_orthogonal_and_norm_scaling),
    ("grover_spectrum_matches_dense", grover_spectrum_matches_dense),
    ("grover_frame_is_complete", grover_frame_is_complete),
    ("grover_marked_index_symmetry", grover_marked_index_symmetry),
    ("grover_cd_traceless_and_annihilates", grover_cd_traceless_and_annihilates),
    ("grover_superadiabatic_dynamics", grover_superadiabatic_dynamics),
    ("cost_monotone_in_tau", cost_monotone_in_tau),
    ("cost_norm_paths_agree", cost_norm_paths_agree),
    ("cost_ce_norm_ratio", cost_ce_norm_ratio),
    ("optimizer_theta_monotone_and_bounded", optimizer_theta_monotone_and_bounded),
    ("optimizer_stationary_minimum", optimizer_stationary_minimum),
    ("optimizer_eta_positive", optimizer_eta_positive),
    ("optimizer_sigma_rel_monotone", optimizer_sigma_rel_monotone),
    ("dynamics_unitarity", dynamics_unitarity),
    ("dynamics_ce_superadiabatic_target", dynamics_ce_superadiabatic_target),
    ("dynamics_adiabatic_trend", dynamics_adiabatic_trend),
];

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    let rng = TestRng::deterministic_rng(config.rng_algorithm);
    TestRunner::new_with_rng(config, rng)
}

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

fn tcf(e: sta_core::Error) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

// ---------- generators ----------

pub fn hermitian_from(dim: usize, raw: &[f64]) -> Hermitian {
    let mut k = 0;
    let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        entries[i * dim + i] = C64::new(raw[k], 0.0);
        k += 2;
        for j in (i + 1)..dim {
            let z = C64::new(raw[k], raw[k + 1]);
            k += 2;
            entries[i * dim + j] = z;
            entries[j * dim + i] = z.conj();
        }
    }
    Hermitian::new(Matrix::from_rows(dim, &entries)).expect("constructed Hermitian")
}

pub fn arb_hermitian(max_dim: usize) -> impl Strategy<Value = Hermitian> {
    (1..=max_dim)
        .prop_flat_map(|d| prop::collection::vec(-1.0f64..1.0, 2 * d * d).prop_map(move |raw| hermitian_from(d, &raw)))
}

pub fn state_from(raw: &[f64]) -> State {
    let amps: Vec<C64> = raw.chunks(2).map(|p| C64::new(p[0], p[1])).collect();
    let fallback = {
        let mut v = vec![C64::new(0.0, 0.0); amps.len()];
        v[0] = C64::new(1.0, 0.0);
        v
    };
    State::normalized(amps).unwrap_or_else(|_| State::new(fallback).unwrap())
}

pub fn arb_state(dim: usize) -> impl Strategy<Value = State> {
    prop::collection::vec(-1.0f64..1.0, 2 * dim).prop_map(|raw| state_from(&raw))
}

pub fn axis_from(polar: f64, azimuth: f64) -> [f64; 3] {
    let v = [polar.sin() * azimuth.cos(), polar.sin() * azimuth.sin(), polar.cos()];
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

/// `(n, phi, polar, azimuth, theta0, omega_tau)` with `n <= max_n`.
pub fn arb_gate(max_n: u32, theta_lo: f64, log_wt: (f64, f64)) -> impl Strategy<Value = GateSpec> {
    (0..=max_n, 0.0f64..(2.0 * PI), 0.0f64..PI, 0.0f64..(2.0 * PI), theta_lo..=PI, log_wt.0..=log_wt.1).prop_map(
        |(n, phi, pol, az, theta0, lw)| {
            GateSpec::new(n, phi, axis_from(pol, az), theta0, 1.0, 10f64.powf(lw)).expect("valid gate")
        },
    )
}

pub const KINDS: [ScheduleKind; 4] =
    [ScheduleKind::Linear, ScheduleKind::LocalAdiabatic, ScheduleKind::Superenergetic, ScheduleKind::Nlno];

pub fn arb_problem(max_log_n: u32) -> impl Strategy<Value = GroverProblem> {
    (1..=max_log_n, 0usize..4, any::<u64>(), -2.0f64..1.0).prop_map(|(ln, k, m, lt)| {
        let n = 1usize << ln;
        GroverProblem::new(n, (m % n as u64) as usize, KINDS[k], 10f64.powf(lt)).unwrap()
    })
}

fn max_abs(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

// ---------- qcore ----------

pub fn qcore_frobenius_matches_spectrum(cases: u32) -> Result<(), String> {
    run(cases, arb_hermitian(64), |h| {
        let e = eig_hermitian(&h).map_err(tcf)?;
        let sum: f64 = e.values.iter().map(|v| v * v).sum();
        let f2 = h.frobenius_norm().powi(2);
        prop_assert!((sum - f2).abs() <= 1e-9 * f2.max(1e-300), "{sum} vs {f2}");
        Ok(())
    })
}

pub fn qcore_norm_sandwich(cases: u32) -> Result<(), String> {
    run(cases, arb_hermitian(32), |h| {
        let s = h.spectral_norm().map_err(tcf)?;
        let f = h.frobenius_norm();
        let d = (h.dim() as f64).sqrt();
        prop_assert!(s <= f * (1.0 + 1e-12));
        prop_assert!(f <= d * s * (1.0 + 1e-12));
        Ok(())
    })
}

pub fn qcore_eigen_residual(cases: u32) -> Result<(), String> {
    run(cases, arb_hermitian(24), |h| {
        let e = eig_hermitian(&h).map_err(tcf)?;
        let scale = h.spectral_norm().map_err(tcf)?.max(1e-300);
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        for (i, (lam, v)) in e.values.iter().zip(&e.vectors).enumerate() {
            let hv = h.apply(v.amplitudes());
            let res: Vec<C64> = hv.iter().zip(v.amplitudes()).map(|(a, b)| a - b * lam).collect();
            prop_assert!(max_abs(&res) <= 1e-10 * scale);
            for w in &e.vectors[..i] {
                prop_assert!(v.inner(w).norm() <= 1e-10);
            }
        }
        Ok(())
    })
}

pub fn qcore_expm_preserves_norm(cases: u32) -> Result<(), String> {
    let strat = (1usize..=16).prop_flat_map(|d| {
        (
            prop::collection::vec(-1.0f64..1.0, 2 * d * d).prop_map(move |r| hermitian_from(d, &r)),
            arb_state(d),
            -10.0f64..10.0,
        )
    });
    run(cases, strat, |(h, psi, dt)| {
        let u = h.expm_step(dt).map_err(tcf)?;
        prop_assert!(u.unitarity_deviation() < 1e-10);
        let out = u.apply(&psi).map_err(tcf)?;
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
        Ok(())
    })
}

// ---------- ce_gates ----------

pub fn ce_hamiltonian_squares_to_identity(cases: u32) -> Result<(), String> {
    run(cases, (arb_gate(3, 0.05, (-2.0, 2.0)), 0.0f64..=1.0), |(spec, s)| {
        let h = ce_gates::build_ce_hamiltonian(s, &spec);
        let sq = h.matrix().matmul(h.matrix());
        let id = Matrix::identity(spec.dim()).scale(C64::new(spec.omega * spec.omega, 0.0));
        prop_assert!(sq.max_abs_diff(&id) < 1e-10);
        Ok(())
    })
}

pub fn ce_eigensystem_matches_dense(cases: u32) -> Result<(), String> {
    run(cases, (arb_gate(2, 0.05, (-2.0, 2.0)), 0.0f64..=1.0), |(spec, s)| {
        let h = ce_gates::build_ce_hamiltonian(s, &spec);
        let dense = eig_hermitian(&h).map_err(tcf)?;
        let sys = ce_gates::ce_eigensystem(s, &spec);
        let half = 2 * spec.controls();
        prop_assert_eq!(sys.energies.iter().filter(|e| **e < 0.0).count(), half);
        prop_assert_eq!(sys.energies.len(), 2 * half);
        for (i, (e, st)) in sys.energies.iter().zip(&sys.states).enumerate() {
            let weight: f64 = dense
                .values
                .iter()
                .zip(&dense.vectors)
                .filter(|(v, _)| (**v - e).abs() < 1e-8)
                .map(|(_, d)| d.fidelity(st))
                .sum();
            prop_assert!(weight >= 1.0 - 1e-10, "state {i}: weight {weight}");
            for other in &sys.states[..i] {
                prop_assert!(st.inner(other).norm() < 1e-10);
            }
        }
        Ok(())
    })
}

/// `mu` in the time variable `t = s tau`, from central differences of the
/// closed-form eigenstates.
pub fn ce_mu_by_finite_differences(cases: u32) -> Result<(), String> {
    run(cases, (arb_gate(1, 0.1, (-2.0, 2.0)), 0.05f64..0.95), |(spec, s)| {
        let h = 1e-6;
        let lo = ce_gates::ce_eigensystem(s - h, &spec);
        let hi = ce_gates::ce_eigensystem(s + h, &spec);
        let mid = ce_gates::ce_eigensystem(s, &spec);
        let want = spec.theta0 * spec.theta0 / (4.0 * spec.tau * spec.tau);
        for k in 0..mid.states.len() {
            let d: Vec<C64> = hi.states[k]
                .amplitudes()
                .iter()
                .zip(lo.states[k].amplitudes())
                .map(|(a, b)| (a - b) / (2.0 * h * spec.tau))
                .collect();
            let n = mid.states[k].amplitudes();
            let mu = inner(&d, &d).re - inner(n, &d).norm_sqr();
            prop_assert!((mu - want).abs() <= 1e-6 * want, "mu {mu} want {want}");
        }
        Ok(())
    })
}

pub fn ce_cd_orthogonal_and_norm_scaling(cases: u32) -> Result<(), String> {
    run(cases, (arb_gate(3, 0.05, (-2.0, 2.0)), 0.0f64..=1.0), |(spec, s)| {
        let h = ce_gates::build_ce_hamiltonian(s, &spec);
        let cd = ce_gates::build_ce_cd(&spec);
        let sa = ce_gates::build_superadiabatic_ce(s, &spec);
        prop_assert!(h.trace_anticommutator(&cd).abs() < 1e-10);
        let lhs = sa.trace_product(&sa);
        let rhs = h.trace_product(&h) + cd.trace_product(&cd);
        prop_assert!((lhs - rhs).abs() < 1e-10 * lhs);
        let single = GateSpec { n: 0, ..spec };
        let base = ce_gates::build_superadiabatic_ce(s, &single).frobenius_norm();
        let want = 2f64.powf(spec.n as f64 / 2.0) * base;
        prop_assert!((sa.frobenius_norm() - want).abs() < 1e-10 * want);
        Ok(())
    })
}

// ---------- grover ----------

pub fn grover_spectrum_matches_dense(cases: u32) -> Result<(), String> {
    run(cases, (arb_problem(6), 0usize..=20), |(p, k)| {
        let s = k as f64 / 20.0;
        let sp = grover::spectrum_closed_form(&p, s);
        let h = grover::build_grover_h(&p, s);
        let mut want = vec![sp.e_minus, sp.e_plus];
        want.extend(std::iter::repeat_n(sp.e_deg, p.n_items - 2));
        want.sort_by(f64::total_cmp);
        let got = eig_hermitian(&h).map_err(tcf)?.values;
        for (a, b) in got.iter().zip(&want) {
            prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
        let sum = sp.e_minus + sp.e_plus + (p.n_items - 2) as f64 * sp.e_deg;
        prop_assert!((sum - h.trace()).abs() < 1e-9);
        let v = sp.velocity.expect("analytic schedule");
        prop_assert!(v.mu_minus >= 0.0 && v.mu_plus >= 0.0);
        Ok(())
    })
}

pub fn grover_frame_is_complete(cases: u32) -> Result<(), String> {
    run(cases, (arb_problem(6), 0.0f64..=1.0), |(p, s)| {
        let mut frame = grover::degenerate_basis(&p);
        match (grover::eigvec_closed_form(&p, s, Branch::Minus), grover::eigvec_closed_form(&p, s, Branch::Plus)) {
            (Ok(a), Ok(b)) => {
                frame.push(a);
                frame.push(b);
            }
            _ => return Ok(()),
        }
        prop_assert_eq!(frame.len(), p.n_items);
        for i in 0..frame.len() {
            for j in 0..=i {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((frame[i].inner(&frame[j]).norm() - want).abs() < 1e-9);
            }
        }
        Ok(())
    })
}

pub fn grover_marked_index_symmetry(cases: u32) -> Result<(), String> {
    run(cases, (arb_problem(5), any::<u64>(), 0.0f64..=1.0), |(p, other, s)| {
        let q = GroverProblem { marked: (other % p.n_items as u64) as usize, ..p };
        let a = eig_hermitian(&grover::build_grover_h(&p, s)).map_err(tcf)?.values;
        let b = eig_hermitian(&grover::build_grover_h(&q, s)).map_err(tcf)?.values;
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
        if let (Ok(u), Ok(v)) =
            (grover::eigvec_closed_form(&p, s, Branch::Minus), grover::eigvec_closed_form(&q, s, Branch::Minus))
        {
            let du = u.amplitudes()[p.marked] - v.amplitudes()[q.marked];
            prop_assert!(du.norm() < 1e-12);
        }
        Ok(())
    })
}

pub fn grover_cd_traceless_and_annihilates(cases: u32) -> Result<(), String> {
    run(cases, (arb_problem(6), 0.0f64..=1.0), |(p, s)| {
        let cd = grover::build_grover_cd(&p, s).map_err(tcf)?;
        prop_assert!(cd.matrix().hermitian_deviation() < 1e-10);
        prop_assert!(cd.trace().abs() < 1e-10);
        let h0 = grover::build_grover_h(&p, s);
        prop_assert!(h0.trace_anticommutator(&cd).abs() < 1e-9);
        for v in grover::degenerate_basis(&p) {
            prop_assert!(max_abs(&cd.apply(v.amplitudes())) < 1e-10);
        }
        Ok(())
    })
}

pub fn grover_superadiabatic_dynamics(cases: u32) -> Result<(), String> {
    run(cases, (1u32..=5, any::<u64>(), 0usize..3), |(ln, m, ti)| {
        let n = 1usize << ln;
        let tau = [0.01, 0.1, 1.0][ti];
        let p = GroverProblem::new(n, (m % n as u64) as usize, ScheduleKind::Linear, tau).unwrap();
        let path = grover::hamiltonian_path(p, true);
        let steps = default_steps(tau, estimate_max_norm(&path, 64).map_err(tcf)?);
        let r = propagate(&path, &grover::plus_state(n), tau, steps).map_err(tcf)?;
        let f = r.final_state.amplitudes()[p.marked].norm_sqr();
        prop_assert!(f >= 1.0 - 1e-3, "n={n} tau={tau}: {f}");
        Ok(())
    })
}

// ---------- cost ----------

fn spectral_cost(p: &GroverProblem, tau: f64, norm: NormKind) -> f64 {
    cost::cost_superadiabatic_spectral(p, tau, norm, &QuadratureSpec::default()).unwrap().sigma
}

pub fn cost_monotone_in_tau(cases: u32) -> Result<(), String> {
    run(cases, (arb_problem(8), -2.0f64..2.0, 0.0f64..2.0, any::<bool>()), |(p, lt, dl, frob)| {
        let norm = if frob { NormKind::Frobenius } else { NormKind::Spectral };
        let t1 = 10f64.powf(lt);
        let t2 = t1 * 10f64.powf(dl);
        let a = spectral_cost(&p, t1, norm);
        let b = spectral_cost(&p, t2, norm);
        let ad = spectral_cost(&p, f64::INFINITY, norm);
        prop_assert!(a >= b * (1.0 - 1e-9), "{a} < {b}");
        prop_assert!(b >= ad * (1.0 - 1e-9), "{b} < {ad}");
        Ok(())
    })
}

pub fn cost_norm_paths_agree(cases: u32) -> Result<(), String> {
    run(cases, (arb_problem(4), any::<bool>()), |(p, frob)| {
        let norm = if frob { NormKind::Frobenius } else { NormKind::Spectral };
        let qs = QuadratureSpec::default();
        let dense = cost::energetic_cost(grover::hamiltonian_path(p, true), norm, &qs).map_err(tcf)?;
        let spec = cost::cost_superadiabatic_spectral(&p, p.tau, norm, &qs).map_err(tcf)?;
        prop_assert!(
            (dense.sigma - spec.sigma).abs() < 1e-7 * spec.sigma.max(1.0),
            "{} vs {}",
            dense.sigma,
            spec.sigma
        );
        Ok(())
    })
}

pub fn cost_ce_norm_ratio(cases: u32) -> Result<(), String> {
    run(cases, arb_gate(3, 0.05, (-2.0, 2.0)), |spec| {
        let qs = QuadratureSpec::default();
        let f = cost::energetic_cost(ce_gates::hamiltonian_path(spec, true), NormKind::Frobenius, &qs).map_err(tcf)?;
        let s = cost::energetic_cost(ce_gates::hamiltonian_path(spec, true), NormKind::Spectral, &qs).map_err(tcf)?;
        let d = (spec.dim() as f64).sqrt();
        prop_assert!((f.sigma / s.sigma - d).abs() < 1e-10 * d);
        let closed = cost::ce_closed_form_report(&spec, NormKind::Frobenius).sigma;
        prop_assert!((f.sigma - closed).abs() < 1e-9 * closed);
        Ok(())
    })
}

// ---------- optimizer ----------

fn sorted_grid() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-4.0f64..3.0, 2..12).prop_map(|mut v| {
        v.sort_by(f64::total_cmp);
        v.dedup();
        v.into_iter().map(|x| 10f64.powf(x)).collect()
    })
}

pub fn optimizer_theta_monotone_and_bounded(cases: u32) -> Result<(), String> {
    run(cases, sorted_grid(), |grid| {
        let thetas: Vec<f64> = grid
            .iter()
            .map(|&w| optimizer::theta_min(w).map(|r| r.theta_min))
            .collect::<Result<_, _>>()
            .map_err(tcf)?;
        prop_assert!(thetas.windows(2).all(|t| t[0] <= t[1]), "{thetas:?}");
        prop_assert!(thetas.iter().all(|&t| t > optimizer::THETA_CRITICAL && t <= PI));
        Ok(())
    })
}

pub fn optimizer_stationary_minimum(cases: u32) -> Result<(), String> {
    run(cases, -4.0f64..3.0, |lw| {
        let w = 10f64.powf(lw);
        let r = optimizer::theta_min(w).map_err(tcf)?;
        let t = r.theta_min;
        let h = 1e-5_f64.min((PI - t) / 2.0).min((t - optimizer::THETA_CRITICAL) / 2.0).max(1e-9);
        let fd = (optimizer::avg_cost(w, t + h) - optimizer::avg_cost(w, t - h)) / (2.0 * h);
        prop_assert!(fd.abs() < 1e-6 * r.avg_cost_at_min, "w={w}: derivative {fd}");
        prop_assert!(optimizer::avg_cost(w, t - 0.01) > r.avg_cost_at_min);
        prop_assert!(optimizer::avg_cost(w, (t + 0.01).min(PI)) >= r.avg_cost_at_min);
        // tan(t/2) - t is about 4 w^2 / t near theta_c, so its rounding error
        // bounds how well the residual can be resolved.
        let resolvable = 1e-9_f64.max(2.0 * f64::EPSILON * t * t / (w * w));
        prop_assert!(r.relative_residual < resolvable || t == PI, "residual {}", r.relative_residual);
        prop_assert!(r.golden_check < 1e-6, "golden {}", r.golden_check);
        Ok(())
    })
}

pub fn optimizer_eta_positive(cases: u32) -> Result<(), String> {
    run(cases, -4.0f64..3.0, |lw| {
        let w = 10f64.powf(lw);
        for k in 1..1000 {
            let t = PI * k as f64 / 1000.0;
            let e = optimizer::eta(t, w);
            prop_assert!(e > 0.0 && e.is_finite());
        }
        Ok(())
    })
}

pub fn optimizer_sigma_rel_monotone(cases: u32) -> Result<(), String> {
    run(cases, sorted_grid(), |grid| {
        let rel: Vec<f64> = grid.iter().map(|&w| optimizer::sigma_rel(w)).collect::<Result<_, _>>().map_err(tcf)?;
        prop_assert!(rel.windows(2).all(|r| r[0] <= r[1] * (1.0 + 1e-12)), "{rel:?}");
        prop_assert!(rel.iter().all(|&r| r > 0.0 && r <= 1.0 + 1e-15));
        Ok(())
    })
}

// ---------- dynamics ----------

pub fn dynamics_unitarity(cases: u32) -> Result<(), String> {
    let strat = (1usize..=4).prop_flat_map(|d| {
        (
            prop::collection::vec(-1.0f64..1.0, 2 * d * d),
            prop::collection::vec(-1.0f64..1.0, 2 * d * d),
            arb_state(d),
            0.1f64..20.0,
        )
            .prop_map(move |(a, b, psi, tau)| (hermitian_from(d, &a), hermitian_from(d, &b), psi, tau))
    });
    run(cases.min(100), strat, |(a, b, psi, tau)| {
        let r = propagate(|s| Ok(a.scaled(1.0 - s).plus(&b.scaled(s))), &psi, tau, 10_000).map_err(tcf)?;
        prop_assert!(r.norm_drift < 1e-9, "drift {}", r.norm_drift);
        prop_assert!(r.fidelity_trace.iter().all(|p| p.1 <= 1.0 + 1e-12 && p.1 >= 0.0));
        Ok(())
    })
}

pub fn dynamics_ce_superadiabatic_target(cases: u32) -> Result<(), String> {
    let strat = (arb_gate(2, 0.05, (-3.0, 2.0)), any::<bool>()).prop_flat_map(|(spec, half)| {
        let spec = GateSpec { phi: if half { PI / 2.0 } else { PI }, ..spec };
        (Just(spec), arb_state(spec.register_dim()))
    });
    run(cases, strat, |(spec, psi_n)| {
        let path = ce_gates::hamiltonian_path(spec, true);
        let steps = default_steps(spec.tau, estimate_max_norm(&path, 8).map_err(tcf)?);
        let r = ground_fidelity_trace(&path, &ce_gates::initial_state(&psi_n), spec.tau, steps, |s| {
            Ok(ce_gates::ground_space(s, &spec))
        })
        .map_err(tcf)?;
        let target = ce_gates::expected_final_state(&psi_n, &spec).map_err(tcf)?;
        let f = r.final_state.fidelity(&target);
        prop_assert!(f >= 1.0 - 1e-5, "fidelity {f}");
        prop_assert!(r.min_fidelity() >= 1.0 - 1e-5);
        let p1 = ce_gates::ancilla_one_probability(&r.final_state);
        let want = (spec.theta0 / 2.0).sin().powi(2);
        prop_assert!((p1 - want).abs() < 1e-6, "p1 {p1} want {want}");
        Ok(())
    })
}

pub fn dynamics_adiabatic_trend(cases: u32) -> Result<(), String> {
    let strat = arb_gate(1, 0.05, (0.0, 0.0)).prop_flat_map(|spec| (Just(spec), arb_state(spec.register_dim())));
    run(cases, strat, |(spec, psi_n)| {
        let mut prev = -1.0;
        for wt in [0.01, 0.1, 1.0, 10.0, 100.0] {
            let sp = GateSpec { tau: wt / spec.omega, ..spec };
            let path = ce_gates::hamiltonian_path(sp, false);
            let steps = default_steps(sp.tau, spec.omega);
            let r = propagate(&path, &ce_gates::initial_state(&psi_n), sp.tau, steps).map_err(tcf)?;
            let f = r.final_state.fidelity(&ce_gates::expected_final_state(&psi_n, &sp).map_err(tcf)?);
            prop_assert!(f >= prev - 1e-9, "wt={wt}: {f} < {prev}");
            prev = f;
        }
        Ok(())
    })
}
