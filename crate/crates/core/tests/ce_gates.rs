use std::f64::consts::PI;

use sta_core::ce_gates::{self, GateSpec};
use sta_core::qcore::{eig_hermitian, pauli, State, C64};
use sta_core::rng::SeededRng;

fn spec(n: u32, phi: f64, theta0: f64, omega_tau: f64) -> GateSpec {
    GateSpec::new(n, phi, [0.6, 0.0, 0.8], theta0, 1.0, omega_tau).unwrap()
}

fn random_state(rng: &mut SeededRng, dim: usize) -> State {
    State::normalized((0..dim).map(|_| C64::new(rng.uniform() - 0.5, rng.uniform() - 0.5)).collect()).unwrap()
}

#[test]
fn ancilla_hamiltonian_endpoints() {
    let sp = spec(0, 1.0, PI, 1.0);
    for xi in [0.0, 0.4, 2.0] {
        let h0 = ce_gates::build_h_xi(xi, 0.0, &sp);
        assert!(h0.matrix().max_abs_diff(pauli::z().scaled(-1.0).matrix()) < 1e-15);
        let h1 = ce_gates::build_h_xi(xi, 1.0, &sp);
        assert!(h1.matrix().max_abs_diff(pauli::z().matrix()) < 1e-15);
    }
    let mid = ce_gates::build_h_xi(0.0, 0.5, &sp);
    assert!(mid.matrix().max_abs_diff(pauli::x().scaled(-1.0).matrix()) < 1e-15);
    let e = eig_hermitian(&mid).unwrap().values;
    assert!((e[0] + 1.0).abs() < 1e-15 && (e[1] - 1.0).abs() < 1e-15);
}

#[test]
fn full_hamiltonian_examples() {
    let single = spec(0, 2.0, 2.5, 0.3);
    assert_eq!(single.dim(), 4);
    for s in [0.0, 0.3, 1.0] {
        let f = ce_gates::build_ce_hamiltonian(s, &single).frobenius_norm();
        assert!((f - 2.0).abs() < 1e-14);
    }
    let one = spec(1, 2.0, 2.5, 0.3);
    for s in [0.0, 0.6] {
        let v = eig_hermitian(&ce_gates::build_ce_hamiltonian(s, &one)).unwrap().values;
        assert_eq!(v.iter().filter(|x| (**x + 1.0).abs() < 1e-12).count(), 4);
        assert_eq!(v.iter().filter(|x| (**x - 1.0).abs() < 1e-12).count(), 4);
    }
    let ground = ce_gates::ground_space(0.0, &one);
    assert_eq!(ground.len(), one.register_dim());
    for g in &ground {
        assert!(ce_gates::ancilla_one_probability(g) < 1e-30);
    }
}

#[test]
fn counter_diabatic_term_examples() {
    let sp = spec(0, 1.0, 2.0, 0.5);
    let k = sp.theta0 / (2.0 * sp.tau);
    let cd0 = ce_gates::build_cd_term(0.0, &sp);
    assert!(cd0.matrix().max_abs_diff(pauli::y().scaled(k).matrix()) < 1e-15);
    assert!((cd0.frobenius_norm() - 2f64.sqrt() * k).abs() < 1e-14);
    let cd1 = ce_gates::build_cd_term(PI / 2.0, &sp);
    assert!(cd1.matrix().max_abs_diff(pauli::x().scaled(-k).matrix()) < 1e-15);
}

#[test]
fn counter_diabatic_from_eigenframe_matches() {
    for n in 0..=2 {
        let sp = GateSpec::new(n, 1.9, [0.0, 0.6, -0.8], 2.2, 1.0, 0.7).unwrap();
        for s in [0.0, 0.35, 1.0] {
            let cd = ce_gates::ce_cd_from_frame(s, &sp).unwrap();
            assert!(cd.operator.matrix().max_abs_diff(ce_gates::build_ce_cd(&sp).matrix()) < 1e-12);
            assert!(cd.connection < 1e-12);
        }
    }
}

#[test]
fn superadiabatic_examples() {
    for n in 0..=2 {
        let sp = spec(n, 0.9, 2.7, 0.2);
        for s in [0.0, 0.5, 1.0] {
            let h = ce_gates::build_ce_hamiltonian(s, &sp);
            let cd = ce_gates::build_ce_cd(&sp);
            let sa = ce_gates::build_superadiabatic_ce(s, &sp);
            let lhs = sa.trace_product(&sa);
            assert!((lhs - h.trace_product(&h) - cd.trace_product(&cd)).abs() < 1e-10);
        }
    }
    let sp = spec(0, 0.9, 2.7, 0.2);
    let want = 2.0 * (1.0 + 2.7f64.powi(2) / (4.0 * 0.04)).sqrt();
    for s in [0.0, 0.5, 1.0] {
        assert!((ce_gates::build_superadiabatic_ce(s, &sp).frobenius_norm() - want).abs() < 1e-12);
    }
    let slow = spec(1, 0.9, 2.7, 1e9);
    let diff = ce_gates::build_superadiabatic_ce(0.4, &slow)
        .matrix()
        .max_abs_diff(ce_gates::build_ce_hamiltonian(0.4, &slow).matrix());
    assert!(diff < 1e-8);
}

#[test]
fn final_state_examples() {
    let mut rng = SeededRng::with_stream(7, 0);
    let sp = spec(1, 1.2, PI, 1.0);
    let psi = random_state(&mut rng, sp.register_dim());
    let fin = ce_gates::expected_final_state(&psi, &sp).unwrap();
    let rot = ce_gates::rotated_register(&psi, &sp).unwrap();
    assert!((fin.fidelity(&rot.tensor(&State::basis(2, 1))) - 1.0).abs() < 1e-14);

    // No weight on |N-1, n_->: the gate acts trivially.
    let (plus, _) = ce_gates::axis_states(sp.axis);
    let on_plus = State::basis(2, 1).tensor(&plus);
    let same = ce_gates::rotated_register(&on_plus, &sp).unwrap();
    assert!((same.fidelity(&on_plus) - 1.0).abs() < 1e-14);
    assert!((same.inner(&on_plus) - C64::new(1.0, 0.0)).norm() < 1e-14);
}

#[test]
fn controlled_z_action() {
    let sp = GateSpec::new(1, PI, [0.0, 0.0, 1.0], PI, 1.0, 1.0).unwrap();
    for (k, sign) in [(0usize, 1.0), (1, 1.0), (2, 1.0), (3, -1.0)] {
        let rot = ce_gates::rotated_register(&State::basis(4, k), &sp).unwrap();
        for (j, a) in rot.amplitudes().iter().enumerate() {
            let want = if j == k { C64::new(sign, 0.0) } else { C64::new(0.0, 0.0) };
            assert!((a - want).norm() < 1e-14, "basis {k}");
        }
    }
}

#[test]
fn measurement_examples() {
    let psi = State::basis(2, 1);
    let full = ce_gates::expected_final_state(&psi, &spec(0, 1.0, PI, 1.0)).unwrap();
    assert!((ce_gates::ancilla_one_probability(&full) - 1.0).abs() < 1e-15);
    let half = ce_gates::expected_final_state(&psi, &spec(0, 1.0, PI / 2.0, 1.0)).unwrap();
    assert!((ce_gates::ancilla_one_probability(&half) - 0.5).abs() < 1e-15);
    let restart = ce_gates::project_ancilla(&half, 0).unwrap();
    assert!((restart.fidelity(&ce_gates::initial_state(&psi)) - 1.0).abs() < 1e-14);
}

fn sample_mean(theta0: f64, seed: u64) -> (f64, f64) {
    let sp = spec(0, 1.0, theta0, 1.0);
    let psi = State::basis(2, 0);
    let runs = 10_000;
    let counts: Vec<f64> = (0..runs)
        .map(|k| ce_gates::run_repeat_until_success(&sp, &psi, 10_000, seed, k).unwrap().trials as f64)
        .collect();
    let mean = counts.iter().sum::<f64>() / runs as f64;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (runs as f64 - 1.0);
    (mean, (var / runs as f64).sqrt())
}

#[test]
fn repeat_until_success_statistics() {
    let sp = spec(0, 1.0, PI, 1.0);
    for k in 0..50 {
        let r = ce_gates::run_repeat_until_success(&sp, &State::basis(2, 0), 5, 3, k).unwrap();
        assert_eq!(r.trials, 1);
        assert!(!r.truncated);
    }
    for seed in [11, 12] {
        let (mean, se) = sample_mean(PI / 2.0, seed);
        assert!((mean - 2.0).abs() <= 3.0 * se, "seed {seed}: {mean} +- {se}");
    }
    // 1 / sin^2(2.3311 / 2), 40-digit evaluation.
    let expected = 1.184_033_408_974_462_8;
    assert!((ce_gates::mean_trials(2.3311) - expected).abs() < 1e-14);
    let (mean, se) = sample_mean(2.3311, 13);
    assert!((mean - expected).abs() <= 3.0 * se, "{mean} +- {se}");
}

#[test]
fn repeat_until_success_is_reproducible() {
    let sp = spec(0, 1.0, 0.8, 1.0);
    let psi = State::basis(2, 0);
    let a = ce_gates::run_repeat_until_success(&sp, &psi, 1000, 99, 4).unwrap();
    let b = ce_gates::run_repeat_until_success(&sp, &psi, 1000, 99, 4).unwrap();
    assert_eq!(a.trials, b.trials);
    let capped = ce_gates::run_repeat_until_success(&spec(0, 1.0, 1e-3, 1.0), &psi, 3, 99, 4).unwrap();
    assert!(capped.truncated && capped.final_state.is_none());
}
