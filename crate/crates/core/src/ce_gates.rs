//! Controlled-evolution (CE) gate model.
//!
//! A register of `n + 1` target qubits (the first `n` are controls, the last
//! one is rotated) is coupled to one ancilla. The ancilla follows
//! `H_xi(s) = -omega [sigma_z cos(theta0 s) + sin(theta0 s)(sigma_x cos xi + sigma_y sin xi)]`
//! with `xi = phi` inside the block selected by
//! `P = |N-1><N-1| (x) |n_-><n_-|` and `xi = 0` elsewhere. Measuring the ancilla
//! in `|1>` at `s = 1` heralds the controlled rotation.
//!
//! Basis ordering: `index = 2 * register_index + ancilla`, and inside the
//! register `register_index = 2 * control_index + target_bit`. The block
//! selected by `P` is therefore contiguous. The rotation axis enters only
//! through the `|n_+->` states of the last target qubit; controls use the
//! computational basis.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::cd::{counter_diabatic, CounterDiabatic, FramePoint};
use crate::qcore::{pauli, Hermitian, State, C64};
use crate::rng::SeededRng;
use crate::{Branch, Error, Result};

/// Parameters of an `n`-controlled rotation by `phi` about `axis`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateSpec {
    /// Number of control qubits.
    pub n: u32,
    /// Rotation angle in `[0, 2 pi)`.
    pub phi: f64,
    /// Unit rotation axis on the Bloch sphere.
    pub axis: [f64; 3],
    /// Sweep angle of the ancilla field, in `(0, pi]`.
    pub theta0: f64,
    /// Energy scale `omega > 0` (`hbar = 1`).
    pub omega: f64,
    /// Total evolution time `tau > 0`.
    pub tau: f64,
}

/// Largest supported control count.
pub const MAX_CONTROLS: u32 = 8;

impl GateSpec {
    /// Validated constructor.
    pub fn new(n: u32, phi: f64, axis: [f64; 3], theta0: f64, omega: f64, tau: f64) -> Result<Self> {
        let spec = GateSpec { n, phi, axis, theta0, omega, tau };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks every field against its domain.
    pub fn validate(&self) -> Result<()> {
        if self.n > MAX_CONTROLS {
            return Err(Error::InvalidParameter { name: "n", reason: "at most 8 control qubits" });
        }
        if !(self.phi.is_finite() && (0.0..2.0 * PI).contains(&self.phi)) {
            return Err(Error::InvalidParameter { name: "phi", reason: "must lie in [0, 2 pi)" });
        }
        let [x, y, z] = self.axis;
        if ((x * x + y * y + z * z).sqrt() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter { name: "axis", reason: "must be a unit vector" });
        }
        if !(self.theta0 > 0.0 && self.theta0 <= PI) {
            return Err(Error::InvalidParameter { name: "theta0", reason: "must lie in (0, pi]" });
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(Error::InvalidParameter { name: "omega", reason: "must be positive" });
        }
        if !(self.tau > 0.0) {
            return Err(Error::InvalidParameter { name: "tau", reason: "must be positive" });
        }
        Ok(())
    }

    /// `N = 2^n`, the number of control basis states.
    pub fn controls(&self) -> usize {
        1usize << self.n
    }

    /// Dimension of the target register, `2^(n+1)`.
    pub fn register_dim(&self) -> usize {
        2 * self.controls()
    }

    /// Dimension of register plus ancilla, `2^(n+2)`.
    pub fn dim(&self) -> usize {
        4 * self.controls()
    }

    /// Dimensionless product `omega * tau`.
    pub fn omega_tau(&self) -> f64 {
        self.omega * self.tau
    }
}

/// `|n_+>` and `|n_->`, the eigenstates of `n . sigma` with eigenvalues `+1`
/// and `-1`.
pub fn axis_states(axis: [f64; 3]) -> (State, State) {
    let [x, y, z] = axis;
    let polar = z.clamp(-1.0, 1.0).acos();
    let azimuth = if x == 0.0 && y == 0.0 { 0.0 } else { y.atan2(x) };
    let (c, s) = ((polar / 2.0).cos(), (polar / 2.0).sin());
    let e = C64::new(0.0, azimuth).exp();
    let plus = State::from_raw(vec![C64::new(c, 0.0), e * s]);
    let minus = State::from_raw(vec![-e.conj() * s, C64::new(c, 0.0)]);
    (plus, minus)
}

/// `|E^k_xi(s)>` of the ancilla Hamiltonian `H_xi(s)`: `Minus` has energy
/// `-omega`, `Plus` has `+omega`.
pub fn ancilla_eigenstate(xi: f64, s: f64, theta0: f64, level: Branch) -> State {
    let half = theta0 * s / 2.0;
    let e = C64::new(0.0, xi).exp();
    let amps = match level {
        Branch::Minus => vec![C64::new(half.cos(), 0.0), e * half.sin()],
        Branch::Plus => vec![C64::new(-half.sin(), 0.0), e * half.cos()],
    };
    State::from_raw(amps)
}

/// `d/ds |E^k_xi(s)>`.
pub fn ancilla_eigenstate_derivative(xi: f64, s: f64, theta0: f64, level: Branch) -> Vec<C64> {
    let k = theta0 / 2.0;
    let (other, sign) = match level {
        Branch::Minus => (Branch::Plus, 1.0),
        Branch::Plus => (Branch::Minus, -1.0),
    };
    ancilla_eigenstate(xi, s, theta0, other).into_amplitudes().into_iter().map(|a| a * (sign * k)).collect()
}

/// Single-ancilla adiabatic Hamiltonian `H_xi(s)`.
pub fn build_h_xi(xi: f64, s: f64, spec: &GateSpec) -> Hermitian {
    let theta = spec.theta0 * s;
    let sz = pauli::z().scaled(theta.cos());
    let sx = pauli::x().scaled(theta.sin() * xi.cos());
    let sy = pauli::y().scaled(theta.sin() * xi.sin());
    sz.plus(&sx).plus(&sy).scaled(-spec.omega)
}

/// Time-independent counter-diabatic term for `H_xi`:
/// `theta0 / (2 tau) (sigma_y cos xi - sigma_x sin xi)`.
pub fn build_cd_term(xi: f64, spec: &GateSpec) -> Hermitian {
    let k = spec.theta0 / (2.0 * spec.tau);
    pauli::y().scaled(xi.cos()).minus(&pauli::x().scaled(xi.sin())).scaled(k)
}

/// `P_{N-1, n_-}` on the target register.
pub fn rotation_projector(spec: &GateSpec) -> Hermitian {
    let n_ctrl = spec.controls();
    let (_, minus) = axis_states(spec.axis);
    let mut v = vec![C64::new(0.0, 0.0); spec.register_dim()];
    v[2 * (n_ctrl - 1)] = minus.amplitudes()[0];
    v[2 * (n_ctrl - 1) + 1] = minus.amplitudes()[1];
    Hermitian::projector(&v)
}

fn block_sum(spec: &GateSpec, outside: &Hermitian, inside: &Hermitian) -> Hermitian {
    let p = rotation_projector(spec);
    let rest = Hermitian::identity(spec.register_dim()).minus(&p);
    rest.tensor(outside).plus(&p.tensor(inside))
}

/// Full adiabatic Hamiltonian `[1 - P] (x) H_0(s) + P (x) H_phi(s)`.
pub fn build_ce_hamiltonian(s: f64, spec: &GateSpec) -> Hermitian {
    block_sum(spec, &build_h_xi(0.0, s, spec), &build_h_xi(spec.phi, s, spec))
}

/// Full counter-diabatic term, block-assembled from [`build_cd_term`].
pub fn build_ce_cd(spec: &GateSpec) -> Hermitian {
    block_sum(spec, &build_cd_term(0.0, spec), &build_cd_term(spec.phi, spec))
}

/// Superadiabatic Hamiltonian: each block carries `H_xi(s) + H_xi^CD`.
pub fn build_superadiabatic_ce(s: f64, spec: &GateSpec) -> Hermitian {
    let outside = build_h_xi(0.0, s, spec).plus(&build_cd_term(0.0, spec));
    let inside = build_h_xi(spec.phi, s, spec).plus(&build_cd_term(spec.phi, spec));
    block_sum(spec, &outside, &inside)
}

/// Label of a closed-form eigenstate `|m, n_eps> (x) |E^k_xi>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CeLabel {
    /// Control basis index `m`.
    pub control: usize,
    /// Axis eigenstate `eps` of the last target qubit.
    pub axis: Branch,
    /// Ancilla level `k`.
    pub level: Branch,
    /// Phase `xi` of the ancilla field in this block.
    pub xi: f64,
}

/// Closed-form eigenbasis of [`build_ce_hamiltonian`] at one `s`.
#[derive(Debug, Clone)]
pub struct CeEigensystem {
    /// One label per state.
    pub labels: Vec<CeLabel>,
    /// `+omega` or `-omega`.
    pub energies: Vec<f64>,
    /// Orthonormal eigenstates.
    pub states: Vec<State>,
    /// `d/ds` of each state.
    pub derivatives: Vec<Vec<C64>>,
}

/// Builds the `4N` closed-form eigenstates: `2N` at `-omega`, `2N` at `+omega`.
pub fn ce_eigensystem(s: f64, spec: &GateSpec) -> CeEigensystem {
    let n_ctrl = spec.controls();
    let (plus, minus) = axis_states(spec.axis);
    let mut out = CeEigensystem {
        labels: Vec::with_capacity(spec.dim()),
        energies: Vec::with_capacity(spec.dim()),
        states: Vec::with_capacity(spec.dim()),
        derivatives: Vec::with_capacity(spec.dim()),
    };
    for m in 0..n_ctrl {
        let control = State::basis(n_ctrl, m);
        for eps in [Branch::Plus, Branch::Minus] {
            let axis_state = if eps == Branch::Plus { &plus } else { &minus };
            let xi = if m == n_ctrl - 1 && eps == Branch::Minus { spec.phi } else { 0.0 };
            let register = control.tensor(axis_state);
            for level in [Branch::Minus, Branch::Plus] {
                let anc = ancilla_eigenstate(xi, s, spec.theta0, level);
                let d_anc = State::from_raw(ancilla_eigenstate_derivative(xi, s, spec.theta0, level));
                out.labels.push(CeLabel { control: m, axis: eps, level, xi });
                out.energies.push(match level {
                    Branch::Minus => -spec.omega,
                    Branch::Plus => spec.omega,
                });
                out.states.push(register.tensor(&anc));
                out.derivatives.push(register.tensor(&d_anc).into_amplitudes());
            }
        }
    }
    out
}

/// Orthonormal basis of the `2N`-fold degenerate `-omega` eigenspace at `s`.
pub fn ground_space(s: f64, spec: &GateSpec) -> Vec<State> {
    let sys = ce_eigensystem(s, spec);
    sys.labels.iter().zip(sys.states).filter(|(l, _)| l.level == Branch::Minus).map(|(_, st)| st).collect()
}

/// `mu = <d_s m|d_s m> - |<m|d_s m>|^2 = theta0^2 / 4` for every eigenstate,
/// with derivatives taken in `s`. Divide by `tau^2` for the time-rate form.
pub fn mu_closed_form(spec: &GateSpec) -> f64 {
    spec.theta0 * spec.theta0 / 4.0
}

/// Counter-diabatic term assembled from the closed-form eigenframe, with the
/// Berry-connection part subtracted. Its `connection` field is zero for this
/// model, and its operator matches [`build_ce_cd`].
pub fn ce_cd_from_frame(s: f64, spec: &GateSpec) -> Result<CounterDiabatic> {
    let sys = ce_eigensystem(s, spec);
    let frame: Vec<FramePoint> = sys
        .states
        .into_iter()
        .zip(sys.derivatives)
        .map(|(state, derivative)| FramePoint { state, derivative })
        .collect();
    counter_diabatic(&frame, spec.tau)
}

/// `gamma[m] = [<m, n_+|psi_n>, <m, n_-|psi_n>]`.
pub fn register_coefficients(psi_n: &State, spec: &GateSpec) -> Result<Vec<[C64; 2]>> {
    check_register(psi_n, spec)?;
    let (plus, minus) = axis_states(spec.axis);
    let a = psi_n.amplitudes();
    let proj = |v: &State, m: usize| v.amplitudes()[0].conj() * a[2 * m] + v.amplitudes()[1].conj() * a[2 * m + 1];
    Ok((0..spec.controls()).map(|m| [proj(&plus, m), proj(&minus, m)]).collect())
}

fn check_register(psi_n: &State, spec: &GateSpec) -> Result<()> {
    if psi_n.dim() != spec.register_dim() {
        return Err(Error::DimensionMismatch { expected: spec.register_dim(), found: psi_n.dim() });
    }
    Ok(())
}

/// `|psi_n^rot>`: the `gamma_{N-1,-}` component picks up `e^{i phi}`.
pub fn rotated_register(psi_n: &State, spec: &GateSpec) -> Result<State> {
    let gamma = register_coefficients(psi_n, spec)?;
    let g = gamma[spec.controls() - 1][1];
    let (_, minus) = axis_states(spec.axis);
    let shift = (C64::new(0.0, spec.phi).exp() - 1.0) * g;
    let mut amps = psi_n.amplitudes().to_vec();
    let base = 2 * (spec.controls() - 1);
    amps[base] += shift * minus.amplitudes()[0];
    amps[base + 1] += shift * minus.amplitudes()[1];
    State::normalized(amps)
}

/// `|psi_n> (x) |0>`.
pub fn initial_state(psi_n: &State) -> State {
    psi_n.tensor(&State::basis(2, 0))
}

/// Target of the adiabatic (or superadiabatic) sweep at `s = 1`:
/// `cos(theta0/2) |psi_n>|0> + sin(theta0/2) |psi_n^rot>|1>`.
pub fn expected_final_state(psi_n: &State, spec: &GateSpec) -> Result<State> {
    let rot = rotated_register(psi_n, spec)?;
    let (c, s) = ((spec.theta0 / 2.0).cos(), (spec.theta0 / 2.0).sin());
    let mut amps = Vec::with_capacity(spec.dim());
    for (a, b) in psi_n.amplitudes().iter().zip(rot.amplitudes()) {
        amps.push(a * c);
        amps.push(b * s);
    }
    State::normalized(amps)
}

/// Probability of finding the ancilla in `|1>`.
pub fn ancilla_one_probability(state: &State) -> f64 {
    state.amplitudes().iter().skip(1).step_by(2).map(|a| a.norm_sqr()).sum()
}

/// Projects the ancilla onto `|outcome>` and renormalizes.
pub fn project_ancilla(state: &State, outcome: u8) -> Result<State> {
    if !state.dim().is_multiple_of(2) {
        return Err(Error::InvalidParameter { name: "state", reason: "no ancilla qubit" });
    }
    let keep = usize::from(outcome == 1);
    let amps: Vec<C64> = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| if i % 2 == keep { *a } else { C64::new(0.0, 0.0) })
        .collect();
    State::normalized(amps).map_err(|_| Error::DegenerateInput("ancilla projection has zero norm"))
}

/// Result of one ancilla measurement.
#[derive(Debug, Clone)]
pub struct Measurement {
    /// `1` is success.
    pub outcome: u8,
    /// Post-measurement state.
    pub collapsed: State,
    /// Probability of outcome `1`.
    pub p_success: f64,
}

/// Measures the ancilla in the computational basis.
pub fn measure_ancilla(state: &State, rng: &mut SeededRng) -> Result<Measurement> {
    let p_success = ancilla_one_probability(state);
    let outcome = u8::from(rng.uniform() < p_success);
    let collapsed = project_ancilla(state, outcome)?;
    Ok(Measurement { outcome, collapsed, p_success })
}

/// Outcome of the restart-on-failure protocol.
#[derive(Debug, Clone)]
pub struct RepeatUntilSuccess {
    /// Sweeps performed, including the successful one.
    pub trials: usize,
    /// Heralded state, `None` if truncated.
    pub final_state: Option<State>,
    /// `max_trials` reached without success.
    pub truncated: bool,
    /// Seed of the random stream.
    pub seed: u64,
    /// Stream id within the seed.
    pub stream: u64,
}

/// Repeats sweep-and-measure until the ancilla reads `1`.
///
/// A failed trial collapses to `|psi_n>|0>`, so every retry starts from the
/// exact initial state.
pub fn run_repeat_until_success(
    spec: &GateSpec,
    psi_n: &State,
    max_trials: usize,
    seed: u64,
    stream: u64,
) -> Result<RepeatUntilSuccess> {
    if max_trials == 0 {
        return Err(Error::InvalidParameter { name: "max_trials", reason: "must be at least 1" });
    }
    let mut rng = SeededRng::with_stream(seed, stream);
    for trial in 1..=max_trials {
        let fin = expected_final_state(psi_n, spec)?;
        let m = measure_ancilla(&fin, &mut rng)?;
        if m.outcome == 1 {
            return Ok(RepeatUntilSuccess {
                trials: trial,
                final_state: Some(m.collapsed),
                truncated: false,
                seed,
                stream,
            });
        }
    }
    Ok(RepeatUntilSuccess { trials: max_trials, final_state: None, truncated: true, seed, stream })
}

/// Mean number of sweeps until success, `1 / sin^2(theta0 / 2)`.
pub fn mean_trials(theta0: f64) -> f64 {
    let s = (theta0 / 2.0).sin();
    1.0 / (s * s)
}

/// Closure over `s` giving the gate Hamiltonian, with or without the
/// counter-diabatic term.
pub fn hamiltonian_path(spec: GateSpec, counter_diabatic: bool) -> impl Fn(f64) -> Result<Hermitian> {
    move |s| Ok(if counter_diabatic { build_superadiabatic_ce(s, &spec) } else { build_ce_hamiltonian(s, &spec) })
}
