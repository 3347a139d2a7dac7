//! Analog Grover search: oracular schedules (linear, local-adiabatic,
//! superenergetic), the non-linear non-oracular (NLNO) Hamiltonian, and the
//! counter-diabatic completion.
//!
//! `H_0(s) = f(1 - |+><+|) + g(1 - |m><m|) + h(|+><m| + |m><+|)`.
//!
//! The dynamics never leaves the span of `|m>` and
//! `|phi> = sum_{i != m} |i> / sqrt(N-1)`; every other direction is an
//! `s`-independent eigenvector with energy `f + g`. Closed forms are taken
//! from the 2x2 block
//!
//! ```text
//! [ p  q ]    p = f Nbar + 2h/sqrt(N)
//! [ q  r ]    r = f/N + g,   q = sqrt(Nbar) (h - f/sqrt(N)),   Nbar = 1 - 1/N
//! ```
//!
//! with a mixing angle `alpha`: `|E+> = cos(alpha)|m> + sin(alpha)|phi>`,
//! `|E-> = -sin(alpha)|m> + cos(alpha)|phi>`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::cd::{counter_diabatic, FramePoint};
use crate::qcore::{c, pauli, Hermitian, Matrix, State, C64};
use crate::{Branch, Error, Result};

/// Gap below which a closed-form eigenvector is reported as ambiguous.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Below this `|f - h sqrt(N)|` the ratio form of `b` is replaced by the
/// mixing-angle form.
const B_DENOMINATOR_TOL: f64 = 1e-8;

/// Real functions of `s` for `(f, g, h)`, in that order.
pub type ScheduleFns = [fn(f64) -> f64; 3];

/// User-supplied interpolation. Derivatives are optional; without them the
/// spectrum has no velocity data and counter-diabatic constructions fail.
#[derive(Debug, Clone, Copy)]
pub struct CustomSchedule {
    /// `f(s)`.
    pub f: fn(f64) -> f64,
    /// `g(s)`.
    pub g: fn(f64) -> f64,
    /// `h(s)`.
    pub h: fn(f64) -> f64,
    /// `(f', g', h')`.
    pub derivatives: Option<ScheduleFns>,
    /// `(f'', g'', h'')`, used only at exact level crossings.
    pub second_derivatives: Option<ScheduleFns>,
}

impl PartialEq for CustomSchedule {
    fn eq(&self, other: &Self) -> bool {
        let s = [0.0, 0.25, 0.5, 0.75, 1.0];
        s.iter().all(|&x| (self.f)(x) == (other.f)(x) && (self.g)(x) == (other.g)(x) && (self.h)(x) == (other.h)(x))
    }
}

/// Interpolation family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScheduleKind {
    /// `f = 1 - s`, `g = s`.
    Linear,
    /// Local-adiabatic path with `O(sqrt N)` runtime.
    LocalAdiabatic,
    /// `f = 1 - s + sqrt(N) s (1-s)`, `g = s + sqrt(N) s (1-s)`.
    Superenergetic,
    /// `f = 1 - s`, `g = s`, `h = s (1-s)` on the NLNO Hamiltonian.
    Nlno,
    /// Arbitrary interpolation.
    Custom(CustomSchedule),
}

impl ScheduleKind {
    /// Whether `(f', g', h')` are available in closed form.
    pub fn has_derivatives(&self) -> bool {
        match self {
            ScheduleKind::Custom(c) => c.derivatives.is_some(),
            _ => true,
        }
    }

    /// Whether the Hamiltonian contains the non-oracular coupling.
    pub fn is_non_oracular(&self) -> bool {
        matches!(self, ScheduleKind::Nlno)
    }
}

/// `f, g, h` and their derivatives at one `s`. Derivatives are `NaN` for a
/// custom schedule that does not provide them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleValues {
    /// Coefficient of `1 - |+><+|`.
    pub f: f64,
    /// Coefficient of `1 - |m><m|`.
    pub g: f64,
    /// Coefficient of `|+><m| + |m><+|`.
    pub h: f64,
    /// `f'(s)`.
    pub df: f64,
    /// `g'(s)`.
    pub dg: f64,
    /// `h'(s)`.
    pub dh: f64,
    /// `f''(s)`.
    pub d2f: f64,
    /// `g''(s)`.
    pub d2g: f64,
    /// `h''(s)`.
    pub d2h: f64,
}

/// Evaluates a schedule at `s` for list size `n_items`.
pub fn schedule_at(kind: &ScheduleKind, s: f64, n_items: usize) -> ScheduleValues {
    let n = n_items as f64;
    let zero = ScheduleValues { f: 0.0, g: 0.0, h: 0.0, df: 0.0, dg: 0.0, dh: 0.0, d2f: 0.0, d2g: 0.0, d2h: 0.0 };
    match kind {
        ScheduleKind::Linear => ScheduleValues { f: 1.0 - s, g: s, df: -1.0, dg: 1.0, ..zero },
        ScheduleKind::LocalAdiabatic => {
            let root = (n - 1.0).sqrt();
            let a = root.atan();
            let u = a * (1.0 - 2.0 * s);
            let (t, sec2) = (u.tan(), 1.0 / (u.cos() * u.cos()));
            let g = (root - t) / (2.0 * root);
            let dg = a * sec2 / root;
            let d2g = -4.0 * a * a * sec2 * t / root;
            ScheduleValues { f: 1.0 - g, g, df: -dg, dg, d2f: -d2g, d2g, ..zero }
        }
        ScheduleKind::Superenergetic => {
            let rn = n.sqrt();
            let bump = rn * s * (1.0 - s);
            let dbump = rn * (1.0 - 2.0 * s);
            ScheduleValues {
                f: 1.0 - s + bump,
                g: s + bump,
                df: -1.0 + dbump,
                dg: 1.0 + dbump,
                d2f: -2.0 * rn,
                d2g: -2.0 * rn,
                ..zero
            }
        }
        ScheduleKind::Nlno => ScheduleValues {
            f: 1.0 - s,
            g: s,
            h: s * (1.0 - s),
            df: -1.0,
            dg: 1.0,
            dh: 1.0 - 2.0 * s,
            d2h: -2.0,
            ..zero
        },
        ScheduleKind::Custom(cs) => {
            let [df, dg, dh] = cs.derivatives.map_or([f64::NAN; 3], |d| d.map(|fun| fun(s)));
            let [d2f, d2g, d2h] = cs.second_derivatives.map_or([f64::NAN; 3], |d| d.map(|fun| fun(s)));
            ScheduleValues { f: (cs.f)(s), g: (cs.g)(s), h: (cs.h)(s), df, dg, dh, d2f, d2g, d2h }
        }
    }
}

/// A search instance: `N` items, marked index `m`, schedule and total time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroverProblem {
    /// List size `N >= 2`.
    pub n_items: usize,
    /// Marked index `m < N`.
    pub marked: usize,
    /// Interpolation family.
    pub schedule: ScheduleKind,
    /// Total evolution time; `f64::INFINITY` denotes the adiabatic limit.
    pub tau: f64,
}

impl GroverProblem {
    /// Validated constructor.
    pub fn new(n_items: usize, marked: usize, schedule: ScheduleKind, tau: f64) -> Result<Self> {
        if n_items < 2 {
            return Err(Error::InvalidParameter { name: "n_items", reason: "need at least 2 items" });
        }
        if marked >= n_items {
            return Err(Error::InvalidParameter { name: "marked", reason: "must be below n_items" });
        }
        if !(tau > 0.0) {
            return Err(Error::InvalidParameter { name: "tau", reason: "must be positive" });
        }
        Ok(GroverProblem { n_items, marked, schedule, tau })
    }

    /// `Nbar = 1 - 1/N`.
    pub fn n_bar(&self) -> f64 {
        1.0 - 1.0 / self.n_items as f64
    }

    /// Schedule values at `s`.
    pub fn schedule_at(&self, s: f64) -> ScheduleValues {
        schedule_at(&self.schedule, s, self.n_items)
    }
}

/// `|+>`, the uniform superposition.
pub fn plus_state(n_items: usize) -> State {
    State::uniform(n_items)
}

/// `|phi>` normalized: uniform over the unmarked indices.
pub fn phi_hat(problem: &GroverProblem) -> State {
    let k = 1.0 / ((problem.n_items - 1) as f64).sqrt();
    let amps = (0..problem.n_items).map(|i| if i == problem.marked { c(0.0, 0.0) } else { c(k, 0.0) }).collect();
    State::from_raw(amps)
}

/// Dense `N x N` Hamiltonian.
pub fn build_grover_h(problem: &GroverProblem, s: f64) -> Hermitian {
    let n = problem.n_items;
    let m = problem.marked;
    let sv = problem.schedule_at(s);
    let inv_n = 1.0 / n as f64;
    let inv_rn = inv_n.sqrt();
    let mat = Matrix::from_fn(n, |i, j| {
        let mut v = -sv.f * inv_n;
        if i == j {
            v += sv.f + sv.g;
            if i == m {
                v -= sv.g;
            }
        }
        if i == m {
            v += sv.h * inv_rn;
        }
        if j == m {
            v += sv.h * inv_rn;
        }
        c(v, 0.0)
    });
    Hermitian::from_matrix_unchecked(mat)
}

/// Entries of the invariant 2x2 block and their `s`-derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedBlock {
    /// `<m|H|m>`.
    pub p: f64,
    /// `<phi|H|phi>`.
    pub r: f64,
    /// `<m|H|phi>`.
    pub q: f64,
    /// `p'`.
    pub dp: f64,
    /// `r'`.
    pub dr: f64,
    /// `q'`.
    pub dq: f64,
    /// `p''`.
    pub d2p: f64,
    /// `r''`.
    pub d2r: f64,
    /// `q''`.
    pub d2q: f64,
}

/// The 2x2 block in the basis `{|m>, |phi>}`.
pub fn reduced_block(problem: &GroverProblem, s: f64) -> ReducedBlock {
    let n = problem.n_items as f64;
    let nb = problem.n_bar();
    let rn = n.sqrt();
    let rnb = nb.sqrt();
    let sv = problem.schedule_at(s);
    let p_of = |f: f64, h: f64| f * nb + 2.0 * h / rn;
    let r_of = |f: f64, g: f64| f / n + g;
    let q_of = |f: f64, h: f64| rnb * (h - f / rn);
    ReducedBlock {
        p: p_of(sv.f, sv.h),
        r: r_of(sv.f, sv.g),
        q: q_of(sv.f, sv.h),
        dp: p_of(sv.df, sv.dh),
        dr: r_of(sv.df, sv.dg),
        dq: q_of(sv.df, sv.dh),
        d2p: p_of(sv.d2f, sv.d2h),
        d2r: r_of(sv.d2f, sv.d2g),
        d2q: q_of(sv.d2f, sv.d2h),
    }
}

/// Reduced Hamiltonian as a 2x2 operator.
pub fn reduced_hamiltonian(problem: &GroverProblem, s: f64) -> Hermitian {
    let b = reduced_block(problem, s);
    Hermitian::from_matrix_unchecked(Matrix::from_rows(2, &[c(b.p, 0.0), c(b.q, 0.0), c(b.q, 0.0), c(b.r, 0.0)]))
}

/// Reduced counter-diabatic term `(alpha'/tau) sigma_y`.
pub fn reduced_cd(problem: &GroverProblem, s: f64) -> Result<Hermitian> {
    let v = velocity(problem, s)?;
    Ok(pauli::y().scaled(v.d_alpha / problem.tau))
}

/// `|+>` written in the reduced basis.
pub fn reduced_initial_state(problem: &GroverProblem) -> State {
    let n = problem.n_items as f64;
    State::from_raw(vec![c(1.0 / n.sqrt(), 0.0), c(problem.n_bar().sqrt(), 0.0)])
}

/// Lifts a reduced amplitude pair back to the full `N`-dimensional space.
pub fn embed_reduced(problem: &GroverProblem, amps: &[C64]) -> Result<Vec<C64>> {
    if amps.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: amps.len() });
    }
    let k = 1.0 / ((problem.n_items - 1) as f64).sqrt();
    Ok((0..problem.n_items).map(|i| if i == problem.marked { amps[0] } else { amps[1] * k }).collect())
}

/// Velocity data of the two tracked levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelVelocity {
    /// `alpha'(s)`.
    pub d_alpha: f64,
    /// `b_-'(s)`.
    pub db_minus: f64,
    /// `b_+'(s)`.
    pub db_plus: f64,
    /// `<dE-|dE-> - |<E-|dE->|^2`.
    pub mu_minus: f64,
    /// `<dE+|dE+> - |<E+|dE+>|^2`.
    pub mu_plus: f64,
}

/// Closed-form spectrum at one `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroverSpectrum {
    /// Normalized time.
    pub s: f64,
    /// Ground energy.
    pub e_minus: f64,
    /// First excited energy of the tracked pair.
    pub e_plus: f64,
    /// Energy `f + g` of the `(N-2)`-fold degenerate space.
    pub e_deg: f64,
    /// `b_-` in `|E-> ~ |m> + b_- sum_{i != m} |i>`.
    pub b_minus: f64,
    /// `b_+` in the same convention.
    pub b_plus: f64,
    /// Mixing angle.
    pub alpha: f64,
    /// `None` for schedules without analytic derivatives.
    pub velocity: Option<LevelVelocity>,
}

impl GroverSpectrum {
    /// `E+ - E-`.
    pub fn gap(&self) -> f64 {
        self.e_plus - self.e_minus
    }
}

/// Distance in `s` from an exact level crossing inside which the mixing-angle
/// velocity takes its limiting value.
const CROSSING_WINDOW: f64 = 6e-6;

/// `atan2(y, x)` mapped to `[0, 2 pi)`, with `y == 0` read as `+0`.
fn angle_upper(y: f64, x: f64) -> f64 {
    let y = if y == 0.0 { 0.0 } else { y };
    let a = y.atan2(x);
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

/// `2 alpha`, on the branch that keeps `alpha` continuous along the schedule.
///
/// Oracular schedules have `q <= 0`, so `beta` stays in `[-pi, 0]` and the
/// gauge `<m|E> >= 0` holds. The NLNO coupling drives `q` through zero at
/// `s = 1/sqrt(N)`, where `delta` has the sign of `1 - 2/sqrt(N)`: for
/// `N > 4` the path crosses `beta = 0`, for `N < 4` it crosses `beta = -pi`,
/// and `N = 4` is an exact level crossing.
fn double_angle(problem: &GroverProblem, blk: &ReducedBlock) -> f64 {
    let delta = (blk.p - blk.r) / 2.0;
    if !problem.schedule.is_non_oracular() {
        -angle_upper(-blk.q, delta)
    } else if problem.n_items >= 4 {
        let q = if blk.q == 0.0 { 0.0 } else { blk.q };
        q.atan2(delta)
    } else if blk.q > 0.0 {
        blk.q.atan2(delta) - 2.0 * PI
    } else {
        -angle_upper(-blk.q, delta)
    }
}

fn mixing_angle(problem: &GroverProblem, s: f64) -> (ReducedBlock, f64) {
    let blk = reduced_block(problem, s);
    let alpha = double_angle(problem, &blk) / 2.0;
    (blk, alpha)
}

fn velocity_from_block(problem: &GroverProblem, blk: &ReducedBlock, alpha: f64) -> Result<LevelVelocity> {
    if !problem.schedule.has_derivatives() {
        return Err(Error::UnsupportedSchedule);
    }
    let delta = (blk.p - blk.r) / 2.0;
    let d_delta = (blk.dp - blk.dr) / 2.0;
    let r2 = delta * delta + blk.q * blk.q;
    let v2 = d_delta * d_delta + blk.dq * blk.dq;
    // Near an exact crossing the ratio loses digits as eps / d^2 while its
    // limit is off by O(d); switch over at d ~ eps^(1/3).
    let d_alpha = if r2 > CROSSING_WINDOW * CROSSING_WINDOW * v2 && r2 > 0.0 {
        0.5 * (delta * blk.dq - blk.q * d_delta) / r2
    } else if v2 == 0.0 {
        0.0
    } else {
        let d2_delta = (blk.d2p - blk.d2r) / 2.0;
        0.25 * (d_delta * blk.d2q - d2_delta * blk.dq) / v2
    };
    if !d_alpha.is_finite() {
        return Err(Error::NonFinite("mixing-angle derivative"));
    }
    let root = ((problem.n_items - 1) as f64).sqrt();
    let (sa, ca) = (alpha.sin(), alpha.cos());
    Ok(LevelVelocity {
        d_alpha,
        db_minus: d_alpha / (sa * sa) / root,
        db_plus: d_alpha / (ca * ca) / root,
        mu_minus: d_alpha * d_alpha,
        mu_plus: d_alpha * d_alpha,
    })
}

fn velocity(problem: &GroverProblem, s: f64) -> Result<LevelVelocity> {
    let (blk, alpha) = mixing_angle(problem, s);
    velocity_from_block(problem, &blk, alpha)
}

/// Closed-form levels, mixing coefficients and level velocities.
pub fn spectrum_closed_form(problem: &GroverProblem, s: f64) -> GroverSpectrum {
    let (blk, alpha) = mixing_angle(problem, s);
    let sv = problem.schedule_at(s);
    let mean = (blk.p + blk.r) / 2.0;
    let delta = (blk.p - blk.r) / 2.0;
    let big_r = delta.hypot(blk.q);
    let e_minus = if mean > 0.0 { (blk.p * blk.r - blk.q * blk.q) / (mean + big_r) } else { mean - big_r };
    let e_plus = mean + big_r;

    let root = ((problem.n_items - 1) as f64).sqrt();
    let denom = problem.n_bar() * (sv.f - sv.h * (problem.n_items as f64).sqrt());
    let (b_minus, b_plus) = if denom.abs() >= B_DENOMINATOR_TOL {
        ((blk.p - e_minus) / denom, (blk.p - e_plus) / denom)
    } else {
        (-1.0 / (alpha.tan() * root), alpha.tan() / root)
    };

    GroverSpectrum {
        s,
        e_minus,
        e_plus,
        e_deg: sv.f + sv.g,
        b_minus,
        b_plus,
        alpha,
        velocity: velocity_from_block(problem, &blk, alpha).ok(),
    }
}

fn reduced_eigvec(alpha: f64, branch: Branch) -> [f64; 2] {
    match branch {
        Branch::Plus => [alpha.cos(), alpha.sin()],
        Branch::Minus => [-alpha.sin(), alpha.cos()],
    }
}

fn embed_real(problem: &GroverProblem, v: [f64; 2]) -> Vec<C64> {
    let k = 1.0 / ((problem.n_items - 1) as f64).sqrt();
    (0..problem.n_items).map(|i| c(if i == problem.marked { v[0] } else { v[1] * k }, 0.0)).collect()
}

/// `|E-(s)>` or `|E+(s)>` in closed form.
///
/// Errors with [`Error::NearDegenerate`] when the two tracked levels are
/// closer than [`DEGENERACY_TOL`], since the label is then ambiguous.
pub fn eigvec_closed_form(problem: &GroverProblem, s: f64, branch: Branch) -> Result<State> {
    let spec = spectrum_closed_form(problem, s);
    if spec.gap() < DEGENERACY_TOL {
        return Err(Error::NearDegenerate { s, gap: spec.gap() });
    }
    Ok(State::from_raw(embed_real(problem, reduced_eigvec(spec.alpha, branch))))
}

/// Orthonormal basis of the `(N-2)`-fold degenerate space: each vector has
/// zero weight on `|m>` and zero sum over the unmarked indices.
pub fn degenerate_basis(problem: &GroverProblem) -> Vec<State> {
    let others: Vec<usize> = (0..problem.n_items).filter(|&i| i != problem.marked).collect();
    (1..others.len())
        .map(|k| {
            let kf = k as f64;
            let norm = 1.0 / (kf * (kf + 1.0)).sqrt();
            let mut amps = vec![c(0.0, 0.0); problem.n_items];
            for &j in &others[..k] {
                amps[j] = c(norm, 0.0);
            }
            amps[others[k]] = c(-kf * norm, 0.0);
            State::from_raw(amps)
        })
        .collect()
}

/// `d/ds |E_branch(s)>`.
pub fn eigvec_derivative(problem: &GroverProblem, s: f64, branch: Branch) -> Result<Vec<C64>> {
    let (blk, alpha) = mixing_angle(problem, s);
    let v = velocity_from_block(problem, &blk, alpha)?;
    let tangent = match branch {
        Branch::Plus => reduced_eigvec(alpha, Branch::Minus).map(|x| x * v.d_alpha),
        Branch::Minus => reduced_eigvec(alpha, Branch::Plus).map(|x| -x * v.d_alpha),
    };
    Ok(embed_real(problem, tangent))
}

/// `(mu_-, mu_+)` with derivatives in `s`.
pub fn mu_grover(problem: &GroverProblem, s: f64) -> Result<(f64, f64)> {
    let v = velocity(problem, s)?;
    Ok((v.mu_minus, v.mu_plus))
}

/// Dense counter-diabatic term `(i/tau) sum_{+-} |dE><E|` (projection
/// removed), assembled from the closed-form frame.
pub fn build_grover_cd(problem: &GroverProblem, s: f64) -> Result<Hermitian> {
    let (blk, alpha) = mixing_angle(problem, s);
    let v = velocity_from_block(problem, &blk, alpha)?;
    let frame = [Branch::Minus, Branch::Plus].map(|branch| {
        let tangent = match branch {
            Branch::Plus => reduced_eigvec(alpha, Branch::Minus).map(|x| x * v.d_alpha),
            Branch::Minus => reduced_eigvec(alpha, Branch::Plus).map(|x| -x * v.d_alpha),
        };
        FramePoint {
            state: State::from_raw(embed_real(problem, reduced_eigvec(alpha, branch))),
            derivative: embed_real(problem, tangent),
        }
    });
    Ok(counter_diabatic(&frame, problem.tau)?.operator)
}

/// Which oracle operator to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    /// `O_m = 1 - |m><m|`.
    Oracular,
    /// `|+><m| + |m><+|`.
    NonOracular,
}

/// Action of an oracle on the basis vector `|i>`. The result is generally
/// not normalized (`O_m |m> = 0`).
pub fn oracle_action(kind: OracleKind, problem: &GroverProblem, i: usize) -> Result<Vec<C64>> {
    let n = problem.n_items;
    if i >= n {
        return Err(Error::InvalidParameter { name: "i", reason: "basis index out of range" });
    }
    let m = problem.marked;
    let mut out = vec![c(0.0, 0.0); n];
    match kind {
        OracleKind::Oracular => {
            if i != m {
                out[i] = c(1.0, 0.0);
            }
        }
        OracleKind::NonOracular => {
            let k = 1.0 / (n as f64).sqrt();
            out[m] = c(k, 0.0);
            if i == m {
                for a in out.iter_mut() {
                    *a += c(k, 0.0);
                }
            }
        }
    }
    Ok(out)
}

/// Dense Hamiltonian path, optionally with the counter-diabatic term.
pub fn hamiltonian_path(problem: GroverProblem, counter_diabatic: bool) -> impl Fn(f64) -> Result<Hermitian> {
    move |s| {
        let h = build_grover_h(&problem, s);
        if counter_diabatic {
            Ok(h.plus(&build_grover_cd(&problem, s)?))
        } else {
            Ok(h)
        }
    }
}

/// Reduced (2x2) Hamiltonian path, optionally with the counter-diabatic term.
pub fn reduced_path(problem: GroverProblem, counter_diabatic: bool) -> impl Fn(f64) -> Result<Hermitian> {
    move |s| {
        let h = reduced_hamiltonian(&problem, s);
        if counter_diabatic {
            Ok(h.plus(&reduced_cd(&problem, s)?))
        } else {
            Ok(h)
        }
    }
}
