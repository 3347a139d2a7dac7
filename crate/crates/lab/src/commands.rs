//! The subcommands. Each returns the JSON report printed on stdout and writes
//! its data files under the output directory.

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde_json::{json, Value};
use sta_core::ce_gates::{self, GateSpec};
use sta_core::cost::{self, CostMethod, CostModel, CostReport, NormKind, ScalingFit};
use sta_core::dynamics::{self, PropagationResult};
use sta_core::grover::{self, GroverProblem};
use sta_core::optimizer;
use sta_core::qcore::{State, C64};
use sta_core::quadrature::QuadratureSpec;
use sta_core::regression::fit_loglog;
use sta_core::rng::SeededRng;
use sta_core::{Branch, Error};

use crate::config::{Command, Method, RunConfig, System};
use crate::report::{self, num, Cell, Table};
use crate::svg::{self, Panel, Scale, Series};
use crate::LabError;

/// Reference exponents of the cost table: (Frobenius, spectral, time).
const TABLE1_REFERENCE: [(CostModel, f64, f64, &str); 4] = [
    (CostModel::LocalAdiabatic, 0.5, 0.0, "O(sqrt N)"),
    (CostModel::Superenergetic, 1.0, 0.5, "O(1)"),
    (CostModel::Nlno, 0.5, 0.0, "O(sqrt N)"),
    (CostModel::Superadiabatic, 0.5, 0.0, "O(1)"),
];

/// Output files written by a command, relative names in creation order.
struct Outputs {
    dir: Option<PathBuf>,
    written: Vec<String>,
}

impl Outputs {
    fn new(dir: Option<PathBuf>) -> Self {
        Outputs { dir, written: Vec::new() }
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), LabError> {
        if let Some(dir) = &self.dir {
            report::write_atomic(&dir.join(name), bytes)?;
            self.written.push(name.to_string());
        }
        Ok(())
    }
}

fn progress(label: &str, done: &AtomicUsize, total: usize) {
    let k = done.fetch_add(1, Ordering::Relaxed) + 1;
    if k == total || k.is_multiple_of(10) {
        eprintln!("{label}: {k}/{total}");
    }
}

fn norm_name(n: NormKind) -> &'static str {
    match n {
        NormKind::Frobenius => "frobenius",
        NormKind::Spectral => "spectral",
    }
}

fn method_name(m: CostMethod) -> &'static str {
    match m {
        CostMethod::Quadrature => "quadrature",
        CostMethod::ClosedForm => "closed_form",
    }
}

fn cost_json(r: &CostReport) -> Value {
    json!({
        "sigma": num(r.sigma),
        "norm": norm_name(r.norm_kind),
        "method": method_name(r.method),
        "samples": r.samples,
        "error_estimate": num(r.error_estimate),
        "tau": r.tau.map(num),
    })
}

fn integrand_table(r: &CostReport) -> Table {
    let mut t = Table::new(&["s", "norm"]);
    for &(s, v) in &r.integrand_trace {
        t.push(vec![s.into(), v.into()]);
    }
    t
}

fn trace_table(r: &PropagationResult, column: &'static str) -> Table {
    let mut t = Table::new(&["s", column]);
    for &(s, f) in &r.fidelity_trace {
        t.push(vec![s.into(), f.into()]);
    }
    t
}

/// Runs the command in `cfg` and returns its report.
pub fn execute(cfg: &RunConfig) -> Result<Value, LabError> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.unwrap_or(0))
        .build()
        .map_err(|e| LabError::Config(format!("thread pool: {e}")))?;
    let sweep_dir = || Some(cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from(".")));
    let mut out = match cfg.command {
        Command::Fig1 | Command::GroverSpectrum | Command::TimeToSolution | Command::Table1 => {
            Outputs::new(sweep_dir())
        }
        _ => Outputs::new(cfg.out_dir.clone()),
    };
    let body = pool.install(|| match cfg.command {
        Command::GateCost => gate_cost(cfg, &mut out),
        Command::ThetaOpt => theta_opt(cfg),
        Command::Fig1 => fig1(cfg, &mut out),
        Command::GroverSpectrum => grover_spectrum(cfg, &mut out),
        Command::GroverCost => grover_cost(cfg, &mut out),
        Command::Evolve => match cfg.system {
            System::Gate => evolve_gate(cfg, &mut out),
            System::Search => evolve_search(cfg, &mut out),
        },
        Command::TimeToSolution => time_to_solution(cfg, &mut out),
        Command::Table1 => table1(cfg, &mut out),
    })?;

    let mut doc = json!({
        "command": cfg.command.name(),
        "config": serde_json::to_value(cfg).expect("config is serializable"),
    });
    let json_name = format!("{}.json", cfg.command.name());
    let mut files = out.written.clone();
    if out.dir.is_some() {
        files.push(json_name.clone());
    }
    let map = doc.as_object_mut().expect("object");
    if let Value::Object(fields) = body {
        map.extend(fields);
    }
    map.insert("files".into(), json!(files));
    report::round_json(&mut doc);
    out.write(&json_name, &report::json_bytes(&doc))?;
    Ok(doc)
}

fn gate_cost(cfg: &RunConfig, out: &mut Outputs) -> Result<Value, LabError> {
    let spec = cfg.gate_spec()?;
    let norm: NormKind = cfg.norm.into();
    let cd = cfg.counter_diabatic;
    let report = match cfg.method {
        Method::ClosedForm if !cd => {
            return Err(LabError::Config("the closed form covers the counter-diabatic gate only".into()));
        }
        Method::ClosedForm => cost::ce_closed_form_report(&spec, norm),
        Method::Spectral => {
            let tau = if cd { spec.tau } else { f64::INFINITY };
            cost::cost_superadiabatic_spectral(&spec, tau, norm, &QuadratureSpec::default())?
        }
        Method::Dense => cost::energetic_cost(ce_gates::hamiltonian_path(spec, cd), norm, &QuadratureSpec::default())?,
    };
    if !report.integrand_trace.is_empty() {
        out.write("gate-cost_integrand.csv", &integrand_table(&report).to_csv())?;
    }
    let closed = cd.then(|| {
        let f = cost::cost_ce_closed_form(spec.omega_tau(), spec.theta0, spec.n);
        match norm {
            NormKind::Frobenius => f,
            NormKind::Spectral => f / (spec.dim() as f64).sqrt(),
        }
    });
    Ok(json!({
        "paper_ref": if cd {
            "energetic cost of the superadiabatic controlled gate, 2 omega sqrt(1 + theta0^2 / (4 (omega tau)^2)) times 2^(n/2)"
        } else {
            "energetic cost of the bare adiabatic controlled gate"
        },
        "sigma": num(report.sigma),
        "cost": cost_json(&report),
        "closed_form": closed.map(num),
        "dimension": spec.dim(),
        "omega_tau": num(spec.omega_tau()),
        "mean_trials": num(ce_gates::mean_trials(spec.theta0)),
        "success_probability": num((spec.theta0 / 2.0).sin().powi(2)),
    }))
}

fn theta_opt(cfg: &RunConfig) -> Result<Value, LabError> {
    let r = optimizer::theta_min(cfg.omega_tau)?;
    Ok(json!({
        "paper_ref": "angle minimizing the average cost Sigma(theta0) / sin^2(theta0 / 2) of the repeat-until-success gate",
        "omega_tau": num(r.omega_tau),
        "theta_min": num(r.theta_min),
        "avg_cost_at_min": num(r.avg_cost_at_min),
        "sigma_rel": num(r.sigma_rel),
        "eta_at_min": num(r.eta_at_min),
        "relative_residual": num(r.relative_residual),
        "golden_check": num(r.golden_check),
        "theta_critical": num(optimizer::THETA_CRITICAL),
        "mean_trials_at_min": num(ce_gates::mean_trials(r.theta_min)),
    }))
}

fn fig1(cfg: &RunConfig, out: &mut Outputs) -> Result<Value, LabError> {
    let grid = cfg.log_grid();
    let done = AtomicUsize::new(0);
    let rows: Vec<_> = grid
        .par_iter()
        .map(|&w| {
            let r = optimizer::theta_min(w);
            progress("fig1", &done, grid.len());
            r
        })
        .collect::<Result<_, Error>>()?;

    let mut table = Table::new(&["omega_tau", "theta_min", "sigma_rel", "avg_cost_at_min"]);
    for r in &rows {
        table.push(vec![r.omega_tau.into(), r.theta_min.into(), r.sigma_rel.into(), r.avg_cost_at_min.into()]);
    }
    out.write("fig1.csv", &table.to_csv())?;

    let series = |label: &str, f: fn(&optimizer::ThetaOptResult) -> f64| Series {
        label: label.into(),
        points: rows.iter().map(|r| (r.omega_tau, f(r))).collect(),
        markers: true,
    };
    let panels = [
        Panel {
            title: "Optimal angle".into(),
            x_label: "omega tau".into(),
            y_label: "theta0 min".into(),
            x_scale: Scale::Log10,
            series: vec![series("theta_min", |r| r.theta_min)],
        },
        Panel {
            title: "Relative average cost".into(),
            x_label: "omega tau".into(),
            y_label: "Sigma rel".into(),
            x_scale: Scale::Log10,
            series: vec![series("sigma_rel", |r| r.sigma_rel)],
        },
    ];
    out.write("fig1.svg", svg::render(&panels).as_bytes())?;

    let (first, last) = (&rows[0], &rows[rows.len() - 1]);
    Ok(json!({
        "paper_ref": "optimal angle theta0_min and relative cost Sigma_rel against omega tau",
        "points": rows.len(),
        "first": {"omega_tau": num(first.omega_tau), "theta_min": num(first.theta_min), "sigma_rel": num(first.sigma_rel)},
        "last": {"omega_tau": num(last.omega_tau), "theta_min": num(last.theta_min), "sigma_rel": num(last.sigma_rel)},
        "theta_critical": num(optimizer::THETA_CRITICAL),
    }))
}

fn grover_spectrum(cfg: &RunConfig, out: &mut Outputs) -> Result<Value, LabError> {
    let p = cfg.problem(1.0)?;
    let k = cfg.points - 1;
    let rows: Vec<_> =
        (0..cfg.points).into_par_iter().map(|i| grover::spectrum_closed_form(&p, i as f64 / k as f64)).collect();

    let mut table = Table::new(&["s", "e_minus", "e_plus", "e_deg", "gap", "alpha", "mu_minus", "mu_plus"]);
    for sp in &rows {
        let (mm, mp) = sp.velocity.map_or((f64::NAN, f64::NAN), |v| (v.mu_minus, v.mu_plus));
        table.push(vec![
            sp.s.into(),
            sp.e_minus.into(),
            sp.e_plus.into(),
            sp.e_deg.into(),
            sp.gap().into(),
            sp.alpha.into(),
            mm.into(),
            mp.into(),
        ]);
    }
    out.write("grover-spectrum.csv", &table.to_csv())?;

    let line = |label: &str, f: fn(&grover::GroverSpectrum) -> f64| Series {
        label: label.into(),
        points: rows.iter().map(|sp| (sp.s, f(sp))).collect(),
        markers: false,
    };
    let mut series = vec![line("E-", |sp| sp.e_minus), line("E+", |sp| sp.e_plus)];
    if p.n_items > 2 {
        series.push(line("E deg", |sp| sp.e_deg));
    }
    let panel = Panel {
        title: format!("Search spectrum, N = {}", p.n_items),
        x_label: "s".into(),
        y_label: "energy".into(),
        x_scale: Scale::Linear,
        series,
    };
    out.write("grover-spectrum.svg", svg::render(&[panel]).as_bytes())?;

    let min = rows.iter().min_by(|a, b| a.gap().total_cmp(&b.gap())).expect("at least two points");
    Ok(json!({
        "paper_ref": "closed-form lowest, highest and degenerate levels of the search Hamiltonian",
        "n_items": p.n_items,
        "points": rows.len(),
        "min_gap": num(min.gap()),
        "s_at_min_gap": num(min.s),
    }))
}

fn grover_cost(cfg: &RunConfig, out: &mut Outputs) -> Result<Value, LabError> {
    let cd = cfg.counter_diabatic;
    let tau = if cd { cfg.tau } else { f64::INFINITY };
    let p = cfg.problem(tau)?;
    let norm: NormKind = cfg.norm.into();
    let quad = cost::sweep_quadrature(p.n_items);
    let report = match cfg.method {
        Method::Spectral => cost::cost_superadiabatic_spectral(&p, tau, norm, &quad)?,
        Method::Dense => cost::energetic_cost(grover::hamiltonian_path(p, cd), norm, &quad)?,
        Method::ClosedForm => {
            return Err(LabError::Config("no closed form for the search cost; use dense or spectral".into()))
        }
    };
    out.write("grover-cost_integrand.csv", &integrand_table(&report).to_csv())?;
    Ok(json!({
        "paper_ref": "energetic cost of the search Hamiltonian, the time integral of its norm",
        "sigma": num(report.sigma),
        "cost": cost_json(&report),
        "n_items": p.n_items,
        "counter_diabatic": cd,
    }))
}

fn register_input(cfg: &RunConfig, dim: usize) -> Result<State, LabError> {
    let bad = || LabError::Config(format!("input must be random, plus or basis:K with K < {dim}, got {:?}", cfg.input));
    match cfg.input.as_str() {
        "random" => {
            let mut rng = SeededRng::with_stream(cfg.seed, 0);
            let amps = (0..dim).map(|_| C64::new(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0)).collect();
            Ok(State::normalized(amps)?)
        }
        "plus" => Ok(State::uniform(dim)),
        other => {
            let k: usize = other.strip_prefix("basis:").and_then(|k| k.parse().ok()).ok_or_else(bad)?;
            if k >= dim {
                return Err(bad());
            }
            Ok(State::basis(dim, k))
        }
    }
}

fn steps_for(
    cfg: &RunConfig,
    h: impl FnMut(f64) -> sta_core::Result<sta_core::Hermitian>,
    tau: f64,
) -> Result<usize, LabError> {
    Ok(match cfg.steps {
        Some(n) => n,
        None => dynamics::default_steps(tau, dynamics::estimate_max_norm(h, 64)?),
    })
}

fn evolve_gate(cfg: &RunConfig, out: &mut Outputs) -> Result<Value, LabError> {
    let spec: GateSpec = cfg.gate_spec()?;
    let psi = register_input(cfg, spec.register_dim())?;
    let cd = cfg.counter_diabatic;
    let steps = steps_for(cfg, ce_gates::hamiltonian_path(spec, cd), spec.tau)?;
    let r = dynamics::ground_fidelity_trace(
        ce_gates::hamiltonian_path(spec, cd),
        &ce_gates::initial_state(&psi),
        spec.tau,
        steps,
        |s| Ok(ce_gates::ground_space(s, &spec)),
    )?;
    let target = ce_gates::expected_final_state(&psi, &spec)?;
    let rus = ce_gates::run_repeat_until_success(&spec, &psi, cfg.max_trials, cfg.seed, 1)?;
    out.write("evolve_trace.csv", &trace_table(&r, "ground_fidelity").to_csv())?;
    Ok(json!({
        "paper_ref": "superadiabatic gate protocol: final state cos(theta0/2)|psi>|0> + sin(theta0/2) U|psi>|1>, then repeat until the ancilla reads 1",
        "system": "gate",
        "counter_diabatic": cd,
        "steps": r.steps,
        "final_fidelity": num(r.final_state.fidelity(&target)),
        "min_ground_fidelity": num(r.min_fidelity()),
        "norm_drift": num(r.norm_drift),
        "p_success": num(ce_gates::ancilla_one_probability(&r.final_state)),
        "p_success_expected": num((spec.theta0 / 2.0).sin().powi(2)),
        "repeat_until_success": {
            "trials": rus.trials,
            "truncated": rus.truncated,
            "mean_trials_expected": num(ce_gates::mean_trials(spec.theta0)),
            "seed": rus.seed,
            "stream": rus.stream,
        },
    }))
}

/// Full-space dimension up to which `evolve` propagates the dense matrix.
pub const DENSE_SEARCH_LIMIT: usize = 64;

/// Instantaneous search ground state. Where the two tracked levels touch the
/// label is ambiguous, so the span of both is returned.
fn search_ground(p: &GroverProblem, s: f64) -> sta_core::Result<Vec<State>> {
    match grover::eigvec_closed_form(p, s, Branch::Minus) {
        Ok(g) => Ok(vec![g]),
        Err(Error::NearDegenerate { .. }) => Ok(vec![State::basis(p.n_items, p.marked), grover::phi_hat(p)]),
        Err(e) => Err(e),
    }
}

/// Same, in the reduced basis `(|m>, |phi_hat>)`, where the ground state is
/// `(-sin alpha, cos alpha)`.
fn reduced_ground(p: &GroverProblem, s: f64) -> Vec<State> {
    let sp = grover::spectrum_closed_form(p, s);
    if sp.gap() < grover::DEGENERACY_TOL {
        return vec![State::basis(2, 0), State::basis(2, 1)];
    }
    let (sin, cos) = sp.alpha.sin_cos();
    vec![State::new(vec![C64::new(-sin, 0.0), C64::new(cos, 0.0)]).expect("unit vector")]
}

fn evolve_search(cfg: &RunConfig, out: &mut Outputs) -> Result<Value, LabError> {
    let cd = cfg.counter_diabatic;
    let p = cfg.problem(cfg.tau)?;
    let dense = p.n_items <= DENSE_SEARCH_LIMIT;
    let (r, p_marked) = if dense {
        let steps = steps_for(cfg, grover::hamiltonian_path(p, cd), p.tau)?;
        let psi0 = grover::plus_state(p.n_items);
        let r = dynamics::ground_fidelity_trace(grover::hamiltonian_path(p, cd), &psi0, p.tau, steps, |s| {
            search_ground(&p, s)
        })?;
        let pm = r.final_state.amplitudes()[p.marked].norm_sqr();
        (r, pm)
    } else {
        let steps = steps_for(cfg, grover::reduced_path(p, cd), p.tau)?;
        let psi0 = grover::reduced_initial_state(&p);
        let r = dynamics::ground_fidelity_trace(grover::reduced_path(p, cd), &psi0, p.tau, steps, |s| {
            Ok(reduced_ground(&p, s))
        })?;
        let pm = r.final_state.amplitudes()[0].norm_sqr();
        (r, pm)
    };
    out.write("evolve_trace.csv", &trace_table(&r, "ground_fidelity").to_csv())?;
    Ok(json!({
        "paper_ref": "search driven from the uniform superposition to the marked item",
        "system": "search",
        "representation": if dense { "dense" } else { "reduced" },
        "counter_diabatic": cd,
        "steps": r.steps,
        "p_marked": num(p_marked),
        "min_ground_fidelity": num(r.min_fidelity()),
        "final_ground_fidelity": num(r.fidelity_trace.last().map_or(f64::NAN, |t| t.1)),
        "norm_drift": num(r.norm_drift),
    }))
}

fn time_to_solution(cfg: &RunConfig, out: &mut Outputs) -> Result<Value, LabError> {
    let model: CostModel = cfg.model.into();
    let done = AtomicUsize::new(0);
    let rows: Vec<_> = cfg
        .sizes
        .par_iter()
        .map(|&n| {
            let r = cost::time_to_solution(model, n, cfg.target);
            progress("time-to-solution", &done, cfg.sizes.len());
            r
        })
        .collect::<Result<_, Error>>()?;
    let mut table = Table::new(&["n", "tau_star", "fidelity"]);
    for r in &rows {
        table.push(vec![r.n.into(), r.tau_star.into(), r.fidelity.into()]);
    }
    out.write("time-to-solution.csv", &table.to_csv())?;
    let fit = time_fit(&rows);
    Ok(json!({
        "paper_ref": "time complexity column of the search table: shortest tau reaching the target success probability",
        "model": model.name(),
        "target": num(cfg.target),
        "rows": rows.iter().map(|r| json!({"n": r.n, "tau_star": num(r.tau_star), "fidelity": num(r.fidelity)})).collect::<Vec<_>>(),
        "slope": fit.map(|f| num(f.slope)),
        "r2": fit.map(|f| num(f.r2)),
    }))
}

fn time_fit(rows: &[cost::TimeToSolution]) -> Option<sta_core::regression::LogLogFit> {
    let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.tau_star).collect();
    fit_loglog(&xs, &ys).ok()
}

fn table1(cfg: &RunConfig, out: &mut Outputs) -> Result<Value, LabError> {
    let ns = cfg.doubling_sizes();
    let norms = [NormKind::Frobenius, NormKind::Spectral];
    let mut jobs: Vec<(CostModel, NormKind, usize)> = Vec::new();
    for m in CostModel::ALL {
        for k in norms {
            jobs.extend(ns.iter().map(|&n| (m, k, n)));
        }
    }
    let done = AtomicUsize::new(0);
    let sigmas: Vec<f64> = jobs
        .par_iter()
        .map(|&(m, k, n)| {
            let r = cost::sweep_cost(m, k, n, cfg.tau).map(|r| r.sigma);
            progress("table1", &done, jobs.len());
            r
        })
        .collect::<Result<_, Error>>()?;

    let mut long = Table::new(&["model", "norm", "n", "sigma"]);
    for (&(m, k, n), &s) in jobs.iter().zip(&sigmas) {
        long.push(vec![m.name().into(), norm_name(k).into(), n.into(), s.into()]);
    }

    let fits: Vec<(ScalingFit, ScalingFit)> = CostModel::ALL
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let block = |j: usize| &sigmas[(2 * i + j) * ns.len()..(2 * i + j + 1) * ns.len()];
            Ok((
                cost::fit_scaling(m, NormKind::Frobenius, &ns, block(0))?,
                cost::fit_scaling(m, NormKind::Spectral, &ns, block(1))?,
            ))
        })
        .collect::<Result<_, Error>>()?;

    let time_slopes: Vec<Option<f64>> = if cfg.with_time {
        CostModel::ALL
            .iter()
            .map(|&m| {
                let rows = cfg.sizes.par_iter().map(|&n| cost::time_to_solution(m, n, cfg.target)).collect::<Result<
                    Vec<_>,
                    Error,
                >>(
                )?;
                eprintln!("table1: time column for {} done", m.name());
                Ok(time_fit(&rows).map(|f| f.slope))
            })
            .collect::<Result<_, Error>>()?
    } else {
        vec![None; 4]
    };

    let mut table = Table::new(&[
        "model",
        "frobenius_slope",
        "frobenius_r2",
        "spectral_slope",
        "spectral_r2",
        "reference_frobenius",
        "reference_spectral",
        "time_slope",
    ]);
    let mut rows = Vec::new();
    for (((fro, spe), t), &(m, ref_f, ref_s, ref_t)) in fits.iter().zip(&time_slopes).zip(&TABLE1_REFERENCE) {
        table.push(vec![
            m.name().into(),
            fro.slope.into(),
            fro.r2.into(),
            spe.slope.into(),
            spe.r2.into(),
            ref_f.into(),
            ref_s.into(),
            t.map_or(Cell::Text(String::new()), Cell::Num),
        ]);
        rows.push(json!({
            "model": m.name(),
            "frobenius_slope": num(fro.slope),
            "frobenius_r2": num(fro.r2),
            "spectral_slope": num(spe.slope),
            "spectral_r2": num(spe.r2),
            "reference": {"frobenius": ref_f, "spectral": ref_s, "time": ref_t},
            "time_slope": t.map(num),
        }));
    }
    out.write("table1.csv", &table.to_csv())?;
    out.write("table1_costs.csv", &long.to_csv())?;
    Ok(json!({
        "paper_ref": "energy-time complexity table of the search variants: exponents of cost against N",
        "sizes": ns,
        "fit_excludes_smallest": cost::DROPPED_SIZES,
        "tau": num(cfg.tau),
        "rows": rows,
    }))
}
