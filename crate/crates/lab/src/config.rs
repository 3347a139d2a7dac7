//! Run configuration: defaults, JSON config files and validation.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use sta_core::ce_gates::{GateSpec, MAX_CONTROLS};
use sta_core::cost::{CostModel, NormKind};
use sta_core::grover::{GroverProblem, ScheduleKind};

use crate::LabError;

/// Environment variable that replaces the default seed.
pub const SEED_ENV: &str = "STA_SEED";

/// Subcommand being run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    #[default]
    GateCost,
    ThetaOpt,
    Fig1,
    GroverSpectrum,
    GroverCost,
    Evolve,
    TimeToSolution,
    Table1,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::GateCost => "gate-cost",
            Command::ThetaOpt => "theta-opt",
            Command::Fig1 => "fig1",
            Command::GroverSpectrum => "grover-spectrum",
            Command::GroverCost => "grover-cost",
            Command::Evolve => "evolve",
            Command::TimeToSolution => "time-to-solution",
            Command::Table1 => "table1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Schedule {
    Linear,
    LocalAdiabatic,
    Superenergetic,
    Nlno,
}

impl From<Schedule> for ScheduleKind {
    fn from(s: Schedule) -> Self {
        match s {
            Schedule::Linear => ScheduleKind::Linear,
            Schedule::LocalAdiabatic => ScheduleKind::LocalAdiabatic,
            Schedule::Superenergetic => ScheduleKind::Superenergetic,
            Schedule::Nlno => ScheduleKind::Nlno,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Model {
    LocalAdiabatic,
    Superenergetic,
    Nlno,
    Superadiabatic,
}

impl From<Model> for CostModel {
    fn from(m: Model) -> Self {
        match m {
            Model::LocalAdiabatic => CostModel::LocalAdiabatic,
            Model::Superenergetic => CostModel::Superenergetic,
            Model::Nlno => CostModel::Nlno,
            Model::Superadiabatic => CostModel::Superadiabatic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Norm {
    Frobenius,
    Spectral,
}

impl From<Norm> for NormKind {
    fn from(n: Norm) -> Self {
        match n {
            Norm::Frobenius => NormKind::Frobenius,
            Norm::Spectral => NormKind::Spectral,
        }
    }
}

/// How a cost integral is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Method {
    /// Quadrature of the norm of the dense matrix.
    Dense,
    /// Quadrature of the closed-form spectral sum.
    Spectral,
    /// Analytic expression (gate model only).
    ClosedForm,
}

/// Which model `evolve` propagates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum System {
    Gate,
    Search,
}

/// Fully resolved configuration. Every field has a default, so a config file
/// may set any subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_deserializing)]
    pub command: Command,
    /// Control qubits of the gate.
    pub controls: u32,
    pub phi: f64,
    pub axis: [f64; 3],
    pub theta0: f64,
    pub omega_tau: f64,
    pub n_items: usize,
    pub marked: usize,
    pub schedule: Schedule,
    pub model: Model,
    pub system: System,
    pub tau: f64,
    pub counter_diabatic: bool,
    pub norm: Norm,
    pub method: Method,
    pub grid_min: f64,
    pub grid_max: f64,
    pub grid_points: usize,
    /// Samples in `s` for spectra.
    pub points: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub sizes: Vec<usize>,
    pub target: f64,
    pub with_time: bool,
    pub steps: Option<usize>,
    /// `random`, `plus` or `basis:<k>`.
    pub input: String,
    pub max_trials: usize,
    pub seed: u64,
    pub threads: Option<usize>,
    pub out_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: Command::GateCost,
            controls: 0,
            phi: PI,
            axis: [0.0, 0.0, 1.0],
            theta0: PI,
            omega_tau: 1.0,
            n_items: 16,
            marked: 0,
            schedule: Schedule::Linear,
            model: Model::Superadiabatic,
            system: System::Gate,
            tau: 1.0,
            counter_diabatic: true,
            norm: Norm::Frobenius,
            method: Method::Spectral,
            grid_min: 1e-4,
            grid_max: 1e3,
            grid_points: 141,
            points: 101,
            n_min: 16,
            n_max: 1024,
            sizes: vec![8, 16, 32, 64, 128],
            target: 0.9,
            with_time: false,
            steps: None,
            input: "random".to_string(),
            max_trials: 1000,
            seed: 0,
            threads: None,
            out_dir: None,
        }
    }
}

fn config_error(msg: impl Into<String>) -> LabError {
    LabError::Config(msg.into())
}

impl RunConfig {
    /// Defaults, overlaid with `file` if given. `env_seed` replaces the
    /// default seed only when the file does not set one.
    pub fn load(file: Option<&Path>, env_seed: Option<&str>) -> Result<Self, LabError> {
        let (mut cfg, file_has_seed) = match file {
            None => (RunConfig::default(), false),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
                let value: serde_json::Value =
                    serde_json::from_str(&text).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
                let has_seed = value.get("seed").is_some();
                let cfg =
                    serde_json::from_value(value).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
                (cfg, has_seed)
            }
        };
        if !file_has_seed {
            if let Some(raw) = env_seed {
                cfg.seed = raw
                    .trim()
                    .parse()
                    .map_err(|_| config_error(format!("{SEED_ENV} must be an unsigned integer, got {raw:?}")))?;
            }
        }
        Ok(cfg)
    }

    pub fn gate_spec(&self) -> Result<GateSpec, LabError> {
        if self.controls > MAX_CONTROLS {
            return Err(config_error(format!("at most {MAX_CONTROLS} controls")));
        }
        GateSpec::new(self.controls, self.phi, self.axis, self.theta0, 1.0, self.omega_tau)
            .map_err(|e| config_error(e.to_string()))
    }

    /// Search problem at `tau` (pass `f64::INFINITY` for the adiabatic limit).
    pub fn problem(&self, tau: f64) -> Result<GroverProblem, LabError> {
        GroverProblem::new(self.n_items, self.marked, self.schedule.into(), tau)
            .map_err(|e| config_error(e.to_string()))
    }

    /// `grid_points` values spaced evenly in `log10` over `[grid_min, grid_max]`.
    pub fn log_grid(&self) -> Vec<f64> {
        let (a, b) = (self.grid_min.log10(), self.grid_max.log10());
        let k = self.grid_points - 1;
        (0..self.grid_points)
            .map(|i| {
                if i == k {
                    self.grid_max
                } else if i == 0 {
                    self.grid_min
                } else {
                    10f64.powf(a + (b - a) * i as f64 / k as f64)
                }
            })
            .collect()
    }

    /// Sizes `n_min, 2 n_min, ...` up to `n_max`.
    pub fn doubling_sizes(&self) -> Vec<usize> {
        std::iter::successors(Some(self.n_min), |&n| n.checked_mul(2)).take_while(|&n| n <= self.n_max).collect()
    }

    /// Checks the fields the current command uses.
    pub fn validate(&self) -> Result<(), LabError> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(config_error(format!("{name} must be positive and finite")))
            }
        };
        if self.threads == Some(0) {
            return Err(config_error("threads must be at least 1"));
        }
        match self.command {
            Command::GateCost | Command::ThetaOpt => positive("omega_tau", self.omega_tau)?,
            Command::Fig1 => {
                positive("grid_min", self.grid_min)?;
                positive("grid_max", self.grid_max)?;
                if self.grid_points < 2 || self.grid_min >= self.grid_max {
                    return Err(config_error("grid needs grid_min < grid_max and at least 2 points"));
                }
                if self.grid_min < 1e-4 || self.grid_max > 1e3 {
                    return Err(config_error("grid must lie within [1e-4, 1e3]"));
                }
            }
            Command::GroverSpectrum => {
                if self.points < 2 {
                    return Err(config_error("points must be at least 2"));
                }
            }
            Command::GroverCost | Command::Evolve => positive("tau", self.tau)?,
            Command::TimeToSolution => {
                if self.sizes.is_empty() {
                    return Err(config_error("sizes must not be empty"));
                }
                if !(self.target > 0.0 && self.target <= 1.0) {
                    return Err(config_error("target must lie in (0, 1]"));
                }
            }
            Command::Table1 => {
                if self.n_min < 2 || self.doubling_sizes().len() < 4 {
                    return Err(config_error("table1 needs n_min >= 2 and at least 4 doublings up to n_max"));
                }
                positive("tau", self.tau)?;
            }
        }
        let gate =
            self.command == Command::GateCost || (self.command == Command::Evolve && self.system == System::Gate);
        if gate {
            self.gate_spec()?;
        }
        let search = matches!(self.command, Command::GroverSpectrum | Command::GroverCost)
            || (self.command == Command::Evolve && self.system == System::Search);
        if search {
            self.problem(1.0)?;
        }
        if let Some(steps) = self.steps {
            if steps < sta_core::dynamics::MIN_STEPS {
                return Err(config_error(format!("steps must be at least {}", sta_core::dynamics::MIN_STEPS)));
            }
        }
        Ok(())
    }
}
