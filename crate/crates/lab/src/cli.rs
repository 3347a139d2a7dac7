//! Argument parsing. Every flag is optional so that unset flags fall through
//! to the config file and then to the defaults.

use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand};

use crate::config::{Command, Method, Model, Norm, RunConfig, Schedule, System};
use crate::LabError;

#[derive(Debug, Parser)]
#[command(name = "sta", version, about = "Energetic cost of superadiabatic quantum gates and search")]
pub struct Cli {
    /// JSON config file; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Directory for CSV, SVG and JSON outputs.
    #[arg(long, global = true, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Energetic cost of one controlled gate.
    GateCost {
        #[command(flatten)]
        gate: GateArgs,
        #[command(flatten)]
        cost: CostArgs,
        #[arg(long, action = ArgAction::Set, value_name = "BOOL")]
        counter_diabatic: Option<bool>,
    },
    /// Angle minimizing the average cost of a probabilistic gate.
    ThetaOpt {
        #[arg(long)]
        omega_tau: Option<f64>,
    },
    /// Optimal angle and relative cost over a log grid of omega*tau.
    Fig1 {
        #[arg(long)]
        grid_min: Option<f64>,
        #[arg(long)]
        grid_max: Option<f64>,
        #[arg(long)]
        grid_points: Option<usize>,
    },
    /// Closed-form search spectrum over s.
    GroverSpectrum {
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        points: Option<usize>,
    },
    /// Energetic cost of one search instance.
    GroverCost {
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        time: TimeArgs,
        #[command(flatten)]
        cost: CostArgs,
    },
    /// Propagate a gate or a search and report fidelities.
    Evolve {
        #[arg(long, value_enum)]
        system: Option<System>,
        #[command(flatten)]
        gate: GateArgs,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        time: TimeArgs,
        #[arg(long)]
        steps: Option<usize>,
        /// Register input: random, plus or basis:K.
        #[arg(long)]
        input: Option<String>,
        #[arg(long)]
        max_trials: Option<usize>,
    },
    /// Shortest evolution time reaching a target success probability.
    TimeToSolution {
        #[arg(long, value_enum)]
        model: Option<Model>,
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long)]
        target: Option<f64>,
    },
    /// Cost exponents of the four search variants.
    Table1 {
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        tau: Option<f64>,
        /// Also fit time-to-solution exponents over --sizes.
        #[arg(long, action = ArgAction::Set, value_name = "BOOL")]
        with_time: Option<bool>,
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
    },
}

#[derive(Debug, Args)]
pub struct GateArgs {
    /// Number of control qubits.
    #[arg(long = "n", visible_alias = "controls")]
    pub controls: Option<u32>,
    #[arg(long)]
    pub phi: Option<f64>,
    /// Rotation axis as x,y,z.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    pub axis: Option<Vec<f64>>,
    #[arg(long)]
    pub theta0: Option<f64>,
    #[arg(long)]
    pub omega_tau: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub n_items: Option<usize>,
    #[arg(long)]
    pub marked: Option<usize>,
    #[arg(long, value_enum)]
    pub schedule: Option<Schedule>,
}

#[derive(Debug, Args)]
pub struct TimeArgs {
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long, action = ArgAction::Set, value_name = "BOOL")]
    pub counter_diabatic: Option<bool>,
}

#[derive(Debug, Args)]
pub struct CostArgs {
    #[arg(long, value_enum)]
    pub norm: Option<Norm>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

impl GateArgs {
    fn apply(self, cfg: &mut RunConfig) -> Result<(), LabError> {
        set(&mut cfg.controls, self.controls);
        set(&mut cfg.phi, self.phi);
        set(&mut cfg.theta0, self.theta0);
        set(&mut cfg.omega_tau, self.omega_tau);
        if let Some(a) = self.axis {
            cfg.axis = a.try_into().map_err(|_| LabError::Config("--axis needs three components x,y,z".into()))?;
        }
        Ok(())
    }
}

impl SearchArgs {
    fn apply(self, cfg: &mut RunConfig) {
        set(&mut cfg.n_items, self.n_items);
        set(&mut cfg.marked, self.marked);
        set(&mut cfg.schedule, self.schedule);
    }
}

impl TimeArgs {
    fn apply(self, cfg: &mut RunConfig) {
        set(&mut cfg.tau, self.tau);
        set(&mut cfg.counter_diabatic, self.counter_diabatic);
    }
}

impl CostArgs {
    fn apply(self, cfg: &mut RunConfig) {
        set(&mut cfg.norm, self.norm);
        set(&mut cfg.method, self.method);
    }
}

impl Cli {
    /// Resolves flags over `base` (defaults already overlaid with the config
    /// file).
    pub fn apply(self, mut cfg: RunConfig) -> Result<RunConfig, LabError> {
        set(&mut cfg.seed, self.seed);
        if self.threads.is_some() {
            cfg.threads = self.threads;
        }
        if self.out_dir.is_some() {
            cfg.out_dir = self.out_dir;
        }
        match self.command {
            Cmd::GateCost { gate, cost, counter_diabatic } => {
                cfg.command = Command::GateCost;
                gate.apply(&mut cfg)?;
                cost.apply(&mut cfg);
                set(&mut cfg.counter_diabatic, counter_diabatic);
            }
            Cmd::ThetaOpt { omega_tau } => {
                cfg.command = Command::ThetaOpt;
                set(&mut cfg.omega_tau, omega_tau);
            }
            Cmd::Fig1 { grid_min, grid_max, grid_points } => {
                cfg.command = Command::Fig1;
                set(&mut cfg.grid_min, grid_min);
                set(&mut cfg.grid_max, grid_max);
                set(&mut cfg.grid_points, grid_points);
            }
            Cmd::GroverSpectrum { search, points } => {
                cfg.command = Command::GroverSpectrum;
                search.apply(&mut cfg);
                set(&mut cfg.points, points);
            }
            Cmd::GroverCost { search, time, cost } => {
                cfg.command = Command::GroverCost;
                search.apply(&mut cfg);
                time.apply(&mut cfg);
                cost.apply(&mut cfg);
            }
            Cmd::Evolve { system, gate, search, time, steps, input, max_trials } => {
                cfg.command = Command::Evolve;
                set(&mut cfg.system, system);
                gate.apply(&mut cfg)?;
                search.apply(&mut cfg);
                time.apply(&mut cfg);
                if steps.is_some() {
                    cfg.steps = steps;
                }
                set(&mut cfg.input, input);
                set(&mut cfg.max_trials, max_trials);
            }
            Cmd::TimeToSolution { model, sizes, target } => {
                cfg.command = Command::TimeToSolution;
                set(&mut cfg.model, model);
                set(&mut cfg.sizes, sizes);
                set(&mut cfg.target, target);
            }
            Cmd::Table1 { n_min, n_max, tau, with_time, sizes } => {
                cfg.command = Command::Table1;
                set(&mut cfg.n_min, n_min);
                set(&mut cfg.n_max, n_max);
                set(&mut cfg.tau, tau);
                set(&mut cfg.with_time, with_time);
                set(&mut cfg.sizes, sizes);
            }
        }
        Ok(cfg)
    }
}
