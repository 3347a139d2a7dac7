//! Command-line front end for `sta-core`.
//!
//! Parses flags and JSON config files, runs one subcommand, prints a JSON
//! report on stdout and writes CSV/SVG/JSON artifacts atomically.
//! Exit codes: 0 on success, 1 on configuration or output errors, 2 on
//! numerical failure.

pub mod cli;
pub mod commands;
pub mod config;
mod error;
pub mod report;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

pub use error::LabError;

use crate::cli::Cli;
use crate::config::{RunConfig, SEED_ENV};

/// Parses `args` (including the program name) and runs the command, reading
/// `STA_SEED` from the environment.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env_seed = std::env::var(SEED_ENV).ok();
    run_with(args, env_seed.as_deref(), &mut std::io::stdout(), &mut std::io::stderr())
}

/// Same as [`run`] with explicit environment and streams.
pub fn run_with<I, T>(args: I, env_seed: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    1
                }
            };
        }
    };
    match resolve(cli, env_seed).and_then(|cfg| commands::execute(&cfg)) {
        Ok(doc) => {
            let _ = stdout.write_all(&report::json_bytes(&doc));
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn resolve(cli: Cli, env_seed: Option<&str>) -> Result<RunConfig, LabError> {
    let base = RunConfig::load(cli.config.as_deref(), env_seed)?;
    cli.apply(base)
}
