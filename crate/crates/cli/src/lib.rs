//! `swanson` command-line front end.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use swanson_core::Side;

pub use config::{Format, Mode, Overrides, RunConfig};
pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "swanson", version, about = "Generalized Swanson hierarchy: parameters, spectra, wavefunctions and identity checks")]
pub struct Cli {
    #[command(flatten)]
    pub overrides: Overrides,
    /// Sweep worker count; defaults to SWANSON_WORKERS, then the core count
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Plus,
    Minus,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Plus => Side::Plus,
            SideArg::Minus => Side::Minus,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for the factorization parameters
    Solve,
    /// Analytic and finite-difference levels of both partners
    Spectrum,
    /// Sample eigenfunctions on a z grid
    Wavefunctions {
        #[arg(long, value_enum, default_value = "plus")]
        side: SideArg,
        /// Comma-separated levels
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        n_list: Vec<usize>,
        /// `a,b,c` or `start:stop:count`
        #[arg(long, default_value = "0.1:4:40", allow_hyphen_values = true)]
        z_grid: String,
    },
    /// Residual report for every identity
    Verify,
    /// Spectra and identity residuals across one parameter
    Sweep {
        #[arg(long, value_enum)]
        param: commands::SweepParam,
        /// START,STOP
        #[arg(long)]
        range: String,
        #[arg(long)]
        steps: usize,
    },
}

fn workers(flag: Option<usize>) -> CliResult<Option<usize>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("SWANSON_WORKERS") {
        Ok(v) => v.trim().parse().map(Some).map_err(|e| CliError::Config(format!("SWANSON_WORKERS={v}: {e}"))),
        Err(_) => Ok(None),
    }
}

/// Runs one invocation and returns the rendered output.
pub fn execute(cli: &Cli) -> CliResult<(RunConfig, commands::CommandOutput)> {
    let cfg = RunConfig::load(&cli.overrides)?;
    let out = match &cli.command {
        Command::Solve => commands::solve(&cfg)?,
        Command::Spectrum => commands::spectrum(&cfg)?,
        Command::Wavefunctions { side, n_list, z_grid } => {
            commands::wavefunctions(&cfg, (*side).into(), n_list, &commands::parse_grid(z_grid)?)?
        }
        Command::Verify => commands::verify(&cfg)?,
        Command::Sweep { param, range, steps } => {
            commands::sweep(&cfg, *param, commands::parse_range(range)?, *steps, workers(cli.workers)?)?
        }
    };
    Ok((cfg, out))
}

/// Writes the output to `--out` or stdout and returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = execute(cli).and_then(|(cfg, out)| {
        match &cfg.out {
            Some(p) => std::fs::write(p, &out.body)?,
            None => std::io::stdout().write_all(out.body.as_bytes())?,
        }
        for w in &out.warnings {
            eprintln!("warning: {w}");
        }
        out.failure.map_or(Ok(()), Err)
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
