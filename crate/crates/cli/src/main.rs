use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use uptilt_cli::report::{run_avg_sinr, run_classify, run_montecarlo, run_optimize, run_outage};
use uptilt_cli::settings::{Overrides, Settings};
use uptilt_cli::sweep::run_sweep;
use uptilt_cli::CliError;

/// Coverage analysis and uptilt optimization for a drone corridor served by
/// two uptilted base stations.
#[derive(Parser)]
#[command(name = "uptilt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coverage regime and crossing heights at --alpha/--beta
    Classify(Common),
    /// Closed-form outage probability and its slope in the uptilt
    Outage(Common),
    /// Closed-form average SINR
    AvgSinr(Common),
    /// Monte Carlo outage and average SINR next to the closed forms
    Montecarlo(Common),
    /// Outage-minimizing uptilt for --beta/--h2
    Optimize(Common),
    /// CSV sweep over uptilt, beamwidths and ceilings
    Sweep(Common),
}

#[derive(Args)]
struct Common {
    /// key = value file; flags take precedence over it
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(flatten)]
    flags: Overrides,
}

impl Common {
    fn settings(&self) -> Result<Settings, CliError> {
        let file = match &self.config {
            Some(path) => Overrides::from_config_file(path)?,
            None => Overrides::default(),
        };
        Ok(Settings::resolve(self.flags.clone().or(file)))
    }
}

fn output(s: &Settings) -> Result<Box<dyn Write>, CliError> {
    Ok(match &s.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    let command = cli.command;
    let s = match &command {
        Command::Classify(c)
        | Command::Outage(c)
        | Command::AvgSinr(c)
        | Command::Montecarlo(c)
        | Command::Optimize(c)
        | Command::Sweep(c) => c.settings()?,
    };
    let report = match command {
        Command::Sweep(_) => {
            let (geom, radio) = (s.geometry()?, s.radio()?);
            let mut out = output(&s)?;
            run_sweep(&s.sweep_spec(), &geom, &radio, &mut out)?;
            return Ok(());
        }
        Command::Classify(_) => run_classify(&s)?,
        Command::Outage(_) => run_outage(&s)?,
        Command::AvgSinr(_) => run_avg_sinr(&s)?,
        Command::Montecarlo(_) => run_montecarlo(&s)?,
        Command::Optimize(_) => run_optimize(&s)?,
    };
    let mut out = output(&s)?;
    write!(out, "{report}")?;
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("uptilt: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
