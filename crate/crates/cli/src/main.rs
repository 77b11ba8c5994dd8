// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use darkcomb::{presets, run_scenario, CliError, RunConfig, Scenario};

#[derive(Debug, Parser)]
#[command(
    name = "darkcomb",
    version,
    about = "Double-dark-resonance spectra, sideband combs and dressed states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// `key = value` configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Worker threads for grid and quadrature maps (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Override the number of grid points (detuning or Doppler grid)
    #[arg(long, global = true)]
    grid_points: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Transmission spectrum and line metrics
    Spectrum,
    /// Sideband intensities after propagation
    Comb,
    /// Dressed eigenvalues against the Doppler shift
    Eigenvalues,
    /// Exact against perturbative dressed states over a range of RF strengths
    DressedCompare,
    /// Run a named preset, optionally overridden by --config
    Preset { name: String },
    /// Show the available presets
    ListPresets,
}

fn read_config(base: RunConfig, path: Option<&PathBuf>) -> Result<RunConfig, CliError> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
            base.apply(&text)
        }
        None => Ok(base),
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let scenario = match &cli.command {
        Command::ListPresets => {
            print!("{}", presets::table());
            return Ok(());
        }
        Command::Spectrum => Some(Scenario::Spectrum),
        Command::Comb => Some(Scenario::Comb),
        Command::Eigenvalues => Some(Scenario::Eigenvalues),
        Command::DressedCompare => Some(Scenario::DressedCompare),
        Command::Preset { .. } => None,
    };
    let base = match &cli.command {
        Command::Preset { name } => {
            presets::preset(name).ok_or_else(|| CliError::UnknownPreset(name.clone()))?
        }
        _ => RunConfig::default(),
    };
    let mut cfg = read_config(base, cli.config.as_ref())?;
    if let Some(s) = scenario {
        cfg.scenario = s;
    }
    if let Some(n) = cli.grid_points {
        match cfg.scenario {
            Scenario::Eigenvalues => cfg.scan_points = n,
            _ => cfg.grid_points = n,
        }
    }
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::InvalidValue {
                key: "threads".to_string(),
                line: 0,
                reason: "must be >= 1".to_string(),
            });
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            log::warn!("could not size the thread pool: {e}");
        }
    }
    let start = std::time::Instant::now();
    let files = run_scenario(&cfg, &cli.out)?;
    for f in &files {
        println!("wrote {}", f.display());
    }
    log::info!(
        "{} finished in {:.1?}",
        cfg.scenario.name(),
        start.elapsed()
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
