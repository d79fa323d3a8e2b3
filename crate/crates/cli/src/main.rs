//! Command-line surface: computes spectra, modes, responses, FEM references,
//! comparisons, scans, and verification tables as plot-ready CSV/JSON.

mod commands;
mod config;
mod table;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{CliError, CommandOutcome, Tables};
use table::OutputFormat;

#[derive(Parser)]
#[command(
    name = "viscobar",
    about = "Spectral and finite-element analysis of a bar with viscous end dampers",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration (required for non-figure commands).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for result tables.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Override the series truncation from the config.
    #[arg(long, global = true)]
    k: Option<u32>,

    /// Override the FEM element count.
    #[arg(long, global = true)]
    elements: Option<usize>,

    /// Override the FEM time step.
    #[arg(long, global = true)]
    dt: Option<f64>,

    /// Override the FEM final time.
    #[arg(long, global = true)]
    t_final: Option<f64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Suppress progress output on stdout.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Complex eigenvalues (rigid mode plus the truncated branch).
    Spectrum,
    /// Direct mode shapes sampled on the spatial grid.
    Modes,
    /// Series response u(x, t) on the configured grids.
    Respond,
    /// FEM trajectory (Newmark average-acceleration march).
    Fem,
    /// FEM state-matrix eigenvalues.
    FemEigs,
    /// Series vs FEM displacement comparison.
    Compare,
    /// Largest state-matrix real part per mesh size.
    SpuriousScan,
    /// Named verification checks; nonzero exit on failure.
    Verify,
    /// Manufactured-solution error curves (preset).
    Fig2,
    /// Series-vs-FEM difference against truncation (preset).
    Fig5,
    /// FEM root locus next to exact eigenvalues (preset).
    Fig7,
    /// Spurious-eigenvalue scan of the unstable study (preset).
    Fig8,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Modes => "modes",
            Command::Respond => "respond",
            Command::Fem => "fem",
            Command::FemEigs => "fem-eigs",
            Command::Compare => "compare",
            Command::SpuriousScan => "spurious-scan",
            Command::Verify => "verify",
            Command::Fig2 => "fig2",
            Command::Fig5 => "fig5",
            Command::Fig7 => "fig7",
            Command::Fig8 => "fig8",
        }
    }

    fn is_figure(&self) -> bool {
        matches!(self, Command::Fig2 | Command::Fig5 | Command::Fig7 | Command::Fig8)
    }
}

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_INVALID_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(CliError::Config(msg)) => {
            eprintln!("error: invalid configuration: {msg}");
            ExitCode::from(EXIT_INVALID_CONFIG)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: numerical failure: {msg}");
            ExitCode::from(EXIT_NUMERICAL)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    let outcome = if cli.command.is_figure() {
        let tables: Tables = match cli.command {
            Command::Fig2 => commands::figures::fig2()?,
            Command::Fig5 => commands::figures::fig5(cli.elements.unwrap_or(40))?,
            Command::Fig7 => commands::figures::fig7()?,
            Command::Fig8 => commands::figures::fig8()?,
            _ => unreachable!(),
        };
        CommandOutcome::from(tables)
    } else {
        let path = cli.config.as_ref().ok_or_else(|| {
            CliError::Config(format!("command `{}` requires --config", cli.command.name()))
        })?;
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let config = config::parse_config(&text)?;
        commands::run_with_config(
            cli.command.name(),
            &config,
            cli.k.unwrap_or(config.k),
            cli.elements.unwrap_or(config.fem.elements),
            cli.dt.unwrap_or(config.fem.dt),
            cli.t_final.unwrap_or(config.fem.t_final),
        )?
    };

    write_tables(&cli.out, &outcome.tables, cli.format.into(), cli.quiet)?;

    if let Some(passed) = outcome.verify_passed {
        if !passed {
            if !cli.quiet {
                println!("verify: FAILED (see verify table)");
            }
            return Ok(ExitCode::from(EXIT_VERIFY_FAILED));
        }
        if !cli.quiet {
            println!("verify: all checks passed");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn write_tables(
    out_dir: &Path,
    tables: &Tables,
    format: OutputFormat,
    quiet: bool,
) -> Result<(), CliError> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", out_dir.display())))?;
    for (name, table) in tables {
        let path = out_dir.join(format!("{name}.{}", format.extension()));
        std::fs::write(&path, format.render(table))
            .map_err(|e| CliError::Numerical(format!("cannot write {}: {e}", path.display())))?;
        if !quiet {
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
