// SPDX-License-Identifier: Apache-2.0

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use polariton_w::harness::{self, Format, Mode, RunConfig, SweepRow};
use polariton_w::Error;

#[derive(Parser)]
#[command(
    name = "polariton-w",
    version,
    about = "Four-pump polariton W-state entanglement runs and sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the configured point.
    Run(Args),
    /// Entanglement weight over the (delta, n_b) grid.
    SweepFig2(Args),
    /// Entanglement weight over pump intensity and temperature (pulsed).
    SweepFig3(Args),
}

#[derive(clap::Args)]
struct Args {
    /// JSON configuration; the sweep verbs fall back to built-in defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Suppress progress messages on stderr.
    #[arg(long)]
    quiet: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Analytic,
    Numeric,
}

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

fn load(args: &Args, fallback: Option<fn() -> RunConfig>) -> Result<RunConfig, Error> {
    let mut config = match (&args.config, fallback) {
        (Some(path), _) => RunConfig::load(path)?,
        (None, Some(default)) => default(),
        (None, None) => return Err(Error::Config("`run` needs --config <path>".into())),
    };
    if let Some(mode) = args.mode {
        config.mode = match mode {
            ModeArg::Analytic => Mode::Analytic,
            ModeArg::Numeric => Mode::Numeric,
        };
    }
    if let Some(format) = args.format {
        config.output.format = match format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        };
    }
    if let Some(path) = &args.output {
        config.output.path = Some(path.clone());
    }
    config.validate()?;
    Ok(config)
}

fn write_out(config: &RunConfig, rows: &[SweepRow]) -> Result<(), Error> {
    match &config.output.path {
        Some(path) => harness::emit(rows, config.output.format, path),
        None => {
            let bytes = harness::render(rows, config.output.format)?;
            std::io::stdout()
                .lock()
                .write_all(&bytes)
                .map_err(|source| Error::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn execute(command: &Command) -> Result<(), Error> {
    let (args, verb) = match command {
        Command::Run(a) => (a, "run"),
        Command::SweepFig2(a) => (a, "sweep-fig2"),
        Command::SweepFig3(a) => (a, "sweep-fig3"),
    };
    let start = Instant::now();
    let (config, rows) = match command {
        Command::Run(_) => {
            let config = load(args, None)?;
            let result = harness::run_single(&config)?;
            (config, vec![result.row])
        }
        Command::SweepFig2(_) => {
            let config = load(args, Some(harness::fig2_default_config))?;
            let result = harness::sweep_fig2(&config)?;
            (config, result.rows)
        }
        Command::SweepFig3(_) => {
            let config = load(args, Some(harness::fig3_default_config))?;
            let result = harness::sweep_fig3(&config)?;
            (config, result.rows)
        }
    };
    write_out(&config, &rows)?;
    if !args.quiet {
        eprintln!(
            "{verb}: {} row(s) in {:.1} ms",
            rows.len(),
            start.elapsed().as_secs_f64() * 1e3
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                _ if e.is_config_error() => EXIT_CONFIG,
                Error::Io { .. } => 1,
                _ => EXIT_NUMERIC,
            };
            ExitCode::from(code)
        }
    }
}
