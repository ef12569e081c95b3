//! `noonamp`: fringe scans, verification reports and figure tables for
//! amplified polarization NOON states.

mod config;
mod error;
mod figure;
mod output;
mod scan;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{worker_pool, Format, ScanArgs, ScanConfig, VerifyArgs, VerifyConfig};
use error::{CliError, Result};
use figure::FigureId;

#[derive(Debug, Parser)]
#[command(
    name = "noonamp",
    version,
    about = "Simulate parametric amplification of polarization NOON states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Correlation fringe G^(M)(θ) for every configured gain and order.
    Scan(ScanArgs),
    /// Compare simulation against the closed forms; exits 3 on any failure.
    Verify(VerifyArgs),
    /// Emit the theoretical curves of a figure as a table.
    Figure(FigureArgs),
}

#[derive(Debug, Args)]
struct FigureArgs {
    #[arg(value_enum)]
    id: FigureId,
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output file; written atomically. Standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Scan(args) => {
            let config = ScanConfig::resolve(&args)?;
            let pool = worker_pool(args.output.jobs)?;
            let table = scan::run(&config, &pool)?;
            output::emit(args.output.out.as_deref(), &table.render(config.format))
        }
        Command::Verify(args) => {
            let config = VerifyConfig::resolve(&args)?;
            let pool = worker_pool(args.output.jobs)?;
            let comparisons = verify::compare(&config, &pool)?;
            let table = verify::report(&config, &comparisons);
            output::emit(args.output.out.as_deref(), &table.render(config.format))?;
            let failed = comparisons.iter().filter(|c| !c.passed()).count();
            eprintln!(
                "verify: {} of {} comparisons passed",
                comparisons.len() - failed,
                comparisons.len()
            );
            if failed > 0 {
                return Err(CliError::VerificationFailed {
                    failed,
                    total: comparisons.len(),
                });
            }
            Ok(())
        }
        Command::Figure(args) => {
            let table = figure::run(args.id)?;
            output::emit(args.out.as_deref(), &table.render(args.format))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Help and version requests are not errors; usage errors are validation failures.
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("noonamp: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
