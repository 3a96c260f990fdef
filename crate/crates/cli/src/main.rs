mod build;
mod curve;
mod error;
mod files;
mod grid;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::error::{CliError, Result};

/// Noncommutative integration functionals on finite models.
#[derive(Debug, Parser)]
#[command(name = "ncint", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build an operator and write it as JSON.
    Build(build::BuildArgs),
    /// Evaluate a functional curve and write it as CSV.
    Curve(curve::CurveArgs),
    /// Run a verification suite.
    Verify(verify::VerifyArgs),
    /// Summarize a verification report.
    Report(verify::ReportArgs),
}

/// Caps the rayon pool at `NCI_THREADS` when set.
fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("NCI_THREADS") else {
        return Ok(());
    };
    let n: usize =
        raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            CliError::Usage(format!("NCI_THREADS={raw:?} is not a positive integer"))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Numeric(e.to_string()))
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Build(args) => {
            let file = build::run(&args)?;
            eprintln!("wrote {} ({}x{})", args.out.display(), file.n, file.n);
        }
        Command::Curve(args) => {
            let (xs, _) = curve::run(&args)?;
            eprintln!("wrote {} ({} rows)", args.out.display(), xs.len());
        }
        Command::Verify(args) => {
            let report = verify::run(&args)?;
            let failed = report.checks.iter().filter(|c| !c.passed()).count();
            if failed > 0 {
                return Err(CliError::ChecksFailed(failed));
            }
        }
        Command::Report(args) => {
            verify::report(&args)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
