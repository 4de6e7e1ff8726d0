use std::path::{Path, PathBuf};
use std::process::ExitCode;

use blochosc_cli::algebra_check::{evaluate, render, standard_identities};
use blochosc_cli::config::{load, Overrides};
use blochosc_cli::report::{compare, render_text, write_csvs, write_reports};
use blochosc_cli::runner::run_all;
use blochosc_cli::verify::run_verify;
use blochosc_cli::{CliError, CliResult};
use clap::{Parser, Subcommand};

/// Spin-1/2 density operators from the oscillator connection.
///
/// Exit codes: 0 success, 1 internal error or failed check,
/// 2 degenerate field (B+ = 0), 3 configuration error.
#[derive(Debug, Parser)]
#[command(name = "blochosc", version)]
struct Cli {
    /// Scenario file (TOML)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Override the time step of every scenario
    #[arg(long, global = true, allow_negative_numbers = true)]
    dt: Option<f64>,

    /// Override the end time of every scenario
    #[arg(long = "t-end", global = true, allow_negative_numbers = true)]
    t_end: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate every scenario and write one CSV per method
    Simulate,
    /// Cross-check the methods of every scenario and write reports
    Compare,
    /// Run the comparison suite on built-in scenarios
    Verify,
    /// Check the exact algebraic identities
    AlgebraCheck,
}

fn scenarios(cli: &Cli) -> CliResult<Vec<blochosc_cli::config::ScenarioConfig>> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| CliError::Config("--config PATH is required for this command".into()))?;
    load(path, &Overrides { dt: cli.dt, t_end: cli.t_end })
}

fn simulate(cli: &Cli) -> CliResult<()> {
    let configs = scenarios(cli)?;
    for run in run_all(&configs) {
        let run = run?;
        for path in write_csvs(&run, &cli.out)? {
            println!("{}: wrote {}", run.name(), path.display());
        }
    }
    Ok(())
}

fn finish_reports(mut reports: Vec<blochosc_cli::report::ComparisonReport>, out: &Path) -> CliResult<bool> {
    let (txt, json) = write_reports(&mut reports, out)?;
    print!("{}", render_text(&reports));
    println!("reports: {}, {}", txt.display(), json.display());
    Ok(reports.iter().all(|r| r.pass))
}

fn run(cli: &Cli) -> CliResult<bool> {
    match cli.command {
        Command::Simulate => simulate(cli).map(|_| true),
        Command::Compare => {
            let configs = scenarios(cli)?;
            let mut reports = Vec::new();
            for run in run_all(&configs) {
                reports.push(compare(&run?)?);
            }
            // comparison failures are reported, not treated as errors
            finish_reports(reports, &cli.out).map(|_| true)
        }
        Command::Verify => finish_reports(run_verify()?, &cli.out),
        Command::AlgebraCheck => {
            let outcomes = evaluate(&standard_identities());
            print!("{}", render(&outcomes));
            Ok(outcomes.iter().all(|o| o.pass))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits 2 on usage errors, which is reserved for degenerate fields here
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
