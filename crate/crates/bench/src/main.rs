use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use saddle_bench::run::{cmd_solve, cmd_validate};
use saddle_bench::scaling::{cmd_scaling, SweepParam};
use saddle_bench::Result;

/// Inexact-oracle solver for min-max problems with a uniformly convex inner part.
///
/// Exit status: 0 on success, 2 when the solver does not converge, fails, or a
/// validation check fails, 1 on configuration or I/O errors.
#[derive(Parser)]
#[command(name = "saddle-bench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the configured problem and write report.json and trace.csv.
    Solve { config: PathBuf },
    /// Check the declared smoothness and convexity constants on samples.
    Validate { config: PathBuf },
    /// Sweep one accuracy parameter and fit its scaling law.
    Scaling {
        config: PathBuf,
        /// `epsilon` (outer solves) or `target-gap` (inner solves).
        #[arg(long)]
        sweep: SweepParam,
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<f64>,
    },
}

fn execute(command: Command) -> Result<u8> {
    match command {
        Command::Solve { config } => {
            let out = cmd_solve(&config)?;
            let r = &out.report;
            println!(
                "{} after {} outer iterations: stationarity {:e}, g + r = {:e}",
                if r.converged {
                    "converged"
                } else {
                    "NOT converged"
                },
                r.totals.outer_iterations,
                r.final_stationarity,
                r.g_value + r.composite_value,
            );
            println!(
                "first-order calls {}, inner iterations {}, wall time {:.3}s",
                r.totals.first_order_calls, r.totals.inner_iterations, r.totals.wall_time_seconds
            );
            println!("artifacts in {}", out.run_dir.display());
            Ok(if r.converged { 0 } else { 2 })
        }
        Command::Validate { config } => {
            let report = cmd_validate(&config)?;
            print!("{report}");
            Ok(if report.passed() { 0 } else { 2 })
        }
        Command::Scaling {
            config,
            sweep,
            grid,
        } => {
            let s = cmd_scaling(&config, sweep, &grid)?;
            for run in &s.runs {
                match &run.error {
                    Some(e) => println!("{:>12e}  failed: {e}", run.value),
                    None => println!(
                        "{:>12e}  count {:>6}  converged {}",
                        run.value, run.count, run.succeeded
                    ),
                }
            }
            println!(
                "slope {:.4}  intercept {:.4}  R^2 {:.4}",
                s.fit.slope, s.fit.intercept, s.fit.r_squared
            );
            println!("summary in {}", s.output.display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
