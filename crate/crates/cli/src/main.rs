//! `avgdiff`: run the conservative schemes, tabulate phase speeds, or
//! self-check the discretization.

mod config;
mod phase;
mod run;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{RunArgs, RunConfig, OUTPUT_DIR_ENV};
use run::RunFailure;

#[derive(Debug, Parser)]
#[command(name = "avgdiff", version, about = "Energy-conserving schemes for u_tx = dG/du on a periodic grid")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate from an initial condition and write snapshots, energy and error.
    Run(RunArgs),
    /// Tabulate phase speeds of the semi-discretizations of u_tx = u.
    PhaseSpeeds {
        /// Number of grid points (odd).
        #[arg(long = "K", alias = "k", default_value_t = 65)]
        points: usize,
        #[arg(long, default_value_t = 32)]
        n_max: i64,
        #[arg(long)]
        output_dir: Option<PathBuf>,
        #[arg(long)]
        gnuplot: bool,
    },
    /// Check the conservation identities on random data.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, hide = true)]
        corrupt_ad_right_operator: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::PhaseSpeeds { points, n_max, output_dir, gnuplot } => {
            let dir = output_dir
                .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("out"));
            match phase::cmd_phase_speeds(points, n_max, &dir, gnuplot) {
                Ok(_) => {
                    println!("wrote {}", dir.join("phase_speeds.csv").display());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e:#}");
                    ExitCode::from(1)
                }
            }
        }
        Command::Verify { seed, corrupt_ad_right_operator } => {
            let verdicts =
                verify::cmd_verify(verify::VerifyOptions { seed, corrupt_average_diff: corrupt_ad_right_operator });
            for v in &verdicts {
                println!("{} {}: {}", if v.pass { "PASS" } else { "FAIL" }, v.name, v.detail);
            }
            if verdicts.iter().all(|v| v.pass) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
    }
}

fn cmd_run(args: RunArgs) -> ExitCode {
    let cfg = match RunConfig::resolve(args).and_then(|cfg| run::check_output_dir(&cfg.output_dir).map(|_| cfg)) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    eprintln!("{}", cfg.describe());
    match run::cmd_run(&cfg) {
        Ok(summary) => {
            println!("{}", run::summary_line(&cfg, &summary));
            ExitCode::SUCCESS
        }
        Err(RunFailure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(RunFailure::Solver { step, source }) => {
            eprintln!("error: solver failed at step {step}: {source}");
            ExitCode::from(2)
        }
    }
}
