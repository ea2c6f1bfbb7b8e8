use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qwalk::commands::{self, Options};
use qwalk::CliError;

/// Quantum walks on Z² with a tensor-square coin.
#[derive(Parser)]
#[command(name = "qwalk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory (overrides `output_dir`).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, value_name = "K")]
    threads: Option<usize>,
    /// Number of steps (overrides `n_max`).
    #[arg(long, global = true, value_name = "N")]
    nmax: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Evolve the walk; write distribution snapshots and the norm log.
    Simulate,
    /// Per-step entropies for n = 1..n_max.
    EntropySeries,
    /// Limit report: quadrature vs simulation, scaling fits, plot data.
    Limits,
    /// Classical random-walk entropy baseline (needs --nmax >= 1024).
    Baseline,
    /// Lattice update vs path-sum oracle on seeded cases with n <= 6.
    OracleCheck,
}

fn run(cli: &Cli) -> Result<Vec<String>, CliError> {
    let opts = Options {
        config: cli.config.clone(),
        out: cli.out.clone(),
        nmax: cli.nmax,
    };
    let go = || match cli.command {
        Command::Simulate => commands::cmd_simulate(&opts),
        Command::EntropySeries => commands::cmd_entropy_series(&opts),
        Command::Limits => commands::cmd_limits(&opts),
        Command::Baseline => commands::cmd_baseline(&opts),
        Command::OracleCheck => commands::cmd_oracle_check(&opts),
    };
    match cli.threads {
        Some(0) => Err(CliError::Config("--threads must be at least 1".into())),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| CliError::Resource(e.to_string()))?
            .install(go),
        None => go(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(lines) => {
            for l in lines {
                println!("{l}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qwalk: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
