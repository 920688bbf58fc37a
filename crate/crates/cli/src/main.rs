use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use pseudopower_cli::commands::display;
use pseudopower_cli::{load_config, run_command, CliError, Command, Outcome};

/// Formal powers, transmutation kernels, verification and expansions for
/// bicomplex main Vekua equations.
#[derive(Debug, Parser)]
#[command(name = "pseudopower", version)]
struct Args {
    command: Command,
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Highest formal power degree; overrides `degrees.n_max`.
    #[arg(long)]
    n_max: Option<usize>,
    /// Seed for randomized checks; overrides `seed`.
    #[arg(long)]
    seed: Option<u64>,
}

fn run(args: &Args) -> Result<Outcome, CliError> {
    let mut cfg = load_config(&args.config)?;
    if let Some(dir) = &args.out {
        cfg.out_dir = dir.clone();
    }
    if let Some(n) = args.n_max {
        cfg.n_max = n;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    run_command(args.command, &cfg)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    match run(&args) {
        Ok(outcome) => {
            if !outcome.artifacts.is_empty() {
                println!("{}", display(&outcome.artifacts));
            }
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let record = serde_json::to_string(&e.record()).expect("plain record");
            eprintln!("{record}");
            ExitCode::from(2)
        }
    }
}
