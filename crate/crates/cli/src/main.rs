use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thz_relay_cli::{execute, load, Command, Overrides};

#[derive(Parser)]
#[command(name = "sim", version, about = "THz relay-selection Monte-Carlo simulator")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Simulate the scenario's single (lambda, sigma_s) point.
    Run(Opts),
    /// Simulate every combination of sweep.lambdas and sweep.sigmas.
    Sweep(Opts),
    /// Mean throughput versus lambda for sigma_s in {0, 0.05, 0.2}.
    Figure2(Opts),
    /// Throughput CDF at lambda in {0.3, 1.5} for sigma_s in {0, 0.05, 0.2}.
    Figure3(Opts),
    /// Parse and validate the scenario, then print it with defaults filled in.
    Validate(Opts),
}

#[derive(Args)]
struct Opts {
    /// Scenario TOML file.
    #[arg(long)]
    scenario: PathBuf,
    /// Output directory (overrides output.dir).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed (overrides scenario.master_seed).
    #[arg(long)]
    seed: Option<u64>,
    /// Drops per cell (overrides scenario.drops).
    #[arg(long)]
    drops: Option<u64>,
    /// Worker threads; defaults to all cores.
    #[arg(long, env = "SIM_THREADS")]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (command, opts) = match cli.command {
        Cmd::Run(o) => (Command::Run, o),
        Cmd::Sweep(o) => (Command::Sweep, o),
        Cmd::Figure2(o) => (Command::Figure2, o),
        Cmd::Figure3(o) => (Command::Figure3, o),
        Cmd::Validate(o) => (Command::Validate, o),
    };
    match real_main(command, opts) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn real_main(command: Command, opts: Opts) -> anyhow::Result<()> {
    if let Some(n) = opts.threads {
        if n == 0 {
            anyhow::bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let overrides = Overrides {
        seed: opts.seed,
        drops: opts.drops,
        out: opts.out,
    };
    let file = load(&opts.scenario, &overrides)?;
    if command == Command::Validate {
        print!("{}", file.to_toml());
        return Ok(());
    }
    execute(command, &file)?;
    Ok(())
}
