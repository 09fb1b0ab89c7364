use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rwkit::{run, thread_cap, CliError, CliResult, Command, ExperimentConfig};

#[derive(Parser)]
#[command(name = "rwkit", version, about = "Sparse-recovery input purification and robustness certificates")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Overrides `master_seed` from the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a synthetic K-sparse dataset.
    GenData(Common),
    /// Purify the configured input signal.
    Purify(Common),
    /// Sparsity defect of the configured input signal.
    Defect(Common),
    /// Certificates for each epsilon in the grid.
    Certify(Common),
    /// Report CSV over the epsilon grid.
    Eval(Common),
}

fn execute(command: Command, args: Common) -> CliResult<()> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap()? {
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::config("RWKIT_THREADS", e.to_string()))?;
    let bytes = pool.install(|| run(command, &cfg, args.out.as_deref()))?;
    match &args.out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| CliError::io(path, e)),
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| CliError::io(std::path::Path::new("<stdout>"), e)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::GenData(a) => (Command::GenData, a),
        Cmd::Purify(a) => (Command::Purify, a),
        Cmd::Defect(a) => (Command::Defect, a),
        Cmd::Certify(a) => (Command::Certify, a),
        Cmd::Eval(a) => (Command::Eval, a),
    };
    match execute(command, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rwkit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
