use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spintree_cli::{
    cmd_evolve, cmd_generate, run_checks, CliError, ExperimentConfig, VerifyOptions,
};

#[derive(Parser)]
#[command(
    name = "spintree",
    version,
    about = "Single-excitation dynamics on branched spin chains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON experiment config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the network description (nodes, edges, couplings, leaf weights) as JSON.
    Generate,
    /// Run the configured schedule and write a CSV time series.
    Evolve,
    /// Run the built-in verification suite.
    Verify {
        /// Debug hook: relative change applied to one coupling of each mirror-transfer chain.
        #[arg(long, hide = true, default_value_t = 0.0)]
        perturb_coupling: f64,
    },
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::input("--config", "required for this subcommand"))?;
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))?;
    let mut config = ExperimentConfig::from_json(&text)?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::io(path.display().to_string(), e))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate => emit(cli, &cmd_generate(&load_config(cli)?)?),
        Command::Evolve => emit(cli, &cmd_evolve(&load_config(cli)?)?),
        Command::Verify { perturb_coupling } => {
            let summary = run_checks(VerifyOptions {
                coupling_perturbation: perturb_coupling,
            });
            for check in &summary.checks {
                println!("{}", check.line());
            }
            let mut json = serde_json::to_string_pretty(&summary).expect("summary serializes");
            json.push('\n');
            emit(cli, &json)?;
            if summary.failed > 0 {
                return Err(CliError::Verification(summary.failed));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
