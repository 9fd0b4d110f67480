//! `zmx`: batch driver for scenario sweeps over the exact extrema and
//! branching laws, emitting machine-readable convergence tables.

mod config;
mod error;
mod experiments;
mod output;
mod workers;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use config::RunConfig;
use error::CliError;
use output::{render, suffixed_path, FileHeader};

/// Environment variable overriding the output directory.
const OUTPUT_DIR_ENV: &str = "ZMX_OUTPUT_DIR";

#[derive(Parser)]
#[command(
    name = "zmx",
    version,
    about = "Exact extrema of zero-modified geometric arrays and varying-environment branching processes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a run configuration and write its data files
    Run {
        /// Path to the TOML run configuration
        config: PathBuf,
        /// Override the Monte Carlo master seed from the config
        #[arg(long)]
        seed: Option<u64>,
        /// Directory output paths resolve against (also ZMX_OUTPUT_DIR)
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// Worker threads for Monte Carlo fan-out; output bytes do not
        /// depend on this
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Configuration utilities
    Config {
        #[command(subcommand)]
        action: ConfigAction,
    },
    /// Print the version and random-generator identity
    Version,
}

#[derive(Subcommand)]
enum ConfigAction {
    /// Parse a configuration and print its canonical form
    Echo { config: PathBuf },
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run {
            config,
            seed,
            output_dir,
            workers,
        } => run(&config, seed, output_dir, workers),
        Command::Config {
            action: ConfigAction::Echo { config },
        } => echo(&config),
        Command::Version => {
            println!(
                "zmx {} (rng {})",
                env!("CARGO_PKG_VERSION"),
                zmx_core::rng::RNG_ID
            );
            Ok(())
        }
    };
    match outcome {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    RunConfig::parse(&text)
}

fn echo(path: &Path) -> Result<(), CliError> {
    let cfg = load_config(path)?;
    print!("{}", cfg.canonical());
    Ok(())
}

fn run(
    path: &Path,
    seed_override: Option<u64>,
    output_dir: Option<PathBuf>,
    workers: usize,
) -> Result<(), CliError> {
    let mut cfg = load_config(path)?;
    if let Some(seed) = seed_override {
        cfg.mc.seed = seed;
    }
    cfg.validate()?;

    let config_sha = cfg.config_sha();
    let tables = experiments::run_experiment(&cfg, cfg.mc.seed, workers)?;

    let dir = output_dir
        .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let base = {
        let configured = PathBuf::from(&cfg.output);
        if configured.is_absolute() {
            configured
        } else {
            dir.join(configured)
        }
    };
    if let Some(parent) = base.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::io(format!("{}: {e}", parent.display())))?;
        }
    }

    for out in tables {
        let path = if out.suffix.is_empty() {
            base.clone()
        } else {
            suffixed_path(&base, out.suffix)
        };
        let mut header = FileHeader::new(&config_sha, cfg.mc.seed);
        for (k, v) in &out.extra_header {
            header = header.with(k, v.clone());
        }
        let text = render(&out.table, &header, cfg.format);
        std::fs::write(&path, text).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}
