use anisofilter::commands::{self, Command, Figure};
use anisofilter::config::ExperimentConfig;
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "anisofilter", version, about = "Anisotropic Gabor singularity experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Experiment configuration (JSON). Defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `output_dir` from the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; recorded in the resolved config.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for sampled start points; overrides `seed` from the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// STFT of the configured signal.
    Stft,
    /// Decay map, filter memberships and singular directions.
    Decay,
    /// Hamiltonian trajectories from the configured start points.
    Flow,
    /// Regions transported by the hamiltonian flow.
    Transport,
    /// Spectral evolution of the configured signal.
    Evolve,
    /// Filter propagation check between time 0 and the last configured time.
    Verify,
    /// Figure rasters with baked-in parameters.
    Figure {
        #[arg(value_enum)]
        name: Figure,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p),
        None => Ok(ExperimentConfig::default()),
    };
    let mut cfg = match cfg {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    let out = cli.out.clone().unwrap_or_else(|| cfg.output_dir.clone());
    let cmd = match cli.cmd {
        Cmd::Stft => Command::Stft,
        Cmd::Decay => Command::Decay,
        Cmd::Flow => Command::Flow,
        Cmd::Transport => Command::Transport,
        Cmd::Evolve => Command::Evolve,
        Cmd::Verify => Command::Verify,
        Cmd::Figure { name } => Command::Figure(name),
    };
    match commands::run(cmd, cfg, &out) {
        Ok(rep) => {
            for c in &rep.checks {
                println!("{} {} value={:.6e} limit={:.3e}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.value, c.limit);
            }
            println!("{} {}: {} files in {}", cmd.name(), if rep.pass { "passed" } else { "failed" }, rep.files.len(), out.display());
            ExitCode::from(if rep.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {} failed: {e}", cmd.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
