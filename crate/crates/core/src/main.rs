use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ris_capacity::experiment::{
    cmd_optimize, cmd_sweep_res, cmd_sweep_snr, cmd_validate, csv, ExperimentConfig, ResMode, ValidateOptions,
};
use ris_capacity::Error;

#[derive(Parser)]
#[command(name = "ris-capacity", version, about = "Ergodic capacity experiments for RIS-aided MIMO links")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Flat `key = value` config file; defaults are used when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo trials per point.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Capacity, bounds and high-SNR asymptote over the SNR grid.
    SweepSnr,
    /// Capacity versus the number of RIS elements.
    SweepRes {
        #[arg(long, value_enum, default_value = "a")]
        mode: Mode,
    },
    /// Run the self-check suites.
    Validate {
        #[arg(long, hide = true)]
        inject_j_bug: bool,
    },
    /// Optimize the RIS phases with the genetic algorithm.
    Optimize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    A,
    B,
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = cli.trials {
        cfg.mc_trials = trials;
    }
    if let Some(out) = &cli.out {
        cfg.output_path = Some(out.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn phases_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".phases");
    PathBuf::from(name)
}

fn run(cli: &Cli) -> Result<bool, Error> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::Config("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    let cfg = load_config(cli)?;
    let out = cfg.output_path.as_deref();
    match &cli.command {
        Command::SweepSnr => csv::emit(out, &cmd_sweep_snr(&cfg)?)?,
        Command::SweepRes { mode } => {
            let mode = match mode {
                Mode::A => ResMode::A,
                Mode::B => ResMode::B,
            };
            csv::emit(out, &cmd_sweep_res(&cfg, mode)?)?;
        }
        Command::Validate { inject_j_bug } => {
            let report = cmd_validate(&cfg, &ValidateOptions { inject_j_bug: *inject_j_bug })?;
            csv::emit(out, &report.render())?;
            return Ok(report.passed());
        }
        Command::Optimize => {
            let (trace, phases) = cmd_optimize(&cfg)?;
            match out {
                Some(path) => {
                    csv::emit(Some(path), &trace)?;
                    csv::emit(Some(&phases_path(path)), &phases)?;
                }
                None => {
                    csv::emit(None, &trace)?;
                    let commented: String = phases.lines().map(|l| format!("# phase {l}\n")).collect();
                    csv::emit(None, &commented)?;
                }
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { 2 } else { 1 })
        }
    }
}
