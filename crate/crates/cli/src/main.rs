mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser};

use commands::Command;
use config::{Format, ScenarioConfig};
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "contactwave", version, about = "Contact-interacting bosons in one dimension")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Debug, Args)]
struct Overrides {
    /// JSON scenario file; keys not given fall back to defaults
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    hbar: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    mass: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    c: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    k0: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    length: Option<f64>,
    #[arg(long, global = true)]
    n_points: Option<usize>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    k_prime: Option<f64>,
    #[arg(long, global = true)]
    symmetry_index: Option<u32>,
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    #[arg(long, global = true)]
    max_iterations: Option<usize>,
    #[arg(long, global = true)]
    relaxation: Option<f64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    particles: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

impl Overrides {
    fn apply(&self, cfg: &mut ScenarioConfig) {
        macro_rules! set {
            ($($field:ident => $target:expr),* $(,)?) => {
                $(if let Some(v) = self.$field { $target = v; })*
            };
        }
        set!(
            hbar => cfg.hbar,
            mass => cfg.mass,
            c => cfg.c,
            k0 => cfg.k0,
            length => cfg.length,
            n_points => cfg.n_points,
            symmetry_index => cfg.symmetry_index,
            tolerance => cfg.solver.tolerance,
            max_iterations => cfg.solver.max_iterations,
            relaxation => cfg.solver.relaxation,
            format => cfg.format,
            particles => cfg.nbody.particles,
            seed => cfg.nbody.seed,
        );
        if self.k_prime.is_some() {
            cfg.k_prime = self.k_prime;
        }
        if let Some(out) = &self.out {
            cfg.out_dir = Some(out.clone());
        }
    }
}

fn load_config(o: &Overrides) -> Result<ScenarioConfig, CliError> {
    let mut cfg = match &o.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            ScenarioConfig::from_json(&text)?
        }
        None => ScenarioConfig::default(),
    };
    o.apply(&mut cfg);
    cfg.validate()?;
    Ok(cfg)
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("CONTACTWAVE_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("CONTACTWAVE_THREADS must be a non-negative integer, got {raw:?}")))?;
    // 0 keeps rayon's default of one thread per core
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let cfg = load_config(&cli.overrides)?;
    configure_threads()?;
    let out_dir = cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from("out"));
    let start = Instant::now();
    let outcome = commands::run(cli.command, &cfg)?;
    let elapsed = start.elapsed().as_secs_f64();
    output::write_outputs(cli.command.name(), &cfg, &outcome, &out_dir, elapsed)?;
    if let Some(err) = outcome.error {
        return Err(CliError::Numerical(err));
    }
    let failing = outcome.failing_gates();
    if !failing.is_empty() {
        return Err(CliError::Gate(failing));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("contactwave: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
