//! `hb-atlas`: classification maps of heavy-ball tunings.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hb_atlas::Tuning;

use commands::{Failure, Outcome};
use config::{CommonArgs, RunConfig};

#[derive(Parser)]
#[command(name = "hb-atlas", version, about = "Convergence and cycle maps of the heavy-ball method")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Worst-case rate on quadratics over the grid.
    RateMap {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Shortest dimension-one cycle per cell.
    CycleMap {
        #[command(flatten)]
        common: CommonArgs,
        /// Also write one certificate per cycle cell under certs/.
        #[arg(long)]
        certs: bool,
    },
    /// Lyapunov certificates per cell.
    LyapunovMap {
        #[command(flatten)]
        common: CommonArgs,
        /// Bisect for the best certified rate to this tolerance.
        #[arg(long)]
        rate_tol: Option<f64>,
        /// Randomized checks per certificate (seeded by --seed).
        #[arg(long, default_value_t = 0)]
        mc_samples: usize,
    },
    /// Lyapunov / cycle / unknown, for one tuning or the whole grid.
    Classify {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, requires = "beta", allow_negative_numbers = true)]
        gamma: Option<f64>,
        #[arg(long, requires = "gamma", allow_negative_numbers = true)]
        beta: Option<f64>,
        /// Include the unit-circle search in dimension two.
        #[arg(long)]
        dim2: bool,
    },
    /// Checks a cycle certificate file; exit code 0 iff it verifies.
    VerifyCycle {
        file: PathBuf,
    },
    /// One feasibility map per reduced sort permutation.
    PermutationAtlas {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long = "k", value_delimiter = ',', default_values_t = [4, 5])]
        ks: Vec<usize>,
    },
}

fn run_in_pool(common: &CommonArgs, name: &str, f: impl FnOnce(&RunConfig) -> Outcome + Send) -> Outcome {
    let cfg = RunConfig::resolve(name, common).map_err(Failure::Config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Failure::Runtime(e.to_string()))?;
    pool.install(|| f(&cfg))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::RateMap { common } => run_in_pool(&common, "rate-map", commands::rate_map_cmd),
        Command::CycleMap { common, certs } => run_in_pool(&common, "cycle-map", |c| commands::cycle_map_cmd(c, certs)),
        Command::LyapunovMap {
            common,
            rate_tol,
            mc_samples,
        } => {
            if let Some(tol) = rate_tol {
                if !(tol > 0.0) {
                    return Err(Failure::Config(format!("--rate-tol must be positive, got {tol}")));
                }
            }
            run_in_pool(&common, "lyapunov-map", |c| commands::lyapunov_map_cmd(c, rate_tol, mc_samples))
        }
        Command::Classify {
            common,
            gamma,
            beta,
            dim2,
        } => {
            let point = match (gamma, beta) {
                (Some(gamma), Some(beta)) => {
                    Some(Tuning::new(gamma, beta).map_err(|e| Failure::Config(e.to_string()))?)
                }
                _ => None,
            };
            run_in_pool(&common, "classify", |c| commands::classify_cmd(c, point, dim2))
        }
        Command::VerifyCycle { file } => commands::verify_cycle_cmd(&file),
        Command::PermutationAtlas { common, ks } => {
            if let Some(k) = ks.iter().find(|k| !(3..=hb_atlas::permutation::MAX_ENUMERATION_K).contains(k)) {
                return Err(Failure::Config(format!("--k must be in 3..=9, got {k}")));
            }
            run_in_pool(&common, "permutation-atlas", |c| commands::permutation_atlas_cmd(c, &ks))
        }
    }
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
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
