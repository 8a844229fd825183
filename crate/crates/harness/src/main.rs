use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use cmoea::algorithms::AlgorithmKind;
use cmoea::cht::ChtMode;
use cmoea_harness::config::default_out_dir;
use cmoea_harness::{
    emit_scatter, emit_tables, generate_fronts, run_experiment, ExperimentConfig, RunOptions,
    ScatterRequest,
};

#[derive(Parser)]
#[command(
    name = "cmoea",
    version,
    about = "Compare true and crisp constraint violation across constrained MOEAs"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment config (TOML); the built-in full grid when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for results, fronts, tables and scatter files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Seed of the first repetition; repetition i uses seed base + i.
    #[arg(long, global = true)]
    seed_base: Option<u64>,
    /// Desk preset: M in {2, 3} and 11 repetitions.
    #[arg(long, global = true)]
    desk: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run every missing cell of the matrix and write results.csv.
    Run {
        /// Record measured wall time (makes results.csv differ between runs).
        #[arg(long)]
        wall_time: bool,
        /// Print progress to stderr.
        #[arg(long)]
        progress: bool,
    },
    /// Write comparison tables from results.csv.
    Tables,
    /// Re-run one cell and write its point cloud.
    Scatter {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        algorithm: AlgorithmKind,
        #[arg(long, default_value = "true")]
        mode: ChtMode,
        /// Seed to run; defaults to the run with the median IGD in the store.
        #[arg(long)]
        seed: Option<u64>,
        /// Only the final population instead of every evaluation.
        #[arg(long)]
        no_trace: bool,
    },
    /// Generate the reference fronts of the configured problems.
    Fronts,
}

fn load(common: &Common) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(common.config.as_deref())?;
    if common.desk {
        cfg = cfg.desk();
    }
    if let Some(b) = common.seed_base {
        cfg = cfg.with_seed_base(b);
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    let cfg = load(&cli.common)?;
    let out = cli.common.out.clone().unwrap_or_else(default_out_dir);
    match cli.command {
        Command::Run {
            wall_time,
            progress,
        } => {
            let opts = RunOptions {
                out,
                jobs: cli.common.jobs,
                record_wall_time: wall_time,
                quiet: !progress,
            };
            let s = run_experiment(&cfg, &opts)?;
            println!(
                "{} runs executed, {} already present, {} failed; results in {}",
                s.executed,
                s.skipped,
                s.failed_runs,
                s.results.display()
            );
        }
        Command::Tables => {
            let t = emit_tables(&cfg, &out)?;
            for f in &t.files {
                println!("{}", f.display());
            }
        }
        Command::Scatter {
            problem,
            m,
            algorithm,
            mode,
            seed,
            no_trace,
        } => {
            let req = ScatterRequest {
                problem,
                m,
                algorithm,
                mode,
                seed,
                trace: !no_trace,
            };
            println!("{}", emit_scatter(&cfg, &out, &req)?.display());
        }
        Command::Fronts => {
            for p in generate_fronts(&cfg, &out)? {
                println!("{}", p.display());
            }
        }
    }
    Ok(())
}
