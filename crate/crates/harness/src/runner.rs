//! Executes the run matrix: every (problem, M, algorithm, mode, seed) cell.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use anyhow::{Context, Result};
use rayon::prelude::*;

use cmoea::algorithms::{run, AlgorithmConfig, AlgorithmKind, RunResult};
use cmoea::benchmarks::{
    load_or_generate_front, make_benchmark, synthetic_population_size, BenchmarkId,
};
use cmoea::cht::{ChtMode, ConstraintConfig};
use cmoea::metrics::{compute_metric, HvBounds, HvSettings, MetricKind};
use cmoea::model::{ProblemSpec, RngStream};
use cmoea::variation::lattice_for_population;

use crate::config::{ExperimentConfig, PluginEntry, SyntheticEntry};
use crate::plugin::{plugin_bounds, plugin_problem};
use crate::store::{CellKey, Journal, Record, ResultStore};

pub const FRONTS_DIR: &str = "fronts";

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub out: PathBuf,
    pub jobs: usize,
    /// Store measured wall time; the default of 0 keeps reruns byte-identical.
    pub record_wall_time: bool,
    pub quiet: bool,
}

impl RunOptions {
    pub fn new(out: impl Into<PathBuf>) -> Self {
        Self {
            out: out.into(),
            jobs: 1,
            record_wall_time: false,
            quiet: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunSummary {
    pub executed: usize,
    pub skipped: usize,
    pub failed_runs: usize,
    pub results: PathBuf,
}

/// Which problem a cell runs on.
#[derive(Clone, Copy, Debug)]
pub enum ProblemRef<'a> {
    Synthetic(&'a SyntheticEntry),
    Plugin(&'a PluginEntry),
}

impl ProblemRef<'_> {
    pub fn name(&self) -> String {
        match self {
            ProblemRef::Synthetic(e) => e.id.family.name().to_string(),
            ProblemRef::Plugin(p) => p.name.clone(),
        }
    }

    pub fn m(&self) -> usize {
        match self {
            ProblemRef::Synthetic(e) => e.id.m,
            ProblemRef::Plugin(p) => p.m,
        }
    }

    fn budget(&self) -> u64 {
        match self {
            ProblemRef::Synthetic(e) => e.budget,
            ProblemRef::Plugin(p) => p.budget,
        }
    }

    fn population(&self) -> usize {
        match self {
            ProblemRef::Synthetic(e) => synthetic_population_size(e.id.m).expect("grid M"),
            ProblemRef::Plugin(p) => p.population,
        }
    }

    /// Metrics recorded for this problem: without a reference front only HV applies.
    pub fn metrics(&self, cfg: &ExperimentConfig) -> Vec<MetricKind> {
        match self {
            ProblemRef::Synthetic(_) => cfg.metrics.clone(),
            ProblemRef::Plugin(_) => cfg
                .metrics
                .iter()
                .copied()
                .filter(|&k| k == MetricKind::Hv)
                .collect(),
        }
    }
}

/// One independent run to perform.
#[derive(Clone, Debug)]
pub struct Cell<'a> {
    pub problem: ProblemRef<'a>,
    pub algorithm: AlgorithmKind,
    pub mode: ChtMode,
    pub seed: u64,
}

impl Cell<'_> {
    pub fn key(&self) -> CellKey {
        CellKey {
            problem: self.problem.name(),
            m: self.problem.m(),
            algorithm: self.algorithm.name().to_string(),
            cht_mode: self.mode.as_str().to_string(),
            seed: self.seed,
        }
    }
}

/// Every cell of the configured matrix, in a fixed order.
pub fn cells(cfg: &ExperimentConfig) -> Vec<Cell<'_>> {
    let problems = cfg
        .synthetic
        .iter()
        .map(ProblemRef::Synthetic)
        .chain(cfg.plugins.iter().map(ProblemRef::Plugin));
    let mut out = Vec::new();
    for problem in problems {
        for &algorithm in &cfg.algorithms {
            for &mode in &cfg.modes {
                for index in 0..cfg.repeats {
                    out.push(Cell {
                        problem,
                        algorithm,
                        mode,
                        seed: cfg.seed_base + index,
                    });
                }
            }
        }
    }
    out
}

/// Algorithm settings for `m` objectives and a nominal population size.
pub fn algorithm_config(
    algorithm: AlgorithmKind,
    m: usize,
    population: usize,
) -> AlgorithmConfig<f64> {
    let weights = lattice_for_population::<f64>(m, population);
    let n = if algorithm.uses_weights() {
        weights.len()
    } else {
        population
    };
    AlgorithmConfig::new(algorithm, n, weights)
}

/// Reference data for one synthetic problem.
pub struct Reference {
    pub front: Vec<Vec<f64>>,
    pub bounds: HvBounds<f64>,
}

pub fn synthetic_reference(out: &Path, id: BenchmarkId, size: usize) -> Result<Reference> {
    let front = load_or_generate_front::<f64>(&out.join(FRONTS_DIR), id, size)
        .with_context(|| format!("reference front for {id}"))?;
    let bounds = HvBounds::from_front(&front);
    Ok(Reference { front, bounds })
}

/// Runs one cell's algorithm, returning the raw result.
pub fn execute_run(cell: &Cell<'_>, trace: bool) -> Result<RunResult<f64>> {
    let problem: ProblemSpec<f64> = match cell.problem {
        ProblemRef::Synthetic(e) => make_benchmark(e.id)?,
        ProblemRef::Plugin(p) => plugin_problem(p)?,
    };
    let cfg = algorithm_config(cell.algorithm, cell.problem.m(), cell.problem.population());
    let cht = ConstraintConfig::new(cell.mode);
    let mut rng = RngStream::new(cell.seed);
    Ok(run(
        &problem,
        &cfg,
        &cht,
        cell.problem.budget(),
        &mut rng,
        trace,
    )?)
}

fn evaluate_cell(
    cfg: &ExperimentConfig,
    cell: &Cell<'_>,
    reference: Option<&Reference>,
    record_wall_time: bool,
) -> (Vec<Record>, bool) {
    let metrics = cell.problem.metrics(cfg);
    let start = Instant::now();
    type Scored = (Vec<(MetricKind, f64, bool)>, u64);
    let outcome = catch_unwind(AssertUnwindSafe(|| -> Result<Scored> {
        let result = execute_run(cell, false)?;
        let settings = HvSettings {
            samples: cfg.hv_samples,
            seed: cell.seed,
        };
        let (front, bounds): (&[Vec<f64>], HvBounds<f64>) = match (cell.problem, reference) {
            (ProblemRef::Synthetic(_), Some(r)) => (&r.front, r.bounds.clone()),
            (ProblemRef::Plugin(p), _) => (&[], plugin_bounds(p)),
            (ProblemRef::Synthetic(e), None) => {
                anyhow::bail!("no reference front loaded for {}", e.id)
            }
        };
        let values = metrics
            .iter()
            .map(|&kind| {
                let r = compute_metric(kind, &result.population.members, front, &bounds, settings);
                (kind, r.value, r.failed)
            })
            .collect();
        Ok((values, result.evaluations))
    }));
    let wall_ms = if record_wall_time {
        start.elapsed().as_millis() as u64
    } else {
        0
    };
    let key = cell.key();
    let (values, evals, crashed) = match outcome {
        Ok(Ok((values, evals))) => (values, evals, false),
        Ok(Err(err)) => {
            eprintln!("run {key:?} failed: {err:#}");
            (
                metrics
                    .iter()
                    .map(|&k| (k, k.failure_value(), true))
                    .collect(),
                0,
                true,
            )
        }
        Err(_) => (
            metrics
                .iter()
                .map(|&k| (k, k.failure_value(), true))
                .collect(),
            0,
            true,
        ),
    };
    let records = values
        .into_iter()
        .map(|(kind, value, failed)| Record {
            cell: key.clone(),
            metric: kind.as_str().to_string(),
            value,
            failed,
            evals,
            wall_ms,
        })
        .collect();
    (records, crashed)
}

/// Runs every cell that does not yet have all its metrics in the store, then
/// writes the merged, sorted results file.
pub fn run_experiment(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunSummary> {
    std::fs::create_dir_all(&opts.out)
        .with_context(|| format!("creating {}", opts.out.display()))?;
    let mut store = ResultStore::load(&opts.out)?;
    let all = cells(cfg);
    let pending: Vec<&Cell<'_>> = all
        .iter()
        .filter(|c| {
            let key = c.key();
            c.problem
                .metrics(cfg)
                .iter()
                .any(|k| !store.contains(&key, k.as_str()))
        })
        .collect();
    let skipped = all.len() - pending.len();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .context("building the worker pool")?;

    // reference fronts for the problems that still have work
    let mut references: Vec<Option<Reference>> = Vec::with_capacity(cfg.synthetic.len());
    for entry in &cfg.synthetic {
        let needed = pending
            .iter()
            .any(|c| matches!(c.problem, ProblemRef::Synthetic(e) if e.id == entry.id));
        references.push(if needed {
            Some(synthetic_reference(&opts.out, entry.id, cfg.front_size)?)
        } else {
            None
        });
    }
    let reference_for = |cell: &Cell<'_>| match cell.problem {
        ProblemRef::Synthetic(e) => cfg
            .synthetic
            .iter()
            .position(|s| s.id == e.id)
            .and_then(|i| references[i].as_ref()),
        ProblemRef::Plugin(_) => None,
    };

    let journal = Mutex::new(Journal::open(&opts.out)?);
    let finished = Mutex::new((Vec::<Record>::new(), 0usize, 0usize));
    let total = pending.len();
    let write_error: Mutex<Option<anyhow::Error>> = Mutex::new(None);
    pool.install(|| {
        pending.par_iter().for_each(|cell| {
            let (records, crashed) =
                evaluate_cell(cfg, cell, reference_for(cell), opts.record_wall_time);
            if let Err(e) = journal.lock().unwrap().append(&records) {
                write_error.lock().unwrap().get_or_insert(e);
            }
            let mut f = finished.lock().unwrap();
            f.1 += 1;
            f.2 += usize::from(crashed);
            if !opts.quiet && (f.1.is_multiple_of(50) || f.1 == total) {
                eprintln!("{}/{} runs", f.1, total);
            }
            f.0.extend(records);
        })
    });
    if let Some(e) = write_error.into_inner().unwrap() {
        return Err(e.context("writing the journal"));
    }
    drop(journal);
    let (records, executed, failed_runs) = finished.into_inner().unwrap();
    for r in records {
        store.insert(r);
    }
    let results = store.save(&opts.out)?;
    Ok(RunSummary {
        executed,
        skipped,
        failed_runs,
        results,
    })
}

/// Writes the reference fronts of every synthetic problem in the config.
pub fn generate_fronts(cfg: &ExperimentConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let dir = out.join(FRONTS_DIR);
    let mut paths = Vec::new();
    for entry in &cfg.synthetic {
        load_or_generate_front::<f64>(&dir, entry.id, cfg.front_size)
            .with_context(|| format!("reference front for {}", entry.id))?;
        paths.push(dir.join(cmoea::benchmarks::front_file_name(
            entry.id.family.name(),
            entry.id.m,
        )));
    }
    Ok(paths)
}
