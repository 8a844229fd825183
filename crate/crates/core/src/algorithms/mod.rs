//! The four constrained evolutionary algorithms.
//!
//! Every algorithm reads constraint information only through
//! [`constrained_compare`](crate::cht::constrained_compare), feasibility, and
//! `effective_cv`, so the true-violation and crisp variants share one code path.

pub mod decomposition;
pub mod sorting;

mod ctaea;
mod moead;
mod nsga2;
mod nsga3;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cht::{constrained_compare, ConstraintConfig, Dominance};
use crate::model::{EvalSession, Population, ProblemSpec, RngStream, Solution, TraceEntry};
use crate::scalar::Scalar;
use crate::variation::{
    polynomial_mutation, sbx_crossover, VariationConfig, VariationError, WeightVectorSet,
};

pub use ctaea::{run_ctaea, update_ca, update_da};
pub use decomposition::Aggregation;
pub use moead::{replaces, run_cmoead};
pub use nsga2::{crowded_truncation, run_cnsga2};
pub use nsga3::{hyperplane_intercepts, niching_selection, run_cnsga3};
pub use sorting::{crowding_distance, fast_nondominated_sort, ranks_from_fronts};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgorithmKind {
    CNsga2,
    CNsga3,
    CMoead,
    CTaea,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 4] = [
        AlgorithmKind::CNsga2,
        AlgorithmKind::CNsga3,
        AlgorithmKind::CMoead,
        AlgorithmKind::CTaea,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::CNsga2 => "C-NSGA-II",
            AlgorithmKind::CNsga3 => "C-NSGA-III",
            AlgorithmKind::CMoead => "C-MOEA/D",
            AlgorithmKind::CTaea => "C-TAEA",
        }
    }

    pub fn uses_weights(self) -> bool {
        !matches!(self, AlgorithmKind::CNsga2)
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "cnsgaii" | "cnsga2" | "nsga2" | "nsgaii" => Ok(AlgorithmKind::CNsga2),
            "cnsgaiii" | "cnsga3" | "nsga3" | "nsgaiii" => Ok(AlgorithmKind::CNsga3),
            "cmoead" | "moead" => Ok(AlgorithmKind::CMoead),
            "ctaea" | "taea" => Ok(AlgorithmKind::CTaea),
            _ => Err(format!("unknown algorithm `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoeadParams {
    /// Neighborhood size, capped at the population size.
    pub t: usize,
    /// Probability of mating within the neighborhood.
    pub delta: f64,
    /// Maximum number of incumbents one offspring may replace.
    pub nr: usize,
    pub aggregation: Aggregation,
}

impl Default for MoeadParams {
    fn default() -> Self {
        Self {
            t: 20,
            delta: 0.9,
            nr: 2,
            aggregation: Aggregation::Tchebycheff,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("population size must be at least 2")]
    PopulationTooSmall,
    #[error("{0} needs {1} weight vectors but the set holds {2}")]
    WeightCount(AlgorithmKind, usize, usize),
    #[error("weight vectors have {0} components, the problem has {1} objectives")]
    WeightDimension(usize, usize),
    #[error("invalid MOEA/D parameters: {0}")]
    Moead(String),
    #[error(transparent)]
    Variation(#[from] VariationError),
}

#[derive(Clone, Debug)]
pub struct AlgorithmConfig<T> {
    pub algorithm: AlgorithmKind,
    pub population_size: usize,
    pub weights: Option<WeightVectorSet<T>>,
    pub moead: MoeadParams,
    pub variation: VariationConfig,
}

impl<T: Scalar> AlgorithmConfig<T> {
    /// Default configuration; weight-based algorithms use `weights.len()` as the population size.
    pub fn new(
        algorithm: AlgorithmKind,
        population_size: usize,
        weights: WeightVectorSet<T>,
    ) -> Self {
        Self {
            algorithm,
            population_size,
            weights: algorithm.uses_weights().then_some(weights),
            moead: MoeadParams::default(),
            variation: VariationConfig::default(),
        }
    }

    pub fn validate(&self, m: usize) -> Result<(), ConfigError> {
        if self.population_size < 2 {
            return Err(ConfigError::PopulationTooSmall);
        }
        self.variation.validate()?;
        if self.algorithm.uses_weights() {
            let w = self.weights.as_ref().ok_or(ConfigError::WeightCount(
                self.algorithm,
                self.population_size,
                0,
            ))?;
            if w.len() != self.population_size {
                return Err(ConfigError::WeightCount(
                    self.algorithm,
                    self.population_size,
                    w.len(),
                ));
            }
            if w.dim() != m {
                return Err(ConfigError::WeightDimension(w.dim(), m));
            }
        }
        if self.algorithm == AlgorithmKind::CMoead {
            let p = &self.moead;
            if p.t == 0 {
                return Err(ConfigError::Moead(
                    "neighborhood size must be positive".into(),
                ));
            }
            if !(0.0..=1.0).contains(&p.delta) {
                return Err(ConfigError::Moead(format!(
                    "delta {} outside [0, 1]",
                    p.delta
                )));
            }
            if p.nr == 0 {
                return Err(ConfigError::Moead("nr must be at least 1".into()));
            }
        }
        Ok(())
    }

    fn weight_vectors(&self) -> &[Vec<T>] {
        &self
            .weights
            .as_ref()
            .expect("validated config carries weights")
            .vectors
    }
}

/// Outcome of one run.
#[derive(Clone, Debug)]
pub struct RunResult<T> {
    pub population: Population<T>,
    pub trace: Option<Vec<TraceEntry<T>>>,
    pub evaluations: u64,
}

impl<T: Scalar> RunResult<T> {
    /// Objective vectors of the feasible members of the final population.
    pub fn feasible_objectives(&self) -> Vec<Vec<T>> {
        self.population.feasible().map(|s| s.f.clone()).collect()
    }
}

/// Runs the configured algorithm with a budget of `max_evaluations`.
pub fn run<T: Scalar>(
    problem: &ProblemSpec<T>,
    cfg: &AlgorithmConfig<T>,
    cht: &ConstraintConfig<T>,
    max_evaluations: u64,
    rng: &mut RngStream,
    trace: bool,
) -> Result<RunResult<T>, ConfigError> {
    match cfg.algorithm {
        AlgorithmKind::CNsga2 => run_cnsga2(problem, cfg, cht, max_evaluations, rng, trace),
        AlgorithmKind::CNsga3 => run_cnsga3(problem, cfg, cht, max_evaluations, rng, trace),
        AlgorithmKind::CMoead => run_cmoead(problem, cfg, cht, max_evaluations, rng, trace),
        AlgorithmKind::CTaea => run_ctaea(problem, cfg, cht, max_evaluations, rng, trace),
    }
}

/// Uniform random initial population. `None` if the budget cannot pay for it.
fn initialize<T: Scalar>(
    session: &mut EvalSession<'_, T>,
    n: usize,
    rng: &mut RngStream,
) -> Option<Vec<Solution<T>>> {
    let xs: Vec<Vec<T>> = (0..n)
        .map(|_| session.problem.sample_uniform(rng))
        .collect();
    session.evaluate_batch(xs).ok()
}

/// SBX followed by polynomial mutation on both children.
fn recombine<T: Scalar>(
    a: &Solution<T>,
    b: &Solution<T>,
    problem: &ProblemSpec<T>,
    variation: &VariationConfig,
    rng: &mut RngStream,
) -> (Vec<T>, Vec<T>) {
    let (lo, hi) = (problem.lower(), problem.upper());
    let (c1, c2) = sbx_crossover(&a.x, &b.x, variation, lo, hi, rng);
    (
        polynomial_mutation(&c1, variation, lo, hi, rng),
        polynomial_mutation(&c2, variation, lo, hi, rng),
    )
}

/// Produces `count` offspring decision vectors from parents chosen by `select`.
fn breed<T: Scalar>(
    count: usize,
    problem: &ProblemSpec<T>,
    variation: &VariationConfig,
    rng: &mut RngStream,
    mut select: impl FnMut(&mut RngStream) -> (usize, usize),
    parents: &[Solution<T>],
) -> Vec<Vec<T>> {
    let mut out = Vec::with_capacity(count + 1);
    while out.len() < count {
        let (i, j) = select(rng);
        let (c1, c2) = recombine(&parents[i], &parents[j], problem, variation, rng);
        out.push(c1);
        out.push(c2);
    }
    out.truncate(count);
    out
}

/// Binary tournament under constrained dominance; a coin decides ties.
fn constrained_tournament<T: Scalar>(pop: &[Solution<T>], rng: &mut RngStream) -> usize {
    let a = rng.index(pop.len());
    let b = rng.index(pop.len());
    match constrained_compare(&pop[a], &pop[b]) {
        Dominance::FirstDominates => a,
        Dominance::SecondDominates => b,
        Dominance::Neither => {
            if rng.coin(0.5) {
                a
            } else {
                b
            }
        }
    }
}

/// Sorts by constrained dominance.
fn constrained_fronts<T: Scalar>(pop: &[Solution<T>]) -> Vec<Vec<usize>> {
    fast_nondominated_sort(pop, constrained_compare)
}

fn take_indices<T: Clone>(items: Vec<T>, keep: &[usize]) -> Vec<T> {
    let mut slots: Vec<Option<T>> = items.into_iter().map(Some).collect();
    keep.iter()
        .map(|&i| slots[i].take().expect("index kept twice"))
        .collect()
}

fn finish<T: Scalar>(
    session: EvalSession<'_, T>,
    members: Vec<Solution<T>>,
    capacity: usize,
) -> RunResult<T> {
    let evaluations = session.budget.used();
    RunResult {
        population: Population::new(members, capacity),
        trace: session.into_trace(),
        evaluations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_names_round_trip() {
        for a in AlgorithmKind::ALL {
            assert_eq!(a.name().parse::<AlgorithmKind>().unwrap(), a);
        }
        assert!("SPEA2".parse::<AlgorithmKind>().is_err());
    }

    #[test]
    fn config_validation() {
        let w = crate::variation::das_dennis::<f64>(2, 9);
        let cfg = AlgorithmConfig::new(AlgorithmKind::CNsga3, 10, w.clone());
        assert!(cfg.validate(2).is_ok());
        assert_eq!(cfg.validate(3), Err(ConfigError::WeightDimension(2, 3)));
        let cfg = AlgorithmConfig::new(AlgorithmKind::CMoead, 12, w.clone());
        assert_eq!(
            cfg.validate(2),
            Err(ConfigError::WeightCount(AlgorithmKind::CMoead, 12, 10))
        );
        let mut cfg = AlgorithmConfig::new(AlgorithmKind::CMoead, 10, w);
        cfg.moead.nr = 0;
        assert!(matches!(cfg.validate(2), Err(ConfigError::Moead(_))));
    }
}
