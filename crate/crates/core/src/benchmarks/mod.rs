//! Constrained DTLZ benchmark problems, their reference fronts, and the
//! registry of externally supplied real-world problems.

mod dtlz;
mod fronts;
mod registry;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::model::{Evaluation, ProblemSpec};
use crate::scalar::Scalar;

pub use dtlz::{dtlz1_objectives, g_rastrigin, g_sphere, sphere_objectives};
pub use fronts::{
    front_file_name, load_or_generate_front, read_front, reference_front, write_front, FrontError,
    DEFAULT_FRONT_SIZE,
};
pub use registry::{registry_lookup, rwmop_population_size, RegistryEntry, UnknownProblem, RWMOP};

/// The synthetic constrained families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    C1Dtlz1,
    C1Dtlz3,
    C2Dtlz2,
    C3Dtlz4,
    Dc1Dtlz1,
    Dc1Dtlz3,
    Dc2Dtlz1,
    Dc2Dtlz3,
    Dc3Dtlz1,
    Dc3Dtlz3,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::C1Dtlz1,
        Family::C1Dtlz3,
        Family::C2Dtlz2,
        Family::C3Dtlz4,
        Family::Dc1Dtlz1,
        Family::Dc1Dtlz3,
        Family::Dc2Dtlz1,
        Family::Dc2Dtlz3,
        Family::Dc3Dtlz1,
        Family::Dc3Dtlz3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::C1Dtlz1 => "C1-DTLZ1",
            Family::C1Dtlz3 => "C1-DTLZ3",
            Family::C2Dtlz2 => "C2-DTLZ2",
            Family::C3Dtlz4 => "C3-DTLZ4",
            Family::Dc1Dtlz1 => "DC1-DTLZ1",
            Family::Dc1Dtlz3 => "DC1-DTLZ3",
            Family::Dc2Dtlz1 => "DC2-DTLZ1",
            Family::Dc2Dtlz3 => "DC2-DTLZ3",
            Family::Dc3Dtlz1 => "DC3-DTLZ1",
            Family::Dc3Dtlz3 => "DC3-DTLZ3",
        }
    }

    /// Whether the objectives follow DTLZ1 (linear front) rather than DTLZ2/3/4 (spherical front).
    pub fn is_linear(self) -> bool {
        matches!(
            self,
            Family::C1Dtlz1 | Family::Dc1Dtlz1 | Family::Dc2Dtlz1 | Family::Dc3Dtlz1
        )
    }

    /// Number of distance variables.
    pub fn k(self) -> usize {
        if self.is_linear() {
            5
        } else {
            10
        }
    }

    pub fn constraint_count(self, m: usize) -> usize {
        match self {
            Family::C1Dtlz1
            | Family::C1Dtlz3
            | Family::C2Dtlz2
            | Family::Dc1Dtlz1
            | Family::Dc1Dtlz3 => 1,
            Family::C3Dtlz4 => m,
            Family::Dc2Dtlz1 | Family::Dc2Dtlz3 => 2,
            Family::Dc3Dtlz1 | Family::Dc3Dtlz3 => m + 1,
        }
    }

    /// Evaluation budget as a multiple of the population size, for `m` in {2, 3, 5, 10}.
    pub fn budget_multiplier(self, m: usize) -> Option<u64> {
        let row: [u64; 4] = match self {
            Family::C1Dtlz1 => [500, 500, 600, 1000],
            Family::C1Dtlz3 => [1000, 1000, 1500, 3000],
            Family::C2Dtlz2 => [250, 250, 350, 750],
            Family::C3Dtlz4 => [750, 750, 1250, 3000],
            Family::Dc1Dtlz1 => [600, 800, 600, 800],
            Family::Dc1Dtlz3 => [600, 1000, 1000, 1200],
            Family::Dc2Dtlz1 => [700, 700, 500, 600],
            Family::Dc2Dtlz3 => [900, 1100, 1400, 1500],
            Family::Dc3Dtlz1 => [700, 700, 600, 600],
            Family::Dc3Dtlz3 => [1000, 1300, 1400, 1800],
        };
        grid_position(m).map(|i| row[i])
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = BenchmarkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_uppercase();
        Family::ALL
            .into_iter()
            .find(|f| f.name().replace('-', "") == key)
            .ok_or_else(|| BenchmarkError::UnknownFamily(s.to_string()))
    }
}

/// Objective counts of the experiment grid.
pub const GRID_M: [usize; 4] = [2, 3, 5, 10];

fn grid_position(m: usize) -> Option<usize> {
    GRID_M.iter().position(|&g| g == m)
}

/// Population size for the synthetic problems.
pub fn synthetic_population_size(m: usize) -> Option<usize> {
    grid_position(m).map(|i| [91, 91, 210, 275][i])
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BenchmarkError {
    #[error("unknown benchmark family `{0}`")]
    UnknownFamily(String),
    #[error("{0} is defined for m >= 2, got m = {1}")]
    UnsupportedObjectives(Family, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BenchmarkId {
    pub family: Family,
    pub m: usize,
}

impl BenchmarkId {
    pub fn new(family: Family, m: usize) -> Result<Self, BenchmarkError> {
        if m < 2 {
            return Err(BenchmarkError::UnsupportedObjectives(family, m));
        }
        Ok(Self { family, m })
    }

    pub fn n(&self) -> usize {
        self.m - 1 + self.family.k()
    }

    /// Evaluation budget from the schedule, when `m` is on the experiment grid.
    pub fn budget(&self) -> Option<u64> {
        let n = synthetic_population_size(self.m)? as u64;
        Some(self.family.budget_multiplier(self.m)? * n)
    }
}

impl fmt::Display for BenchmarkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_M{}", self.family, self.m)
    }
}

/// Builds the problem for `id` with constraints in canonical `<= 0` form.
pub fn make_benchmark<T: Scalar>(id: BenchmarkId) -> Result<ProblemSpec<T>, BenchmarkError> {
    let BenchmarkId { family, m } = id;
    if m < 2 {
        return Err(BenchmarkError::UnsupportedObjectives(family, m));
    }
    let n = id.n();
    let evaluator = move |x: &[T]| -> Evaluation<T> {
        let (objectives, inequality) = dtlz::evaluate(family, m, x);
        Evaluation {
            objectives,
            inequality,
            equality: Vec::new(),
        }
    };
    let spec = ProblemSpec::new(
        family.name(),
        m,
        family.constraint_count(m),
        0,
        vec![T::zero(); n],
        vec![T::one(); n],
        Arc::new(evaluator),
    )
    .expect("benchmark dimensions are valid");
    Ok(spec.with_front_sampler(Arc::new(move |size| reference_front::<T>(id, size))))
}
