//! Problem and solution types, the evaluation pipeline and plain Pareto dominance.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cht::{self, ConstraintConfig};
use crate::scalar::Scalar;

/// Raw outputs of one call to a problem's evaluator.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation<T> {
    pub objectives: Vec<T>,
    /// Inequality constraint values in canonical form (`<= 0` is satisfied).
    pub inequality: Vec<T>,
    /// Equality constraint values (`|h| <= epsilon` is satisfied).
    pub equality: Vec<T>,
}

/// A deterministic black box mapping a decision vector to objectives and constraints.
pub trait Evaluator<T>: Send + Sync {
    fn evaluate(&self, x: &[T]) -> Evaluation<T>;
}

impl<T, F> Evaluator<T> for F
where
    F: Fn(&[T]) -> Evaluation<T> + Send + Sync,
{
    fn evaluate(&self, x: &[T]) -> Evaluation<T> {
        self(x)
    }
}

/// Produces a reference front of roughly the requested size.
pub type FrontSampler<T> = Arc<dyn Fn(usize) -> Vec<Vec<T>> + Send + Sync>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("problem `{0}` needs at least two objectives, got {1}")]
    TooFewObjectives(String, usize),
    #[error("problem `{0}` needs at least one decision variable")]
    NoVariables(String),
    #[error("problem `{name}`: bounds have length {lower}/{upper}, expected {n}")]
    BoundsLength {
        name: String,
        n: usize,
        lower: usize,
        upper: usize,
    },
    #[error("problem `{name}`: lower bound {index} is not below its upper bound")]
    EmptyInterval { name: String, index: usize },
}

/// A constrained multi-objective problem: box bounds, an evaluator and dimensions.
#[derive(Clone)]
pub struct ProblemSpec<T> {
    name: String,
    m: usize,
    n: usize,
    p: usize,
    q: usize,
    lower: Vec<T>,
    upper: Vec<T>,
    evaluator: Arc<dyn Evaluator<T>>,
    front_sampler: Option<FrontSampler<T>>,
}

impl<T: Scalar> ProblemSpec<T> {
    /// Builds a problem, validating dimensions and bounds.
    ///
    /// `p` and `q` are the number of inequality and equality constraints the
    /// evaluator returns.
    pub fn new(
        name: impl Into<String>,
        m: usize,
        p: usize,
        q: usize,
        lower: Vec<T>,
        upper: Vec<T>,
        evaluator: Arc<dyn Evaluator<T>>,
    ) -> Result<Self, ModelError> {
        let name = name.into();
        let n = lower.len();
        if m < 2 {
            return Err(ModelError::TooFewObjectives(name, m));
        }
        if n == 0 {
            return Err(ModelError::NoVariables(name));
        }
        if upper.len() != n {
            return Err(ModelError::BoundsLength {
                name,
                n,
                lower: lower.len(),
                upper: upper.len(),
            });
        }
        if let Some(index) = lower.iter().zip(&upper).position(|(l, u)| !(l < u)) {
            return Err(ModelError::EmptyInterval { name, index });
        }
        Ok(Self {
            name,
            m,
            n,
            p,
            q,
            lower,
            upper,
            evaluator,
            front_sampler: None,
        })
    }

    pub fn with_front_sampler(mut self, sampler: FrontSampler<T>) -> Self {
        self.front_sampler = Some(sampler);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of objectives.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of decision variables.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of inequality constraints.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Number of equality constraints.
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn lower(&self) -> &[T] {
        &self.lower
    }

    pub fn upper(&self) -> &[T] {
        &self.upper
    }

    pub fn front_sampler(&self) -> Option<&FrontSampler<T>> {
        self.front_sampler.as_ref()
    }

    /// Calls the evaluator directly, without budget accounting.
    pub fn raw_evaluate(&self, x: &[T]) -> Evaluation<T> {
        assert_eq!(
            x.len(),
            self.n,
            "decision vector length mismatch for {}",
            self.name
        );
        let out = self.evaluator.evaluate(x);
        assert_eq!(
            out.objectives.len(),
            self.m,
            "objective count mismatch for {}",
            self.name
        );
        assert_eq!(
            out.inequality.len(),
            self.p,
            "inequality count mismatch for {}",
            self.name
        );
        assert_eq!(
            out.equality.len(),
            self.q,
            "equality count mismatch for {}",
            self.name
        );
        out
    }

    /// Clamps every component of `x` into the box.
    pub fn clamp(&self, x: &mut [T]) {
        for ((v, &lo), &hi) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *v = v.max(lo).min(hi);
        }
    }

    /// Uniform random point inside the box.
    pub fn sample_uniform(&self, rng: &mut RngStream) -> Vec<T> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&lo, &hi)| lo + (hi - lo) * T::lit(rng.uniform()))
            .collect()
    }
}

impl<T> fmt::Debug for ProblemSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("m", &self.m)
            .field("n", &self.n)
            .field("p", &self.p)
            .field("q", &self.q)
            .finish_non_exhaustive()
    }
}

/// An evaluated decision vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution<T> {
    pub x: Vec<T>,
    pub f: Vec<T>,
    /// Per-constraint violation degrees, inequalities first.
    pub c: Vec<T>,
    /// Aggregated constraint violation, `sum(c)`.
    pub cv: T,
    /// The violation value constraint handling actually reads.
    pub effective_cv: T,
    /// 1-based ordinal of the evaluation that produced this solution.
    pub eval_index: u64,
}

impl<T: Scalar> Solution<T> {
    pub fn is_feasible(&self) -> bool {
        self.cv == T::zero()
    }
}

/// Ordered collection of evaluated solutions with a fixed capacity.
#[derive(Clone, Debug)]
pub struct Population<T> {
    pub members: Vec<Solution<T>>,
    pub capacity: usize,
}

impl<T: Scalar> Population<T> {
    pub fn new(members: Vec<Solution<T>>, capacity: usize) -> Self {
        debug_assert!(members.len() <= capacity);
        Self { members, capacity }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn feasible(&self) -> impl Iterator<Item = &Solution<T>> {
        self.members.iter().filter(|s| s.is_feasible())
    }

    pub fn objectives(&self) -> Vec<Vec<T>> {
        self.members.iter().map(|s| s.f.clone()).collect()
    }
}

/// Seeded random stream. One per run; never shared.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Stream for the `run_index`-th independent repetition.
    pub fn for_run(base_seed: u64, run_index: u64) -> Self {
        Self::new(base_seed.wrapping_add(run_index))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    /// Uniform index in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        assert!(n > 0, "cannot draw an index from an empty range");
        self.rng.gen_range(0..n)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Random permutation of `0..n`.
    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut v: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.index(i + 1);
            v.swap(i, j);
        }
        v
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("evaluation budget of {limit} exhausted")]
pub struct BudgetExhausted {
    pub limit: u64,
}

/// Function-evaluation counter with a hard limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Self { limit, used: 0 }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn remaining(&self) -> u64 {
        self.limit - self.used
    }

    /// Claims one evaluation and returns its 1-based index.
    pub fn consume(&mut self) -> Result<u64, BudgetExhausted> {
        if self.used >= self.limit {
            return Err(BudgetExhausted { limit: self.limit });
        }
        self.used += 1;
        Ok(self.used)
    }
}

/// One trace row: everything the scatter export needs about an evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceEntry<T> {
    pub eval_index: u64,
    pub f: Vec<T>,
    pub cv: T,
}

/// Evaluates `x` under `cht`, charging one evaluation to `budget`.
pub fn evaluate<T: Scalar>(
    problem: &ProblemSpec<T>,
    x: Vec<T>,
    cht: &ConstraintConfig<T>,
    budget: &mut Budget,
) -> Result<Solution<T>, BudgetExhausted> {
    let eval_index = budget.consume()?;
    let out = problem.raw_evaluate(&x);
    let c = cht::violation_degrees(&out.inequality, &out.equality, cht);
    let cv = cht::aggregate_cv(&c);
    Ok(Solution {
        x,
        f: out.objectives,
        c,
        cv,
        effective_cv: cht::effective_cv(cv, cht.mode),
        eval_index,
    })
}

/// Bundles a problem, constraint handling, a budget and an optional trace for one run.
pub struct EvalSession<'a, T> {
    pub problem: &'a ProblemSpec<T>,
    pub cht: &'a ConstraintConfig<T>,
    pub budget: Budget,
    trace: Option<Vec<TraceEntry<T>>>,
}

impl<'a, T: Scalar> EvalSession<'a, T> {
    pub fn new(
        problem: &'a ProblemSpec<T>,
        cht: &'a ConstraintConfig<T>,
        max_evaluations: u64,
        trace: bool,
    ) -> Self {
        Self {
            problem,
            cht,
            budget: Budget::new(max_evaluations),
            trace: trace.then(Vec::new),
        }
    }

    /// Clamps `x` into bounds, then evaluates it.
    pub fn evaluate(&mut self, mut x: Vec<T>) -> Result<Solution<T>, BudgetExhausted> {
        self.problem.clamp(&mut x);
        let s = evaluate(self.problem, x, self.cht, &mut self.budget)?;
        if let Some(trace) = self.trace.as_mut() {
            trace.push(TraceEntry {
                eval_index: s.eval_index,
                f: s.f.clone(),
                cv: s.cv,
            });
        }
        Ok(s)
    }

    /// Evaluates a whole batch, or nothing if the batch does not fit in the remaining budget.
    pub fn evaluate_batch(&mut self, xs: Vec<Vec<T>>) -> Result<Vec<Solution<T>>, BudgetExhausted> {
        if (xs.len() as u64) > self.budget.remaining() {
            return Err(BudgetExhausted {
                limit: self.budget.limit(),
            });
        }
        xs.into_iter().map(|x| self.evaluate(x)).collect()
    }

    pub fn can_afford(&self, evaluations: usize) -> bool {
        self.budget.remaining() >= evaluations as u64
    }

    pub fn into_trace(self) -> Option<Vec<TraceEntry<T>>> {
        self.trace
    }
}

/// Pareto dominance for minimization.
pub fn pareto_dominates<T: PartialOrd>(a: &[T], b: &[T]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}
