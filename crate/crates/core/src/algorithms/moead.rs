use crate::cht::ConstraintConfig;
use crate::model::{EvalSession, ProblemSpec, RngStream, Solution};
use crate::scalar::Scalar;

use super::decomposition::{neighborhoods, Aggregation};
use super::{finish, initialize, recombine, AlgorithmConfig, ConfigError, RunResult};

/// Whether `child` should replace `incumbent` on the subproblem with `weight`.
///
/// Feasible beats infeasible; two infeasible solutions compare by
/// `effective_cv` and fall back to the aggregation value on ties; two feasible
/// solutions compare by aggregation value.
pub fn replaces<T: Scalar>(
    child: &Solution<T>,
    incumbent: &Solution<T>,
    weight: &[T],
    ideal: &[T],
    aggregation: Aggregation,
) -> bool {
    let by_aggregation = || {
        aggregation.value(weight, &child.f, ideal) <= aggregation.value(weight, &incumbent.f, ideal)
    };
    match (child.is_feasible(), incumbent.is_feasible()) {
        (true, false) => true,
        (false, true) => false,
        (true, true) => by_aggregation(),
        (false, false) => {
            if child.effective_cv < incumbent.effective_cv {
                true
            } else if child.effective_cv > incumbent.effective_cv {
                false
            } else {
                by_aggregation()
            }
        }
    }
}

/// MOEA/D with violation-aware subproblem replacement.
pub fn run_cmoead<T: Scalar>(
    problem: &ProblemSpec<T>,
    cfg: &AlgorithmConfig<T>,
    cht: &ConstraintConfig<T>,
    max_evaluations: u64,
    rng: &mut RngStream,
    trace: bool,
) -> Result<RunResult<T>, ConfigError> {
    cfg.validate(problem.m())?;
    let n = cfg.population_size;
    let params = cfg.moead;
    let weights = cfg.weight_vectors();
    let neighbors = neighborhoods(weights, params.t);
    let everyone: Vec<usize> = (0..n).collect();
    let mut session = EvalSession::new(problem, cht, max_evaluations, trace);
    let Some(mut pop) = initialize(&mut session, n, rng) else {
        return Ok(finish(session, Vec::new(), n));
    };
    let m = problem.m();
    let mut ideal = vec![T::infinity(); m];
    let update_ideal = |ideal: &mut Vec<T>, f: &[T]| {
        for k in 0..m {
            ideal[k] = ideal[k].min(f[k]);
        }
    };
    for s in &pop {
        update_ideal(&mut ideal, &s.f);
    }

    while session.can_afford(n) {
        for i in 0..n {
            let pool: &[usize] = if rng.coin(params.delta) {
                &neighbors[i]
            } else {
                &everyone
            };
            let a = pool[rng.index(pool.len())];
            let b = pool[rng.index(pool.len())];
            let (child_x, _) = recombine(&pop[a], &pop[b], problem, &cfg.variation, rng);
            let child = session
                .evaluate(child_x)
                .expect("generation fits in budget");
            update_ideal(&mut ideal, &child.f);
            let mut replaced = 0;
            for k in rng.permutation(pool.len()) {
                if replaced >= params.nr {
                    break;
                }
                let j = pool[k];
                if replaces(&child, &pop[j], &weights[j], &ideal, params.aggregation) {
                    pop[j] = child.clone();
                    replaced += 1;
                }
            }
        }
    }
    Ok(finish(session, pop, n))
}
