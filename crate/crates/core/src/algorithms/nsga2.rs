use crate::cht::ConstraintConfig;
use crate::model::{EvalSession, ProblemSpec, RngStream, Solution};
use crate::scalar::Scalar;

use super::{
    breed, constrained_fronts, crowding_distance, finish, initialize, take_indices,
    AlgorithmConfig, ConfigError, RunResult,
};

/// Survivors of NSGA-II environmental selection with their front rank and crowding distance.
pub struct Ranked<T> {
    pub members: Vec<Solution<T>>,
    pub rank: Vec<usize>,
    pub crowding: Vec<T>,
}

/// Keeps the best `n` of `merged` by (constrained front, crowding distance).
pub fn crowded_truncation<T: Scalar>(merged: Vec<Solution<T>>, n: usize) -> Ranked<T> {
    let fronts = constrained_fronts(&merged);
    let mut keep = Vec::with_capacity(n);
    let mut rank = Vec::with_capacity(n);
    let mut crowding = Vec::with_capacity(n);
    for (r, front) in fronts.iter().enumerate() {
        if keep.len() >= n {
            break;
        }
        let objs: Vec<&[T]> = front.iter().map(|&i| merged[i].f.as_slice()).collect();
        let d = crowding_distance(&objs);
        let mut order: Vec<usize> = (0..front.len()).collect();
        if keep.len() + front.len() > n {
            order.sort_by(|&a, &b| d[b].partial_cmp(&d[a]).unwrap().then(a.cmp(&b)));
            order.truncate(n - keep.len());
        }
        for k in order {
            keep.push(front[k]);
            rank.push(r);
            crowding.push(d[k]);
        }
    }
    Ranked {
        members: take_indices(merged, &keep),
        rank,
        crowding,
    }
}

fn crowded_tournament<T: Scalar>(ranked: &Ranked<T>, rng: &mut RngStream) -> usize {
    let a = rng.index(ranked.members.len());
    let b = rng.index(ranked.members.len());
    if ranked.rank[a] != ranked.rank[b] {
        return if ranked.rank[a] < ranked.rank[b] {
            a
        } else {
            b
        };
    }
    if ranked.crowding[a] > ranked.crowding[b] {
        a
    } else if ranked.crowding[b] > ranked.crowding[a] {
        b
    } else if rng.coin(0.5) {
        a
    } else {
        b
    }
}

/// NSGA-II with constrained dominance.
pub fn run_cnsga2<T: Scalar>(
    problem: &ProblemSpec<T>,
    cfg: &AlgorithmConfig<T>,
    cht: &ConstraintConfig<T>,
    max_evaluations: u64,
    rng: &mut RngStream,
    trace: bool,
) -> Result<RunResult<T>, ConfigError> {
    cfg.validate(problem.m())?;
    let n = cfg.population_size;
    let mut session = EvalSession::new(problem, cht, max_evaluations, trace);
    let Some(initial) = initialize(&mut session, n, rng) else {
        return Ok(finish(session, Vec::new(), n));
    };
    let mut ranked = crowded_truncation(initial, n);
    while session.can_afford(n) {
        let xs = breed(
            n,
            problem,
            &cfg.variation,
            rng,
            |rng| {
                (
                    crowded_tournament(&ranked, rng),
                    crowded_tournament(&ranked, rng),
                )
            },
            &ranked.members,
        );
        let offspring = session
            .evaluate_batch(xs)
            .expect("generation fits in budget");
        let mut merged = ranked.members;
        merged.extend(offspring);
        ranked = crowded_truncation(merged, n);
    }
    Ok(finish(session, ranked.members, n))
}
