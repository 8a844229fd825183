//! Two-archive constrained evolution: a convergence archive that honors
//! feasibility and a diversity archive that ignores it.

use std::cmp::Ordering;

use crate::cht::{pareto_compare, ConstraintConfig, Dominance};
use crate::model::{EvalSession, ProblemSpec, RngStream, Solution};
use crate::scalar::Scalar;

use super::decomposition::{bounds, closest_by_angle, inverted_tchebycheff, normalize};
use super::{
    breed, constrained_tournament, fast_nondominated_sort, finish, initialize, take_indices,
    AlgorithmConfig, ConfigError, RunResult,
};

/// Normalized objectives of `members` and the subregion each falls in.
struct Regions<T> {
    normalized: Vec<Vec<T>>,
    region: Vec<usize>,
}

fn regions<T: Scalar>(
    members: &[&Solution<T>],
    scope: &[&Solution<T>],
    weights: &[Vec<T>],
) -> Regions<T> {
    let m = weights[0].len();
    let (ideal, nadir) = bounds(scope.iter().map(|s| s.f.as_slice()), m);
    let normalized: Vec<Vec<T>> = members
        .iter()
        .map(|s| normalize(&s.f, &ideal, &nadir))
        .collect();
    let region = normalized
        .iter()
        .map(|f| closest_by_angle(weights, f))
        .collect();
    Regions { normalized, region }
}

fn origin<T: Scalar>(m: usize) -> Vec<T> {
    vec![T::zero(); m]
}

/// Convergence-archive update over the hybrid set `CA ∪ offspring`.
pub fn update_ca<T: Scalar>(
    hybrid: Vec<Solution<T>>,
    n: usize,
    weights: &[Vec<T>],
) -> Vec<Solution<T>> {
    let m = weights[0].len();
    let zero = origin::<T>(m);
    let (feasible, infeasible): (Vec<usize>, Vec<usize>) =
        (0..hybrid.len()).partition(|&i| hybrid[i].is_feasible());

    if feasible.len() == n {
        return take_indices(hybrid, &feasible);
    }

    if feasible.len() > n {
        let objs: Vec<&[T]> = feasible.iter().map(|&i| hybrid[i].f.as_slice()).collect();
        let mut selected: Vec<usize> = Vec::new();
        for front in fast_nondominated_sort(&objs, |a, b| pareto_compare(a, b)) {
            if selected.len() >= n {
                break;
            }
            selected.extend(front.into_iter().map(|k| feasible[k]));
        }
        let members: Vec<&Solution<T>> = selected.iter().map(|&i| &hybrid[i]).collect();
        let reg = regions(&members, &members, weights);
        let mut count = vec![0usize; weights.len()];
        for &r in &reg.region {
            count[r] += 1;
        }
        let mut alive = vec![true; selected.len()];
        let mut remaining = selected.len();
        while remaining > n {
            // most crowded subregion, lowest index on ties
            let crowded = (0..count.len())
                .max_by(|&a, &b| count[a].cmp(&count[b]).then(b.cmp(&a)))
                .unwrap();
            let worst = (0..selected.len())
                .filter(|&k| alive[k] && reg.region[k] == crowded)
                .max_by(|&a, &b| {
                    let ga = inverted_tchebycheff(&weights[crowded], &reg.normalized[a], &zero);
                    let gb = inverted_tchebycheff(&weights[crowded], &reg.normalized[b], &zero);
                    ga.partial_cmp(&gb).unwrap().then(a.cmp(&b))
                })
                .expect("crowded subregion has members");
            alive[worst] = false;
            count[crowded] -= 1;
            remaining -= 1;
        }
        let keep: Vec<usize> = (0..selected.len())
            .filter(|&k| alive[k])
            .map(|k| selected[k])
            .collect();
        return take_indices(hybrid, &keep);
    }

    // too few feasible: fill with infeasible ones ranked on (violation, subregion aggregation)
    let all: Vec<&Solution<T>> = hybrid.iter().collect();
    let members: Vec<&Solution<T>> = infeasible.iter().map(|&i| &hybrid[i]).collect();
    let reg = regions(&members, &all, weights);
    let criteria: Vec<(T, T)> = (0..members.len())
        .map(|k| {
            let g = inverted_tchebycheff(&weights[reg.region[k]], &reg.normalized[k], &zero);
            (members[k].effective_cv, g)
        })
        .collect();
    let pairs: Vec<[T; 2]> = criteria.iter().map(|&(a, b)| [a, b]).collect();
    let mut keep = feasible.clone();
    for mut front in fast_nondominated_sort(&pairs, |a, b| pareto_compare(a, b)) {
        let room = n - keep.len();
        if room == 0 {
            break;
        }
        if front.len() > room {
            front.sort_by(|&a, &b| {
                let (ca, ga) = criteria[a];
                let (cb, gb) = criteria[b];
                ca.partial_cmp(&cb)
                    .unwrap()
                    .then(ga.partial_cmp(&gb).unwrap_or(Ordering::Equal))
                    .then(a.cmp(&b))
            });
            front.truncate(room);
        }
        keep.extend(front.into_iter().map(|k| infeasible[k]));
    }
    take_indices(hybrid, &keep)
}

/// Diversity-archive update over `DA ∪ offspring`, steered toward subregions the CA covers sparsely.
///
/// Constraint information is never read.
pub fn update_da<T: Scalar>(
    ca: &[Solution<T>],
    hybrid: Vec<Solution<T>>,
    n: usize,
    weights: &[Vec<T>],
) -> Vec<Solution<T>> {
    let m = weights[0].len();
    let zero = origin::<T>(m);
    let scope: Vec<&Solution<T>> = hybrid.iter().chain(ca).collect();
    let hyb: Vec<&Solution<T>> = hybrid.iter().collect();
    let ca_refs: Vec<&Solution<T>> = ca.iter().collect();
    let reg = regions(&hyb, &scope, weights);
    let ca_reg = regions(&ca_refs, &scope, weights);
    let mut ca_count = vec![0usize; weights.len()];
    for &r in &ca_reg.region {
        ca_count[r] += 1;
    }
    let mut by_region: Vec<Vec<usize>> = vec![Vec::new(); weights.len()];
    for (k, &r) in reg.region.iter().enumerate() {
        by_region[r].push(k);
    }

    let mut picked: Vec<usize> = Vec::with_capacity(n);
    let mut level = 1;
    while picked.len() < n {
        let mut progress = false;
        for j in 0..weights.len() {
            if picked.len() == n {
                break;
            }
            if ca_count[j] >= level || by_region[j].is_empty() {
                continue;
            }
            let candidates = &by_region[j];
            let nondominated: Vec<usize> = candidates
                .iter()
                .copied()
                .filter(|&a| {
                    !candidates.iter().any(|&b| {
                        pareto_compare(&hybrid[b].f, &hybrid[a].f) == Dominance::FirstDominates
                    })
                })
                .collect();
            let best = nondominated
                .into_iter()
                .min_by(|&a, &b| {
                    let ga = inverted_tchebycheff(&weights[j], &reg.normalized[a], &zero);
                    let gb = inverted_tchebycheff(&weights[j], &reg.normalized[b], &zero);
                    ga.partial_cmp(&gb).unwrap().then(a.cmp(&b))
                })
                .expect("a finite set has a non-dominated member");
            by_region[j].retain(|&k| k != best);
            picked.push(best);
            progress = true;
        }
        if !progress && level > ca.len() {
            break;
        }
        level += 1;
    }
    take_indices(hybrid, &picked)
}

fn pareto_tournament<T: Scalar>(pool: &[Solution<T>], rng: &mut RngStream) -> usize {
    let a = rng.index(pool.len());
    let b = rng.index(pool.len());
    match pareto_compare(&pool[a].f, &pool[b].f) {
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

/// Share of each archive among the non-dominated members of `CA ∪ DA`.
fn nondominated_shares<T: Scalar>(ca: &[Solution<T>], da: &[Solution<T>]) -> (f64, f64) {
    let objs: Vec<&[T]> = ca.iter().chain(da).map(|s| s.f.as_slice()).collect();
    let fronts = fast_nondominated_sort(&objs, |a, b| pareto_compare(a, b));
    let total = objs.len() as f64;
    let first = fronts.first().map(Vec::as_slice).unwrap_or(&[]);
    let in_ca = first.iter().filter(|&&i| i < ca.len()).count() as f64;
    let in_da = first.len() as f64 - in_ca;
    (in_ca / total, in_da / total)
}

/// C-TAEA. The convergence archive is the returned population.
pub fn run_ctaea<T: Scalar>(
    problem: &ProblemSpec<T>,
    cfg: &AlgorithmConfig<T>,
    cht: &ConstraintConfig<T>,
    max_evaluations: u64,
    rng: &mut RngStream,
    trace: bool,
) -> Result<RunResult<T>, ConfigError> {
    cfg.validate(problem.m())?;
    let n = cfg.population_size;
    let weights = cfg.weight_vectors();
    let mut session = EvalSession::new(problem, cht, max_evaluations, trace);
    let Some(initial) = initialize(&mut session, n, rng) else {
        return Ok(finish(session, Vec::new(), n));
    };
    let mut ca = update_ca(initial.clone(), n, weights);
    let mut da = update_da(&ca, initial, n, weights);

    while session.can_afford(n) {
        let (rho_c, rho_d) = nondominated_shares(&ca, &da);
        let mut parents: Vec<Solution<T>> = Vec::with_capacity(2 * n);
        let pick_from = |from_ca: bool, rng: &mut RngStream, parents: &mut Vec<Solution<T>>| {
            let s = if from_ca && !ca.is_empty() || da.is_empty() {
                ca[constrained_tournament(&ca, rng)].clone()
            } else {
                da[pareto_tournament(&da, rng)].clone()
            };
            parents.push(s);
            parents.len() - 1
        };
        let mut pairs = Vec::with_capacity(n);
        for _ in 0..n.div_ceil(2) {
            let first = pick_from(rho_c > rho_d, rng, &mut parents);
            let second_from_ca = rng.coin(rho_c);
            let second = pick_from(second_from_ca, rng, &mut parents);
            pairs.push((first, second));
        }
        let mut next = pairs.into_iter();
        let xs = breed(
            n,
            problem,
            &cfg.variation,
            rng,
            |_| next.next().expect("one pair per two children"),
            &parents,
        );
        let offspring = session
            .evaluate_batch(xs)
            .expect("generation fits in budget");

        let mut hybrid_ca = ca;
        hybrid_ca.extend(offspring.iter().cloned());
        ca = update_ca(hybrid_ca, n, weights);
        let mut hybrid_da = da;
        hybrid_da.extend(offspring);
        da = update_da(&ca, hybrid_da, n, weights);
    }
    Ok(finish(session, ca, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cht::{effective_cv, ChtMode};
    use crate::variation::das_dennis;

    fn sol(f: Vec<f64>, cv: f64, idx: u64) -> Solution<f64> {
        Solution {
            x: vec![],
            f,
            c: vec![cv],
            cv,
            effective_cv: effective_cv(cv, ChtMode::TrueCv),
            eval_index: idx,
        }
    }

    #[test]
    fn exactly_n_feasible_nondominated_become_the_archive() {
        let w = das_dennis::<f64>(2, 4).vectors;
        let front: Vec<Solution<f64>> = (0..5)
            .map(|i| sol(vec![i as f64, 4.0 - i as f64], 0.0, i))
            .collect();
        let mut hybrid = front.clone();
        hybrid.push(sol(vec![0.0, 0.0], 2.0, 10));
        hybrid.push(sol(vec![1.0, 1.0], 0.5, 11));
        let ca = update_ca(hybrid, 5, &w);
        assert_eq!(ca, front);
    }

    #[test]
    fn surplus_feasible_are_thinned_to_capacity() {
        let w = das_dennis::<f64>(2, 3).vectors;
        let hybrid: Vec<Solution<f64>> = (0..9)
            .map(|i| sol(vec![i as f64, 8.0 - i as f64], 0.0, i))
            .collect();
        let ca = update_ca(hybrid, 4, &w);
        assert_eq!(ca.len(), 4);
        assert!(ca.iter().all(|s| s.is_feasible()));
    }

    #[test]
    fn shortfall_is_filled_with_least_violating() {
        let w = das_dennis::<f64>(2, 2).vectors;
        let hybrid = vec![
            sol(vec![1.0, 1.0], 0.0, 0),
            sol(vec![0.5, 0.5], 3.0, 1),
            sol(vec![0.5, 0.5], 0.1, 2),
            sol(vec![0.5, 0.5], 1.0, 3),
        ];
        let ca = update_ca(hybrid, 3, &w);
        let idx: Vec<u64> = ca.iter().map(|s| s.eval_index).collect();
        assert_eq!(idx, vec![0, 2, 3]);
    }

    #[test]
    fn diversity_archive_ignores_constraints() {
        let w = das_dennis::<f64>(2, 5).vectors;
        let mut rng = RngStream::new(5);
        let ca: Vec<Solution<f64>> = (0..6)
            .map(|i| sol(vec![rng.uniform(), rng.uniform()], 0.0, i))
            .collect();
        let hybrid: Vec<Solution<f64>> = (0..12)
            .map(|i| {
                sol(
                    vec![rng.uniform(), rng.uniform()],
                    if i % 3 == 0 { 0.0 } else { 0.4 },
                    100 + i,
                )
            })
            .collect();
        let shifted: Vec<Solution<f64>> = hybrid
            .iter()
            .map(|s| {
                let cv = s.cv + 1e6;
                Solution {
                    c: vec![cv],
                    cv,
                    effective_cv: cv,
                    ..s.clone()
                }
            })
            .collect();
        let a: Vec<u64> = update_da(&ca, hybrid, 6, &w)
            .iter()
            .map(|s| s.eval_index)
            .collect();
        let b: Vec<u64> = update_da(&ca, shifted, 6, &w)
            .iter()
            .map(|s| s.eval_index)
            .collect();
        assert_eq!(a, b);
        assert_eq!(a.len(), 6);
    }

    #[test]
    fn diversity_archive_never_exceeds_capacity_or_input() {
        let w = das_dennis::<f64>(2, 5).vectors;
        let hybrid: Vec<Solution<f64>> = (0..4)
            .map(|i| sol(vec![i as f64, 3.0 - i as f64], 0.0, i))
            .collect();
        assert_eq!(update_da(&[], hybrid.clone(), 6, &w).len(), 4);
        assert_eq!(update_da(&hybrid, hybrid.clone(), 2, &w).len(), 2);
    }
}
