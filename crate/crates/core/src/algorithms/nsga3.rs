use crate::cht::ConstraintConfig;
use crate::model::{EvalSession, ProblemSpec, RngStream, Solution};
use crate::scalar::Scalar;

use super::decomposition::perpendicular_distance;
use super::{
    breed, constrained_fronts, constrained_tournament, finish, initialize, take_indices,
    AlgorithmConfig, ConfigError, RunResult,
};

const ASF_FLOOR: f64 = 1e-6;

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
fn solve<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    let tiny = T::lit(1e-12);
    for col in 0..n {
        let pivot =
            (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if !(a[pivot][col].abs() > tiny) {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                let v = a[col][k];
                a[row][k] = a[row][k] - factor * v;
            }
            let v = b[col];
            b[row] = b[row] - factor * v;
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let s = (row + 1..n).map(|k| a[row][k] * x[k]).sum::<T>();
        x[row] = (b[row] - s) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Axis intercepts of the hyperplane through the extreme points of `translated`
/// (objectives already shifted by the ideal point).
///
/// Falls back to the per-objective maximum over `first_front` when the extreme
/// points are degenerate or give a non-positive intercept.
pub fn hyperplane_intercepts<T: Scalar>(translated: &[Vec<T>], first_front: &[usize]) -> Vec<T> {
    let m = translated[0].len();
    let floor = T::lit(ASF_FLOOR);
    let extremes: Vec<Vec<T>> = (0..m)
        .map(|axis| {
            let asf = |f: &[T]| {
                f.iter()
                    .enumerate()
                    .map(|(i, &v)| if i == axis { v } else { v / floor })
                    .fold(T::neg_infinity(), T::max)
            };
            translated
                .iter()
                .min_by(|a, b| asf(a).partial_cmp(&asf(b)).unwrap())
                .expect("non-empty set")
                .clone()
        })
        .collect();
    let from_plane = solve(extremes, vec![T::one(); m]).and_then(|coef| {
        let intercepts: Vec<T> = coef.iter().map(|&c| T::one() / c).collect();
        intercepts
            .iter()
            .all(|&v| v.is_finite() && v > floor)
            .then_some(intercepts)
    });
    from_plane.unwrap_or_else(|| {
        (0..m)
            .map(|k| {
                let hi = first_front
                    .iter()
                    .map(|&i| translated[i][k])
                    .fold(T::neg_infinity(), T::max);
                if hi > floor {
                    hi
                } else {
                    T::one()
                }
            })
            .collect()
    })
}

/// NSGA-III environmental selection: constrained fronts, then reference-direction
/// niching on the last front when it is feasible.
pub fn niching_selection<T: Scalar>(
    merged: Vec<Solution<T>>,
    n: usize,
    weights: &[Vec<T>],
    rng: &mut RngStream,
) -> Vec<Solution<T>> {
    let fronts = constrained_fronts(&merged);
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    let mut last: &[usize] = &[];
    for front in &fronts {
        if chosen.len() + front.len() <= n {
            chosen.extend_from_slice(front);
            if chosen.len() == n {
                break;
            }
        } else {
            last = front;
            break;
        }
    }
    if chosen.len() == n || last.is_empty() {
        return take_indices(merged, &chosen);
    }
    if !merged[last[0]].is_feasible() {
        // An infeasible last front is filled by violation alone, ties in random order.
        let order = rng.permutation(last.len());
        let mut rest: Vec<usize> = order.into_iter().map(|k| last[k]).collect();
        rest.sort_by(|&a, &b| {
            merged[a]
                .effective_cv
                .partial_cmp(&merged[b].effective_cv)
                .unwrap()
        });
        chosen.extend(rest.into_iter().take(n - chosen.len()));
        return take_indices(merged, &chosen);
    }

    // candidate set = already chosen + the whole last front
    let candidates: Vec<usize> = chosen.iter().chain(last).copied().collect();
    let m = merged[0].f.len();
    let mut ideal = vec![T::infinity(); m];
    for &i in &candidates {
        for k in 0..m {
            ideal[k] = ideal[k].min(merged[i].f[k]);
        }
    }
    let translated: Vec<Vec<T>> = candidates
        .iter()
        .map(|&i| {
            merged[i]
                .f
                .iter()
                .zip(&ideal)
                .map(|(&f, &z)| f - z)
                .collect()
        })
        .collect();
    let position: std::collections::HashMap<usize, usize> = candidates
        .iter()
        .enumerate()
        .map(|(k, &i)| (i, k))
        .collect();
    let first_front: Vec<usize> = fronts[0]
        .iter()
        .filter_map(|i| position.get(i).copied())
        .collect();
    let intercepts = hyperplane_intercepts(&translated, &first_front);

    let association: Vec<(usize, T)> = translated
        .iter()
        .map(|f| {
            let normalized: Vec<T> = f.iter().zip(&intercepts).map(|(&v, &a)| v / a).collect();
            weights
                .iter()
                .enumerate()
                .map(|(j, w)| (j, perpendicular_distance(w, &normalized)))
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)))
                .expect("weights non-empty")
        })
        .collect();

    let mut niche = vec![0usize; weights.len()];
    for k in 0..chosen.len() {
        niche[association[k].0] += 1;
    }
    // members of the last front grouped by reference direction, in candidate order
    let mut pending: Vec<Vec<usize>> = vec![Vec::new(); weights.len()];
    for k in chosen.len()..candidates.len() {
        pending[association[k].0].push(k);
    }
    let mut active: Vec<bool> = vec![true; weights.len()];
    while chosen.len() < n {
        let min_count = (0..weights.len())
            .filter(|&j| active[j])
            .map(|j| niche[j])
            .min()
            .expect("some reference direction still has members");
        let ties: Vec<usize> = (0..weights.len())
            .filter(|&j| active[j] && niche[j] == min_count)
            .collect();
        let j = ties[rng.index(ties.len())];
        if pending[j].is_empty() {
            active[j] = false;
            continue;
        }
        let pick = if niche[j] == 0 {
            (0..pending[j].len())
                .min_by(|&a, &b| {
                    association[pending[j][a]]
                        .1
                        .partial_cmp(&association[pending[j][b]].1)
                        .unwrap()
                })
                .unwrap()
        } else {
            rng.index(pending[j].len())
        };
        let k = pending[j].remove(pick);
        chosen.push(candidates[k]);
        niche[j] += 1;
    }
    take_indices(merged, &chosen)
}

/// NSGA-III with constrained dominance.
pub fn run_cnsga3<T: Scalar>(
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
    let Some(mut pop) = initialize(&mut session, n, rng) else {
        return Ok(finish(session, Vec::new(), n));
    };
    while session.can_afford(n) {
        let xs = breed(
            n,
            problem,
            &cfg.variation,
            rng,
            |rng| {
                (
                    constrained_tournament(&pop, rng),
                    constrained_tournament(&pop, rng),
                )
            },
            &pop,
        );
        let offspring = session
            .evaluate_batch(xs)
            .expect("generation fits in budget");
        pop.extend(offspring);
        pop = niching_selection(pop, n, weights, rng);
    }
    Ok(finish(session, pop, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_simplex_has_unit_intercepts() {
        let pts = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![0.3, 0.3, 0.4],
        ];
        let a: Vec<f64> = hyperplane_intercepts(&pts, &[0, 1, 2, 3]);
        for v in a {
            assert!((v - 1.0).abs() < 1e-9, "{v}");
        }
    }

    #[test]
    fn scaled_simplex_intercepts() {
        let pts = vec![vec![2.0, 0.0], vec![0.0, 5.0], vec![1.0, 2.5]];
        let a: Vec<f64> = hyperplane_intercepts(&pts, &[0, 1, 2]);
        assert!(
            (a[0] - 2.0).abs() < 1e-9 && (a[1] - 5.0).abs() < 1e-9,
            "{a:?}"
        );
    }

    #[test]
    fn degenerate_plane_falls_back_to_front_maxima() {
        // both extremes collapse onto one point
        let pts = vec![vec![1.0, 1.0], vec![3.0, 4.0]];
        let a = hyperplane_intercepts(&pts, &[0, 1]);
        assert_eq!(a, vec![3.0, 4.0]);
    }

    #[test]
    fn linear_solver() {
        let x: Vec<f64> = solve(vec![vec![2.0, 1.0], vec![1.0, 3.0]], vec![3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-12 && (x[1] - 1.4).abs() < 1e-12);
        assert!(solve(vec![vec![1.0, 2.0], vec![2.0, 4.0]], vec![1.0, 1.0]).is_none());
    }
}
