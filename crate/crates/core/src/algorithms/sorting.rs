//! Non-dominated sorting and crowding distance.

use crate::cht::Dominance;
use crate::scalar::Scalar;

/// Partitions `items` into fronts of indices under `compare`.
///
/// Front 0 holds the items no other item dominates, front 1 those dominated
/// only by front 0, and so on. Indices within a front are ascending.
pub fn fast_nondominated_sort<S, F>(items: &[S], compare: F) -> Vec<Vec<usize>>
where
    F: Fn(&S, &S) -> Dominance,
{
    let n = items.len();
    let mut dominated_by_count = vec![0usize; n];
    let mut dominates: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            match compare(&items[i], &items[j]) {
                Dominance::FirstDominates => {
                    dominates[i].push(j);
                    dominated_by_count[j] += 1;
                }
                Dominance::SecondDominates => {
                    dominates[j].push(i);
                    dominated_by_count[i] += 1;
                }
                Dominance::Neither => {}
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominates[i] {
                dominated_by_count[j] -= 1;
                if dominated_by_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    fronts
}

/// Front index of every item, from the output of [`fast_nondominated_sort`].
pub fn ranks_from_fronts(fronts: &[Vec<usize>], n: usize) -> Vec<usize> {
    let mut rank = vec![usize::MAX; n];
    for (r, front) in fronts.iter().enumerate() {
        for &i in front {
            rank[i] = r;
        }
    }
    rank
}

/// Crowding distance of each member of a front, in input order.
///
/// Extremes along every objective get infinity; interior members accumulate
/// neighbor gaps normalized by the objective's range within the front.
pub fn crowding_distance<T: Scalar>(front: &[&[T]]) -> Vec<T> {
    let n = front.len();
    if n <= 2 {
        return vec![T::infinity(); n];
    }
    let m = front[0].len();
    let mut distance = vec![T::zero(); n];
    let mut order: Vec<usize> = (0..n).collect();
    for k in 0..m {
        order.sort_by(|&a, &b| {
            front[a][k]
                .partial_cmp(&front[b][k])
                .unwrap()
                .then(a.cmp(&b))
        });
        let lo = front[order[0]][k];
        let hi = front[order[n - 1]][k];
        distance[order[0]] = T::infinity();
        distance[order[n - 1]] = T::infinity();
        let range = hi - lo;
        if range <= T::zero() {
            continue;
        }
        for w in 1..n - 1 {
            let i = order[w];
            if distance[i].is_finite() {
                distance[i] =
                    distance[i] + (front[order[w + 1]][k] - front[order[w - 1]][k]) / range;
            }
        }
    }
    distance
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cht::pareto_compare;
    use crate::model::{pareto_dominates, RngStream};

    fn pts(v: &[[f64; 2]]) -> Vec<Vec<f64>> {
        v.iter().map(|p| p.to_vec()).collect()
    }

    fn sort(points: &[Vec<f64>]) -> Vec<Vec<usize>> {
        fast_nondominated_sort(points, |a, b| pareto_compare(a, b))
    }

    #[test]
    fn chain_gives_singleton_fronts() {
        let p = pts(&[[3.0, 3.0], [1.0, 1.0], [2.0, 2.0]]);
        assert_eq!(sort(&p), vec![vec![1], vec![2], vec![0]]);
    }

    #[test]
    fn incomparable_set_is_one_front() {
        let p = pts(&[[0.0, 3.0], [1.0, 2.0], [2.0, 1.0], [3.0, 0.0]]);
        assert_eq!(sort(&p), vec![vec![0, 1, 2, 3]]);
    }

    /// Rank by repeatedly peeling the members nobody remaining dominates.
    fn brute_force_ranks(points: &[Vec<f64>]) -> Vec<usize> {
        let n = points.len();
        let mut rank = vec![usize::MAX; n];
        let mut r = 0;
        while rank.contains(&usize::MAX) {
            let remaining: Vec<usize> = (0..n).filter(|&i| rank[i] == usize::MAX).collect();
            let layer: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&i| {
                    !remaining
                        .iter()
                        .any(|&j| pareto_dominates(&points[j], &points[i]))
                })
                .collect();
            for i in layer {
                rank[i] = r;
            }
            r += 1;
        }
        rank
    }

    #[test]
    fn matches_brute_force_on_random_sets() {
        let mut rng = RngStream::new(17);
        for _ in 0..20 {
            let points: Vec<Vec<f64>> = (0..50)
                .map(|_| (0..3).map(|_| (rng.uniform() * 5.0).floor()).collect())
                .collect();
            let fronts = sort(&points);
            assert_eq!(ranks_from_fronts(&fronts, 50), brute_force_ranks(&points));
        }
    }

    #[test]
    fn crowding_examples() {
        let two: Vec<&[f64]> = vec![&[0.0, 1.0], &[1.0, 0.0]];
        assert!(crowding_distance(&two).iter().all(|d| d.is_infinite()));

        let line = pts(&[[0.0, 4.0], [1.0, 3.0], [2.0, 2.0], [3.0, 1.0], [4.0, 0.0]]);
        let refs: Vec<&[f64]> = line.iter().map(Vec::as_slice).collect();
        let d = crowding_distance(&refs);
        assert!(d[0].is_infinite() && d[4].is_infinite());
        assert_eq!(d[1], 1.0);
        assert_eq!(d[2], 1.0);
        assert_eq!(d[3], 1.0);

        let same = pts(&[[1.0, 1.0]; 4]);
        let refs: Vec<&[f64]> = same.iter().map(Vec::as_slice).collect();
        let d = crowding_distance(&refs);
        assert_eq!(d.iter().filter(|x| x.is_infinite()).count(), 2);
        assert_eq!(d.iter().filter(|&&x| x == 0.0).count(), 2);
    }
}
