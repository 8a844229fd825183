//! Scalarizing functions and weight-vector geometry shared by the decomposition-based algorithms.

use crate::scalar::Scalar;

/// Smallest weight component used by the Tchebycheff function.
pub const WEIGHT_FLOOR: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum Aggregation {
    #[default]
    Tchebycheff,
    /// Penalty-based boundary intersection with penalty `theta`.
    Pbi { theta: f64 },
}

impl Aggregation {
    pub fn value<T: Scalar>(&self, weight: &[T], f: &[T], ideal: &[T]) -> T {
        match *self {
            Aggregation::Tchebycheff => tchebycheff(weight, f, ideal),
            Aggregation::Pbi { theta } => pbi(weight, f, ideal, T::lit(theta)),
        }
    }
}

/// `max_i max(w_i, 1e-6) * |f_i - z_i|`.
pub fn tchebycheff<T: Scalar>(weight: &[T], f: &[T], ideal: &[T]) -> T {
    let floor = T::lit(WEIGHT_FLOOR);
    weight
        .iter()
        .zip(f)
        .zip(ideal)
        .map(|((&w, &fi), &zi)| w.max(floor) * (fi - zi).abs())
        .fold(T::neg_infinity(), T::max)
}

/// Tchebycheff variant dividing by the weight, used to rank members of a subregion.
pub fn inverted_tchebycheff<T: Scalar>(weight: &[T], f: &[T], ideal: &[T]) -> T {
    let floor = T::lit(WEIGHT_FLOOR);
    weight
        .iter()
        .zip(f)
        .zip(ideal)
        .map(|((&w, &fi), &zi)| (fi - zi).abs() / w.max(floor))
        .fold(T::neg_infinity(), T::max)
}

pub fn pbi<T: Scalar>(weight: &[T], f: &[T], ideal: &[T], theta: T) -> T {
    let norm = weight.iter().map(|&w| w * w).sum::<T>().sqrt();
    let d1 = weight
        .iter()
        .zip(f)
        .zip(ideal)
        .map(|((&w, &fi), &zi)| (fi - zi) * w)
        .sum::<T>()
        / norm;
    let d2 = weight
        .iter()
        .zip(f)
        .zip(ideal)
        .map(|((&w, &fi), &zi)| {
            let d = fi - zi - d1 * w / norm;
            d * d
        })
        .sum::<T>()
        .sqrt();
    d1 + theta * d2
}

/// Distance from `point` to the ray spanned by `direction`.
pub fn perpendicular_distance<T: Scalar>(direction: &[T], point: &[T]) -> T {
    let dd = direction.iter().map(|&w| w * w).sum::<T>();
    let proj = direction.iter().zip(point).map(|(&w, &p)| w * p).sum::<T>() / dd;
    direction
        .iter()
        .zip(point)
        .map(|(&w, &p)| {
            let d = p - proj * w;
            d * d
        })
        .sum::<T>()
        .sqrt()
}

/// Cosine of the angle between two vectors; zero if either is the origin.
pub fn cosine<T: Scalar>(a: &[T], b: &[T]) -> T {
    let dot = a.iter().zip(b).map(|(&x, &y)| x * y).sum::<T>();
    let na = a.iter().map(|&x| x * x).sum::<T>().sqrt();
    let nb = b.iter().map(|&x| x * x).sum::<T>().sqrt();
    if na.is_zero() || nb.is_zero() {
        T::zero()
    } else {
        dot / (na * nb)
    }
}

/// Index of the weight with the smallest angle to `point` (lowest index on ties).
pub fn closest_by_angle<T: Scalar>(weights: &[Vec<T>], point: &[T]) -> usize {
    let mut best = 0;
    let mut best_cos = T::neg_infinity();
    for (j, w) in weights.iter().enumerate() {
        let c = cosine(w, point);
        if c > best_cos {
            best_cos = c;
            best = j;
        }
    }
    best
}

/// Component-wise min and max over a set of points.
pub fn bounds<'a, T: Scalar>(
    points: impl IntoIterator<Item = &'a [T]>,
    m: usize,
) -> (Vec<T>, Vec<T>) {
    let mut lo = vec![T::infinity(); m];
    let mut hi = vec![T::neg_infinity(); m];
    for p in points {
        for k in 0..m {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    (lo, hi)
}

/// Maps `f` into `[0, 1]^m` using `(ideal, nadir)`, flooring each range at 1e-12.
pub fn normalize<T: Scalar>(f: &[T], ideal: &[T], nadir: &[T]) -> Vec<T> {
    let floor = T::lit(1e-12);
    f.iter()
        .zip(ideal)
        .zip(nadir)
        .map(|((&v, &lo), &hi)| (v - lo) / (hi - lo).max(floor))
        .collect()
}

/// The `t` nearest weights (Euclidean) of every weight, itself included first.
pub fn neighborhoods<T: Scalar>(weights: &[Vec<T>], t: usize) -> Vec<Vec<usize>> {
    let t = t.min(weights.len());
    weights
        .iter()
        .map(|wi| {
            let mut order: Vec<(T, usize)> = weights
                .iter()
                .enumerate()
                .map(|(j, wj)| {
                    let d = wi
                        .iter()
                        .zip(wj)
                        .map(|(&a, &b)| (a - b) * (a - b))
                        .sum::<T>();
                    (d, j)
                })
                .collect();
            order.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            order.into_iter().take(t).map(|(_, j)| j).collect()
        })
        .collect()
}
