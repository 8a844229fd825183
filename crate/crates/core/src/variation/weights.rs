use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layering {
    Single { divisions: usize },
    Two { boundary: usize, inner: usize },
}

/// Reference directions on the unit simplex.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVectorSet<T> {
    pub vectors: Vec<Vec<T>>,
    pub layering: Layering,
}

impl<T> WeightVectorSet<T> {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors.first().map_or(0, Vec::len)
    }
}

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn compositions(m: usize, h: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, slots: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for v in 0..=left {
            prefix.push(v);
            rec(left - v, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(binomial(h + m - 1, m - 1));
    rec(h, m, &mut Vec::with_capacity(m), &mut out);
    out
}

/// Das-Dennis simplex lattice with `divisions` steps per axis.
pub fn das_dennis<T: Scalar>(m: usize, divisions: usize) -> WeightVectorSet<T> {
    assert!(
        m >= 2 && divisions >= 1,
        "das_dennis needs m >= 2 and H >= 1"
    );
    let h = T::lit(divisions as f64);
    let vectors = compositions(m, divisions)
        .into_iter()
        .map(|c| c.into_iter().map(|k| T::lit(k as f64) / h).collect())
        .collect();
    WeightVectorSet {
        vectors,
        layering: Layering::Single { divisions },
    }
}

/// Boundary lattice plus an inner lattice shrunk halfway toward the centroid.
pub fn two_layer<T: Scalar>(m: usize, boundary: usize, inner: usize) -> WeightVectorSet<T> {
    let mut vectors = das_dennis::<T>(m, boundary).vectors;
    let half = T::lit(0.5);
    let shift = T::one() / T::lit(2.0 * m as f64);
    vectors.extend(
        das_dennis::<T>(m, inner)
            .vectors
            .into_iter()
            .map(|w| w.into_iter().map(|v| v * half + shift).collect()),
    );
    WeightVectorSet {
        vectors,
        layering: Layering::Two { boundary, inner },
    }
}

/// Lattice for a requested population size: the largest single lattice not
/// exceeding `n`, plus the largest inner lattice fitting the remainder when
/// the boundary lattice alone has fewer than `m` interior points.
///
/// Yields exactly 91, 91, 210 and 275 vectors for `(m, n)` of `(2, 91)`,
/// `(3, 91)`, `(5, 210)` and `(10, 275)`.
pub fn lattice_for_population<T: Scalar>(m: usize, n: usize) -> WeightVectorSet<T> {
    assert!(
        m >= 2 && n >= m,
        "population {n} too small for {m} objectives"
    );
    let count = |h: usize| binomial(h + m - 1, m - 1);
    let mut h1 = 1;
    while count(h1 + 1) <= n {
        h1 += 1;
    }
    if h1 >= m {
        return das_dennis(m, h1);
    }
    let rest = n - count(h1);
    let mut h2 = 0;
    while count(h2 + 1) <= rest {
        h2 += 1;
    }
    if h2 == 0 {
        das_dennis(m, h1)
    } else {
        two_layer(m, h1, h2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_simplex(set: &WeightVectorSet<f64>) {
        for w in &set.vectors {
            assert!(w.iter().all(|&v| v >= 0.0));
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        for (i, a) in set.vectors.iter().enumerate() {
            for b in &set.vectors[i + 1..] {
                assert!(
                    a.iter().zip(b).any(|(x, y)| (x - y).abs() > 1e-12),
                    "duplicate {a:?}"
                );
            }
        }
    }

    #[test]
    fn lattice_counts_match_binomials() {
        for m in 2..=10 {
            for h in 1..=(if m > 5 { 4 } else { 12 }) {
                assert_eq!(
                    das_dennis::<f64>(m, h).len(),
                    binomial(h + m - 1, m - 1),
                    "m={m} h={h}"
                );
            }
        }
        assert_eq!(das_dennis::<f64>(2, 90).len(), 91);
        assert_eq!(das_dennis::<f64>(3, 12).len(), 91);
        assert_eq!(das_dennis::<f64>(5, 6).len(), 210);
    }

    #[test]
    fn lattice_values_are_grid_points() {
        let set = das_dennis::<f64>(3, 4);
        check_simplex(&set);
        for w in &set.vectors {
            for v in w {
                assert!(((v * 4.0).round() - v * 4.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn two_layer_for_ten_objectives() {
        let set = two_layer::<f64>(10, 3, 2);
        assert_eq!(set.len(), 220 + 55);
        check_simplex(&set);
    }

    #[test]
    fn population_lattices() {
        assert_eq!(
            lattice_for_population::<f64>(2, 91).layering,
            Layering::Single { divisions: 90 }
        );
        assert_eq!(
            lattice_for_population::<f64>(3, 91).layering,
            Layering::Single { divisions: 12 }
        );
        assert_eq!(
            lattice_for_population::<f64>(5, 210).layering,
            Layering::Single { divisions: 6 }
        );
        assert_eq!(
            lattice_for_population::<f64>(10, 275).layering,
            Layering::Two {
                boundary: 3,
                inner: 2
            }
        );
        assert_eq!(lattice_for_population::<f64>(2, 80).len(), 80);
        assert_eq!(lattice_for_population::<f64>(3, 105).len(), 105);
        assert_eq!(lattice_for_population::<f64>(4, 143).len(), 120);
        assert_eq!(lattice_for_population::<f64>(5, 212).len(), 210);
    }

    #[test]
    fn works_in_single_precision() {
        let set = das_dennis::<f32>(3, 12);
        assert_eq!(set.len(), 91);
        assert!(set
            .vectors
            .iter()
            .all(|w| (w.iter().sum::<f32>() - 1.0).abs() < 1e-6));
    }
}
