//! Wilcoxon signed-rank and rank-sum tests.

/// Largest number of non-zero differences handled by the exact distribution.
pub const EXACT_MAX_N: usize = 25;

/// Outcome of a two-sided test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestOutcome {
    /// Two-sided p-value.
    pub p_value: f64,
    /// Positive when the first sample tends to be larger.
    pub direction: f64,
    /// Number of pairs that entered the test (zero differences removed).
    pub n: usize,
    pub exact: bool,
}

/// Average ranks (1-based) of `values`, with ties sharing the mean of their positions.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

fn tie_sizes(sorted_values: &[f64]) -> Vec<usize> {
    let mut sizes = Vec::new();
    let mut i = 0;
    while i < sorted_values.len() {
        let mut j = i;
        while j + 1 < sorted_values.len() && sorted_values[j + 1] == sorted_values[i] {
            j += 1;
        }
        sizes.push(j - i + 1);
        i = j + 1;
    }
    sizes
}

fn normal_sf(z: f64) -> f64 {
    0.5 * libm::erfc(z / std::f64::consts::SQRT_2)
}

/// Exact two-sided p-value of the signed-rank statistic.
///
/// Ranks are doubled so that average ranks become integers; the null
/// distribution of the doubled positive-rank sum is built by counting sign
/// patterns with a subset-sum recurrence.
pub fn signed_rank_exact_p(ranks: &[f64], w_plus: f64) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let total: usize = doubled.iter().sum();
    let mut counts = vec![0.0f64; total + 1];
    counts[0] = 1.0;
    let mut reach = 0;
    for &r in &doubled {
        for s in (0..=reach).rev() {
            if counts[s] > 0.0 {
                counts[s + r] += counts[s];
            }
        }
        reach += r;
    }
    let patterns = 2f64.powi(ranks.len() as i32);
    let w = (2.0 * w_plus).round() as usize;
    let lower: f64 = counts[..=w].iter().sum();
    let upper: f64 = counts[w..].iter().sum();
    (2.0 * lower.min(upper) / patterns).min(1.0)
}

/// Normal approximation with continuity and tie corrections.
pub fn signed_rank_normal_p(ranks: &[f64], w_plus: f64) -> f64 {
    let n = ranks.len() as f64;
    let mean = n * (n + 1.0) / 4.0;
    let mut abs_sorted = ranks.to_vec();
    abs_sorted.sort_by(f64::total_cmp);
    let ties: f64 = tie_sizes(&abs_sorted)
        .iter()
        .map(|&t| (t * t * t - t) as f64)
        .sum();
    let var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - ties / 48.0;
    if var <= 0.0 {
        return 1.0;
    }
    let z = ((w_plus - mean).abs() - 0.5).max(0.0) / var.sqrt();
    (2.0 * normal_sf(z)).min(1.0)
}

/// Paired signed-rank test on `x - y`. Zero differences are dropped.
pub fn signed_rank_test(x: &[f64], y: &[f64]) -> TestOutcome {
    assert_eq!(x.len(), y.len(), "signed-rank test needs paired samples");
    let d: Vec<f64> = x
        .iter()
        .zip(y)
        .map(|(a, b)| a - b)
        .filter(|d| *d != 0.0)
        .collect();
    if d.is_empty() {
        return TestOutcome {
            p_value: 1.0,
            direction: 0.0,
            n: 0,
            exact: true,
        };
    }
    let ranks = average_ranks(&d.iter().map(|v| v.abs()).collect::<Vec<_>>());
    let w_plus: f64 = d
        .iter()
        .zip(&ranks)
        .filter(|(v, _)| **v > 0.0)
        .map(|(_, r)| r)
        .sum();
    let w_total: f64 = ranks.iter().sum();
    let exact = d.len() <= EXACT_MAX_N;
    let p_value = if exact {
        signed_rank_exact_p(&ranks, w_plus)
    } else {
        signed_rank_normal_p(&ranks, w_plus)
    };
    TestOutcome {
        p_value,
        direction: w_plus - (w_total - w_plus),
        n: d.len(),
        exact,
    }
}

/// Unpaired rank-sum (Mann-Whitney) test, normal approximation with continuity and tie corrections.
pub fn rank_sum_test(x: &[f64], y: &[f64]) -> TestOutcome {
    let (n1, n2) = (x.len() as f64, y.len() as f64);
    let pooled: Vec<f64> = x.iter().chain(y).copied().collect();
    let ranks = average_ranks(&pooled);
    let r1: f64 = ranks[..x.len()].iter().sum();
    let u = r1 - n1 * (n1 + 1.0) / 2.0;
    let mean = n1 * n2 / 2.0;
    let mut sorted = pooled;
    sorted.sort_by(f64::total_cmp);
    let ties: f64 = tie_sizes(&sorted)
        .iter()
        .map(|&t| (t * t * t - t) as f64)
        .sum();
    let n = n1 + n2;
    let var = n1 * n2 / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
    let p_value = if var <= 0.0 {
        1.0
    } else {
        let z = ((u - mean).abs() - 0.5).max(0.0) / var.sqrt();
        (2.0 * normal_sf(z)).min(1.0)
    };
    TestOutcome {
        p_value,
        direction: u - mean,
        n: x.len() + y.len(),
        exact: false,
    }
}
