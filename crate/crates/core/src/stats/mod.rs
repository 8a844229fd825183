//! Pairwise comparison of metric samples: Wilcoxon verdicts, Vargha-Delaney
//! A12 effect sizes, and median/IQR summaries.

mod wilcoxon;

use std::fmt;

use crate::metrics::MetricKind;

pub use wilcoxon::{
    average_ranks, rank_sum_test, signed_rank_exact_p, signed_rank_normal_p, signed_rank_test,
    TestOutcome, EXACT_MAX_N,
};

/// Significance level.
pub const ALPHA: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    LowerBetter,
    HigherBetter,
}

impl From<MetricKind> for Orientation {
    fn from(kind: MetricKind) -> Self {
        if kind.higher_is_better() {
            Orientation::HigherBetter
        } else {
            Orientation::LowerBetter
        }
    }
}

/// Verdict for the first (baseline) sample against the second.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    /// The baseline is significantly better.
    Better,
    /// The baseline is significantly worse.
    Worse,
    Equal,
}

impl Verdict {
    pub fn symbol(self) -> char {
        match self {
            Verdict::Better => '+',
            Verdict::Worse => '-',
            Verdict::Equal => '=',
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Verdict::Better => Verdict::Worse,
            Verdict::Worse => Verdict::Better,
            Verdict::Equal => Verdict::Equal,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Which two-sample test decides the verdict.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TestKind {
    /// Paired by seed index.
    #[default]
    SignedRank,
    RankSum,
}

/// Linear-interpolation quantile (type 7) of an already sorted sample.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Median and interquartile range.
pub fn median_iqr(sample: &[f64]) -> (f64, f64) {
    let mut s = sample.to_vec();
    s.sort_by(f64::total_cmp);
    (
        quantile_sorted(&s, 0.5),
        quantile_sorted(&s, 0.75) - quantile_sorted(&s, 0.25),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum A12Category {
    Equal,
    Small,
    Medium,
    Large,
}

impl A12Category {
    pub fn from_value(a12: f64) -> Self {
        let v = a12.max(1.0 - a12);
        if v < 0.56 {
            A12Category::Equal
        } else if v < 0.64 {
            A12Category::Small
        } else if v < 0.71 {
            A12Category::Medium
        } else {
            A12Category::Large
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            A12Category::Equal => "equal",
            A12Category::Small => "small",
            A12Category::Medium => "medium",
            A12Category::Large => "large",
        }
    }
}

/// Vargha-Delaney A12: probability that a draw from `x` exceeds one from `y`, ties counting half.
pub fn a12(x: &[f64], y: &[f64]) -> (f64, A12Category) {
    assert!(
        !x.is_empty() && !y.is_empty(),
        "A12 needs non-empty samples"
    );
    let mut wins2 = 0u64;
    for a in x {
        for b in y {
            wins2 += match a.partial_cmp(b) {
                Some(std::cmp::Ordering::Greater) => 2,
                Some(std::cmp::Ordering::Equal) => 1,
                _ => 0,
            };
        }
    }
    let value = wins2 as f64 / (2 * x.len() * y.len()) as f64;
    (value, A12Category::from_value(value))
}

/// Two-sided verdict for `x` (baseline) against `y`.
///
/// When significant, the sign comes from comparing medians under `orientation`;
/// equal medians fall back to the direction of the test statistic.
pub fn compare_samples(
    x: &[f64],
    y: &[f64],
    orientation: Orientation,
    test: TestKind,
) -> (Verdict, f64) {
    let outcome = match test {
        TestKind::SignedRank => signed_rank_test(x, y),
        TestKind::RankSum => rank_sum_test(x, y),
    };
    if outcome.p_value >= ALPHA {
        return (Verdict::Equal, outcome.p_value);
    }
    let (mx, _) = median_iqr(x);
    let (my, _) = median_iqr(y);
    let x_larger = if mx != my {
        mx > my
    } else {
        outcome.direction > 0.0
    };
    let verdict = match (x_larger, orientation) {
        (true, Orientation::HigherBetter) | (false, Orientation::LowerBetter) => Verdict::Better,
        _ => Verdict::Worse,
    };
    (verdict, outcome.p_value)
}

/// Signed-rank verdict with the default level.
pub fn wilcoxon_signed_rank(x: &[f64], y: &[f64], orientation: Orientation) -> Verdict {
    compare_samples(x, y, orientation, TestKind::SignedRank).0
}

/// Comparison of a baseline against a variant on one problem and metric.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonSummary {
    pub problem: String,
    pub m: usize,
    pub metric: MetricKind,
    pub baseline: String,
    pub variant: String,
    pub verdict: Verdict,
    pub p_value: f64,
    pub a12: f64,
    pub a12_category: A12Category,
    pub baseline_median: f64,
    pub baseline_iqr: f64,
    pub variant_median: f64,
    pub variant_iqr: f64,
}

impl ComparisonSummary {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        problem: &str,
        m: usize,
        metric: MetricKind,
        baseline: &str,
        variant: &str,
        x: &[f64],
        y: &[f64],
        test: TestKind,
    ) -> Self {
        let (verdict, p_value) = compare_samples(x, y, metric.into(), test);
        let (a12, a12_category) = a12(x, y);
        let (baseline_median, baseline_iqr) = median_iqr(x);
        let (variant_median, variant_iqr) = median_iqr(y);
        Self {
            problem: problem.to_string(),
            m,
            metric,
            baseline: baseline.to_string(),
            variant: variant.to_string(),
            verdict,
            p_value,
            a12,
            a12_category,
            baseline_median,
            baseline_iqr,
            variant_median,
            variant_iqr,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn median_iqr_examples() {
        assert_eq!(median_iqr(&[1.0, 2.0, 3.0]), (2.0, 1.0));
        assert_eq!(median_iqr(&[4.0; 7]), (4.0, 0.0));
        assert_eq!(median_iqr(&[4.0, 1.0, 3.0, 2.0]), (2.5, 3.25 - 1.75));
    }

    #[test]
    fn a12_examples() {
        assert_eq!(a12(&[1.0; 5], &[1.0; 5]), (0.5, A12Category::Equal));
        assert_eq!(a12(&[5.0, 6.0], &[1.0, 2.0]), (1.0, A12Category::Large));
        assert_eq!(a12(&[1.0, 2.0], &[5.0, 6.0]), (0.0, A12Category::Large));
    }

    #[test]
    fn a12_band_edges() {
        assert_eq!(A12Category::from_value(0.5599999), A12Category::Equal);
        assert_eq!(A12Category::from_value(0.56), A12Category::Small);
        assert_eq!(A12Category::from_value(0.60), A12Category::Small);
        assert_eq!(A12Category::from_value(0.64), A12Category::Medium);
        assert_eq!(A12Category::from_value(0.71), A12Category::Large);
        assert_eq!(A12Category::from_value(0.29), A12Category::Large);
        assert_eq!(A12Category::from_value(0.45), A12Category::Equal);
        // 0.56 reached exactly through a sample: 14 wins of 25
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let y = [0.5, 1.5, 2.5, 3.5, 5.5];
        let (v, _) = a12(&x, &y);
        assert_eq!(v, 14.0 / 25.0);
        assert_eq!(a12(&x, &y).1, A12Category::Small);
    }

    #[test]
    fn verdict_orientation() {
        let y: Vec<f64> = (0..31).map(|i| i as f64 * 0.37).collect();
        let x: Vec<f64> = y.iter().map(|v| v + 1.0).collect();
        assert_eq!(
            wilcoxon_signed_rank(&x, &y, Orientation::LowerBetter),
            Verdict::Worse
        );
        assert_eq!(
            wilcoxon_signed_rank(&x, &y, Orientation::HigherBetter),
            Verdict::Better
        );
        assert_eq!(
            wilcoxon_signed_rank(&x, &x, Orientation::LowerBetter),
            Verdict::Equal
        );
        let five: Vec<f64> = (0..5).map(f64::from).collect();
        let shifted: Vec<f64> = five.iter().map(|v| v + 1.0).collect();
        assert_eq!(
            wilcoxon_signed_rank(&shifted, &five, Orientation::LowerBetter),
            Verdict::Equal
        );
    }

    #[test]
    fn summary_fields() {
        let x = vec![1.0, 2.0, 3.0];
        let s = ComparisonSummary::new(
            "C1-DTLZ1",
            2,
            MetricKind::Igd,
            "true",
            "crisp",
            &x,
            &x,
            TestKind::SignedRank,
        );
        assert_eq!(s.verdict, Verdict::Equal);
        assert_eq!((s.baseline_median, s.variant_iqr), (2.0, 1.0));
        assert_eq!(s.a12_category, A12Category::Equal);
    }

    fn sample() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(prop_oneof![(0..8).prop_map(f64::from), -5.0..5.0f64], 1..15)
    }

    proptest! {
        #[test]
        fn a12_is_complementary(x in sample(), y in sample()) {
            prop_assert_eq!(a12(&x, &y).0 + a12(&y, &x).0, 1.0);
        }

        #[test]
        fn a12_is_rank_invariant(x in sample(), y in sample()) {
            let t = |v: &Vec<f64>| v.iter().map(|a| a.exp() * 3.0 + 1.0).collect::<Vec<_>>();
            prop_assert_eq!(a12(&x, &y), a12(&t(&x), &t(&y)));
        }

        #[test]
        fn swapping_flips_the_verdict(pairs in prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 5..40), shift in -3.0..3.0f64) {
            let x: Vec<f64> = pairs.iter().map(|p| p.0 + shift).collect();
            let y: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            for o in [Orientation::LowerBetter, Orientation::HigherBetter] {
                prop_assert_eq!(wilcoxon_signed_rank(&x, &y, o), wilcoxon_signed_rank(&y, &x, o).flip());
            }
        }
    }
}
