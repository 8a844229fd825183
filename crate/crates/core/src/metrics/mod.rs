//! Quality indicators: IGD, IGD+ and normalized hypervolume.
//!
//! Indicators are computed on the feasible, nondominated part of a final
//! population. When that part is empty the run is marked failed and the
//! indicator takes a sentinel value ([`IGD_FAILURE`] or [`HV_FAILURE`]).

mod hv;

use std::fmt;
use std::str::FromStr;

use crate::model::{pareto_dominates, Solution};
use crate::scalar::Scalar;

pub use hv::{hypervolume_exact, hypervolume_monte_carlo, EXACT_MAX_OBJECTIVES, MC_SAMPLES};

/// IGD and IGD+ of a run without a feasible solution.
pub const IGD_FAILURE: f64 = 500.0;
/// HV of a run without a feasible solution.
pub const HV_FAILURE: f64 = 0.0;
/// Each normalized objective of the HV reference point.
pub const HV_REFERENCE: f64 = 1.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetricKind {
    Igd,
    IgdPlus,
    Hv,
}

impl MetricKind {
    pub const ALL: [MetricKind; 3] = [MetricKind::Igd, MetricKind::IgdPlus, MetricKind::Hv];

    pub fn as_str(self) -> &'static str {
        match self {
            MetricKind::Igd => "IGD",
            MetricKind::IgdPlus => "IGD+",
            MetricKind::Hv => "HV",
        }
    }

    pub fn higher_is_better(self) -> bool {
        self == MetricKind::Hv
    }

    pub fn failure_value(self) -> f64 {
        match self {
            MetricKind::Hv => HV_FAILURE,
            _ => IGD_FAILURE,
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "IGD" => Ok(MetricKind::Igd),
            "IGD+" | "IGDPLUS" | "IGD_PLUS" => Ok(MetricKind::IgdPlus),
            "HV" => Ok(MetricKind::Hv),
            _ => Err(format!("unknown metric `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricResult<T> {
    pub metric: MetricKind,
    pub value: T,
    pub failed: bool,
}

/// Objective vectors of the feasible solutions that no other feasible solution dominates.
pub fn feasible_nondominated<T: Scalar>(members: &[Solution<T>]) -> Vec<Vec<T>> {
    let feasible: Vec<&[T]> = members
        .iter()
        .filter(|s| s.is_feasible())
        .map(|s| s.f.as_slice())
        .collect();
    nondominated(&feasible)
}

/// The nondominated subset of `points`, in input order. Duplicates are all kept.
pub fn nondominated<T: Scalar>(points: &[&[T]]) -> Vec<Vec<T>> {
    points
        .iter()
        .filter(|p| !points.iter().any(|q| pareto_dominates(q, p)))
        .map(|p| p.to_vec())
        .collect()
}

fn distance<T: Scalar>(a: &[T], r: &[T]) -> T {
    a.iter()
        .zip(r)
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum::<T>()
        .sqrt()
}

/// Distance that only counts how far `a` is worse than `r`.
fn distance_plus<T: Scalar>(a: &[T], r: &[T]) -> T {
    a.iter()
        .zip(r)
        .map(|(&x, &y)| {
            let d = (x - y).max(T::zero());
            d * d
        })
        .sum::<T>()
        .sqrt()
}

fn mean_min<T: Scalar>(approx: &[Vec<T>], reference: &[Vec<T>], dist: fn(&[T], &[T]) -> T) -> T {
    let total: T = reference
        .iter()
        .map(|r| {
            approx
                .iter()
                .map(|a| dist(a, r))
                .fold(T::infinity(), T::min)
        })
        .sum();
    total / T::lit(reference.len() as f64)
}

/// Mean distance from each reference point to its nearest approximation point.
pub fn igd<T: Scalar>(approx: &[Vec<T>], reference: &[Vec<T>]) -> T {
    assert!(
        !approx.is_empty() && !reference.is_empty(),
        "IGD needs non-empty sets"
    );
    mean_min(approx, reference, distance)
}

/// IGD with the dominance-compliant distance `sqrt(sum max(a - r, 0)^2)`.
pub fn igd_plus<T: Scalar>(approx: &[Vec<T>], reference: &[Vec<T>]) -> T {
    assert!(
        !approx.is_empty() && !reference.is_empty(),
        "IGD+ needs non-empty sets"
    );
    mean_min(approx, reference, distance_plus)
}

/// Normalization box for the hypervolume.
#[derive(Clone, Debug, PartialEq)]
pub struct HvBounds<T> {
    pub ideal: Vec<T>,
    pub nadir: Vec<T>,
}

impl<T: Scalar> HvBounds<T> {
    /// Componentwise minimum and maximum of a reference front.
    pub fn from_front(front: &[Vec<T>]) -> Self {
        let m = front.first().map_or(0, Vec::len);
        let ideal = (0..m)
            .map(|j| front.iter().map(|p| p[j]).fold(T::infinity(), T::min))
            .collect();
        let nadir = (0..m)
            .map(|j| front.iter().map(|p| p[j]).fold(T::neg_infinity(), T::max))
            .collect();
        Self { ideal, nadir }
    }

    fn normalize(&self, p: &[T]) -> Vec<f64> {
        p.iter()
            .zip(self.ideal.iter().zip(&self.nadir))
            .map(|(&v, (&lo, &hi))| {
                let range = (hi - lo).as_f64().max(1e-12);
                (v - lo).as_f64() / range
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HvSettings {
    pub samples: usize,
    pub seed: u64,
}

impl Default for HvSettings {
    fn default() -> Self {
        Self {
            samples: MC_SAMPLES,
            seed: 0,
        }
    }
}

/// Hypervolume after normalizing by `bounds`, with reference point `1.1` in every
/// objective, divided by the reference box volume `1.1^m` so it lies in `[0, 1]`.
pub fn normalized_hv<T: Scalar>(
    approx: &[Vec<T>],
    bounds: &HvBounds<T>,
    settings: HvSettings,
) -> T {
    let m = bounds.ideal.len();
    let pts: Vec<Vec<f64>> = approx.iter().map(|p| bounds.normalize(p)).collect();
    let reference = vec![HV_REFERENCE; m];
    let raw = if m <= EXACT_MAX_OBJECTIVES {
        hypervolume_exact(&pts, &reference)
    } else {
        hypervolume_monte_carlo(&pts, &reference, settings.samples, settings.seed)
    };
    T::lit(raw / HV_REFERENCE.powi(m as i32))
}

/// Computes `kind` for a final population, applying the failure convention.
pub fn compute_metric<T: Scalar>(
    kind: MetricKind,
    members: &[Solution<T>],
    reference: &[Vec<T>],
    bounds: &HvBounds<T>,
    settings: HvSettings,
) -> MetricResult<T> {
    let front = feasible_nondominated(members);
    if front.is_empty() {
        return MetricResult {
            metric: kind,
            value: T::lit(kind.failure_value()),
            failed: true,
        };
    }
    let value = match kind {
        MetricKind::Igd => igd(&front, reference),
        MetricKind::IgdPlus => igd_plus(&front, reference),
        MetricKind::Hv => normalized_hv(&front, bounds, settings),
    };
    MetricResult {
        metric: kind,
        value,
        failed: false,
    }
}
